"""Builders for the standard hyperfield families and their structural checks.

Covers the Krasner and sign hyperfields, quotients ``GF(q)/G``, the family
``F_G`` with ``x + x = F - {x}``, the signed family over ``K x {1, -1}``, and
the family with ``x + y = F - {0, x, y}``; plus checks of the Massouros
containment conditions, large sums, triple sums, and a bounded search for
isomorphic quotients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Mapping, Optional, Sequence, Union

from hyperfield.core import FiniteHyperfield, HyperfieldError, Report, members_of, verify_axioms
from hyperfield.finite_field import build_finite_field, divisors, prime_powers
from hyperfield.groups import AbelianGroup

GroupSpec = Union[int, Sequence[int], AbelianGroup]


def as_group(G: GroupSpec, gen: str = "g") -> AbelianGroup:
    if isinstance(G, AbelianGroup):
        return G
    if isinstance(G, int):
        return AbelianGroup.cyclic(G, gen)
    factors = tuple(G)
    if len(factors) == 1:
        return AbelianGroup.cyclic(factors[0], gen)
    return AbelianGroup(factors, tuple(f"{gen}{i + 1}" for i in range(len(factors))))


@dataclass(eq=False)
class MassourosField:
    """A table hyperfield with a multiplicative map ``phi`` on nonzero elements.

    ``phi[x]`` is an abstract image index for each nonzero ``x``; ``phi[0]``
    is ``-1``.  Verification results are cached on first use.
    """

    field: FiniteHyperfield
    phi: tuple
    _verified: Optional[bool] = field(default=None, repr=False)

    def image(self, x: int) -> int:
        return self.phi[x]

    @property
    def images(self) -> frozenset:
        return frozenset(self.phi[1:])

    def verified(self) -> bool:
        if self._verified is None:
            self._verified = bool(verify_massouros(self.field, self.phi)) and bool(
                verify_large_sums(self)
            )
        return self._verified


@dataclass(frozen=True)
class IsoWitness:
    """``mapping[i]`` is the image in B of element i of A."""

    mapping: tuple

    def inverse(self) -> "IsoWitness":
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return IsoWitness(tuple(inv))


# -- builders ----------------------------------------------------------------


def build_krasner() -> FiniteHyperfield:
    return FiniteHyperfield(
        ["0", "1"],
        [[0, 0], [0, 1]],
        [[{0}, {1}], [{1}, {0, 1}]],
        name="krasner",
    )


def build_sign() -> FiniteHyperfield:
    # indices: 0, 1, -1 -> 0, 1, 2
    return FiniteHyperfield(
        ["0", "1", "-1"],
        [[0, 0, 0], [0, 1, 2], [0, 2, 1]],
        [[{0}, {1}, {2}], [{1}, {1}, {0, 1, 2}], [{2}, {0, 1, 2}, {2}]],
        name="sign",
    )


def _group_carrier(G: AbelianGroup):
    els = G.elements
    names = ["0"] + [G.name(e) for e in els]
    n = len(els) + 1
    mul = [[0] * n for _ in range(n)]
    for i, x in enumerate(els):
        for j, y in enumerate(els):
            mul[i + 1][j + 1] = G.index(G.op(x, y)) + 1
    return names, mul, n


def build_FG(G: GroupSpec) -> MassourosField:
    """``F_G``: ``x + x = F - {x}`` and ``x + y = {x, y}`` for distinct nonzero x, y."""
    G = as_group(G)
    if G.order < 3:
        raise HyperfieldError("F_G needs |G| >= 3")
    names, mul, n = _group_carrier(G)
    full = set(range(n))
    add = [[None] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            if x == 0 or y == 0:
                add[x][y] = {x + y}
            elif x == y:
                add[x][y] = full - {x}
            else:
                add[x][y] = {x, y}
    F = FiniteHyperfield(names, mul, add, name=f"F_G({'x'.join(map(str, G.factors))})")
    return MassourosField(F, (-1,) + tuple(range(n - 1)))


def build_massouros_original(K: GroupSpec) -> MassourosField:
    """Hyperfield on ``K x {1, -1}`` plus zero, with ``phi`` the projection onto K.

    Element ``(k, s)`` sits at index ``1 + 2*index(k) + s`` with ``s = 0`` for
    the positive sign, so ``K = Z/3`` gives ``0, 1, -1, a, -a, a^2, -a^2``.
    """
    K = as_group(K, gen="a")
    if K.order < 3:
        raise HyperfieldError("K must have more than two elements")
    ks = K.elements
    n = 1 + 2 * len(ks)

    def idx(k, s):
        return 1 + 2 * K.index(k) + s

    names = ["0"]
    for k in ks:
        names += [K.name(k), "-" + K.name(k)]
    mul = [[0] * n for _ in range(n)]
    for x, s in product(ks, (0, 1)):
        for w, t in product(ks, (0, 1)):
            mul[idx(x, s)][idx(w, t)] = idx(K.op(x, w), s ^ t)
    L = set(range(1, n))
    add = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a == 0 or b == 0:
                add[a][b] = {a + b}
                continue
            ka, kb = (a - 1) // 2, (b - 1) // 2
            pair_a = {1 + 2 * ka, 2 + 2 * ka}
            if ka != kb:
                add[a][b] = pair_a | {1 + 2 * kb, 2 + 2 * kb}
            elif a == b:
                add[a][b] = L - pair_a
            else:
                add[a][b] = {0} | (L - pair_a)
    F = FiniteHyperfield(names, mul, add, name=f"massouros({'x'.join(map(str, K.factors))})")
    return MassourosField(F, (-1,) + tuple((i - 1) // 2 for i in range(1, n)))


def build_m7() -> MassourosField:
    """The 7-element example over ``K = {1, a, a^2}``."""
    M = build_massouros_original(AbelianGroup.cyclic(3, "a"))
    M.field.name = "m7"
    return M


def build_nakassis(G: GroupSpec) -> FiniteHyperfield:
    """``x + y = F - {0, x, y}`` for distinct nonzero x, y and ``x + x = {0, x}``."""
    G = as_group(G)
    if G.order <= 3:
        raise HyperfieldError("the group needs more than 3 elements")
    names, mul, n = _group_carrier(G)
    full = set(range(n))
    add = [[None] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            if x == 0 or y == 0:
                add[x][y] = {x + y}
            elif x == y:
                add[x][y] = {0, x}
            else:
                add[x][y] = full - {0, x, y}
    return FiniteHyperfield(names, mul, add, name=f"nakassis({'x'.join(map(str, G.factors))})")


@lru_cache(maxsize=None)
def build_quotient(q: int, d: int) -> FiniteHyperfield:
    """``GF(q)/G`` for the subgroup G of order d; classes sorted by least member."""
    K = build_finite_field(q)
    if (q - 1) % d:
        raise HyperfieldError(f"{d} does not divide {q - 1}")
    G = K.subgroup(d)
    cls_of = {0: 0}
    reps = [0]
    for x in range(1, q):
        if x not in cls_of:
            c = len(reps)
            reps.append(x)
            for g in G:
                cls_of[K.mul(x, g)] = c
    n = len(reps)
    mul = [[cls_of[K.mul(reps[a], reps[b])] for b in range(n)] for a in range(n)]
    add = [
        [{cls_of[K.add(K.mul(reps[a], g1), K.mul(reps[b], g2))] for g1 in G for g2 in G} for b in range(n)]
        for a in range(n)
    ]
    return FiniteHyperfield([f"[{r}]" for r in reps], mul, add, name=f"GF({q})/{d}")


# -- Massouros conditions ---------------------------------------------------


def phi_tuple(F: FiniteHyperfield, phi) -> tuple:
    """Normalise a phi given as a sequence or a name -> image mapping."""
    if isinstance(phi, Mapping):
        out = [-1] * F.size
        for k, v in phi.items():
            out[F.index(k) if isinstance(k, str) else int(k)] = int(v)
        return tuple(out)
    phi = tuple(int(v) for v in phi)
    if len(phi) == F.size - 1:
        phi = (-1,) + phi
    if len(phi) != F.size:
        raise HyperfieldError("phi must cover every nonzero element")
    return (-1,) + phi[1:]


def verify_massouros(F: FiniteHyperfield, phi) -> Report:
    phi = phi_tuple(F, phi)
    rep = Report(title=f"massouros {F.name}".strip())
    checks = ("phi_total", "homomorphism", "image_size", "phi_neg", "same_image", "distinct_image")
    for c in checks:
        rep.record(c)
    names = F.names
    nz = list(F.nonzero)
    missing = [names[x] for x in nz if phi[x] < 0]
    if missing:
        rep.record("phi_total", tuple(missing[:1]))
        return rep

    seen = {}
    for x in nz:
        for y in nz:
            key = (phi[x], phi[y])
            img = phi[F.mul(x, y)]
            if seen.setdefault(key, (x, y, img))[2] != img:
                x0, y0, _ = seen[key]
                rep.record("homomorphism", (names[x0], names[y0], names[x], names[y]))
                break
        if rep.checks["homomorphism"] is not None:
            break

    images = sorted(set(phi[x] for x in nz))
    rep.data["image_size"] = len(images)
    if len(images) < 3:
        rep.record("image_size", (len(images),))

    for x in nz:
        if F.neg_table[x] < 0 or phi[F.neg_table[x]] != phi[x]:
            rep.record("phi_neg", (names[x],))
            break

    fiber = {h: frozenset(x for x in nz if phi[x] == h) for h in images}
    nonzero = frozenset(nz)
    for x in nz:
        for y in nz:
            s = F.add_sets[x][y]
            if phi[x] == phi[y]:
                need = nonzero - fiber[phi[x]]
                check = "same_image"
            else:
                need = fiber[phi[x]] | fiber[phi[y]]
                check = "distinct_image"
            if not need <= s and rep.checks[check] is None:
                missing_el = min(need - s)
                rep.record(check, (names[x], names[y], names[missing_el]))
    return rep


def verify_large_sums(M: MassourosField) -> Report:
    """Every triple with ``phi(x) == phi(y) != phi(z)`` must sum to the whole carrier."""
    F, phi = M.field, M.phi
    rep = Report(title=f"large sums {F.name}".strip())
    rep.record("large_sums")
    checked = 0
    for x in F.nonzero:
        for y in F.nonzero:
            if phi[x] != phi[y]:
                continue
            xy = F.add_masks[x][y]
            for z in F.nonzero:
                if phi[z] == phi[x]:
                    continue
                checked += 1
                if F.sum_mask(xy, z) != F.full_mask:
                    rep.record("large_sums", (F.names[x], F.names[y], F.names[z]))
    rep.data["triples_checked"] = checked
    return rep


def verify_nakassis_triples(F: FiniteHyperfield) -> Report:
    rep = Report(title=f"triple sums {F.name}".strip())
    applicable = F.size >= 6
    rep.data["applicable"] = applicable
    if not applicable:
        rep.notes.append(f"not applicable: carrier has {F.size} < 6 elements")
        rep.data["observed"] = {
            f"{F.names[x]}+{F.names[y]}+{F.names[z]}": F.fmt_set(
                members_of(F.sum_mask(F.add_masks[x][y], z))
            )
            for x, y, z in combinations(F.nonzero, 3)
        }
        return rep
    rep.record("triples_cover")
    for x, y, z in combinations(F.nonzero, 3):
        if F.sum_mask(F.add_masks[x][y], z) != F.full_mask:
            rep.record("triples_cover", (F.names[x], F.names[y], F.names[z]))
    return rep


# -- isomorphism search ------------------------------------------------------


def _orders(F: FiniteHyperfield) -> list:
    out = [0] * F.size
    for x in F.nonzero:
        k, y = 1, x
        while y != F.one:
            y = F.mul(y, x)
            k += 1
        out[x] = k
    return out


def _generators(F: FiniteHyperfield, orders) -> list:
    gens = []
    span = {F.one}
    for x in sorted(F.nonzero, key=lambda v: (-orders[v], v)):
        if x in span:
            continue
        gens.append(x)
        frontier = list(span)
        span = set(span)
        while frontier:
            nxt = []
            for h in frontier:
                y = F.mul(h, x)
                if y not in span:
                    span.add(y)
                    nxt.append(y)
            frontier = nxt
        if len(span) == F.size - 1:
            break
    return gens


def _extend(A, B, gens, imgs):
    """Extend generator images to a multiplicative map; None on conflict."""
    f = {A.one: B.one}
    frontier = [A.one]
    while frontier:
        nxt = []
        for h in frontier:
            for g, t in zip(gens, imgs):
                y, v = A.mul(h, g), B.mul(f[h], t)
                if y in f:
                    if f[y] != v:
                        return None
                else:
                    f[y] = v
                    nxt.append(y)
        frontier = nxt
    if len(set(f.values())) != len(f):
        return None
    return f


def iso_search(A: FiniteHyperfield, B: FiniteHyperfield) -> Optional[IsoWitness]:
    """First isomorphism ``A -> B`` in generator-image order, or None."""
    if A.size != B.size:
        return None
    oa, ob = _orders(A), _orders(B)
    if sorted(oa[1:]) != sorted(ob[1:]):
        return None
    gens = _generators(A, oa)
    cands = [[y for y in B.nonzero if ob[y] == oa[g]] for g in gens]
    n = A.size

    def search(i, imgs):
        f = _extend(A, B, gens[:i], imgs)
        if f is None:
            return None
        if i == len(gens):
            if len(f) != n - 1:
                return None
            m = [0] * n
            for x, y in f.items():
                m[x] = y
            return m if _preserves_addition(A, B, m) else None
        for t in cands[i]:
            found = search(i + 1, imgs + [t])
            if found is not None:
                return found
        return None

    m = search(0, [])
    return None if m is None else IsoWitness(tuple(m))


def _preserves_addition(A, B, m) -> bool:
    for a in range(A.size):
        for b in range(a, A.size):
            if frozenset(m[x] for x in A.add_sets[a][b]) != B.add_sets[m[a]][m[b]]:
                return False
    return True


def check_iso(A: FiniteHyperfield, B: FiniteHyperfield, w: IsoWitness) -> bool:
    m = w.mapping
    if sorted(m) != list(range(B.size)) or m[0] != 0 or m[A.one] != B.one:
        return False
    for a in range(A.size):
        for b in range(A.size):
            if m[A.mul(a, b)] != B.mul(m[a], m[b]):
                return False
    return _preserves_addition(A, B, list(m))


def quotient_scan(H: FiniteHyperfield, qmax: int = 64) -> Report:
    """Look for ``GF(q)/G`` isomorphic to H over all prime powers ``q <= qmax``.

    A miss is bounded evidence only; it says nothing about larger fields.
    """
    if qmax > 64:
        raise HyperfieldError("qmax is limited to 64")
    rep = Report(title=f"quotient scan {H.name} qmax={qmax}".strip())
    candidates, hits = [], []
    for q in prime_powers(qmax):
        for d in divisors(q - 1):
            if 1 + (q - 1) // d != H.size:
                continue
            candidates.append((q, d))
            w = iso_search(H, build_quotient(q, d))
            if w is not None:
                hits.append((q, d))
                rep.data.setdefault("witnesses", {})[f"{q},{d}"] = list(w.mapping)
    rep.data["candidates"] = candidates
    rep.data["hits"] = hits
    return rep


# -- builtin registry ----------------------------------------------------------


def builtin(spec: str):
    """Resolve a builtin id to ``(field, phi_or_None)``.

    Ids: ``krasner``, ``sign``, ``m7``, ``fg:N[,M...]``, ``massouros:N[,M...]``,
    ``nakassis:N[,M...]``, ``quotient:Q:D``.
    """
    kind, _, arg = spec.partition(":")
    kind = kind.lower()
    if kind == "krasner":
        return build_krasner(), None
    if kind == "sign":
        return build_sign(), None
    if kind == "m7":
        M = build_m7()
        return M.field, M.phi
    if kind == "quotient":
        q, _, d = arg.partition(":")
        return build_quotient(int(q), int(d)), None
    factors = tuple(int(v) for v in arg.split(",")) if arg else ()
    if not factors:
        raise HyperfieldError(f"builtin {spec!r} needs group orders, e.g. {kind}:3")
    if kind == "fg":
        M = build_FG(factors)
        return M.field, M.phi
    if kind == "massouros":
        M = build_massouros_original(factors)
        return M.field, M.phi
    if kind == "nakassis":
        return build_nakassis(factors), None
    raise HyperfieldError(f"unknown builtin field {spec!r}")


__all__ = [
    "AbelianGroup",
    "IsoWitness",
    "MassourosField",
    "as_group",
    "build_FG",
    "build_krasner",
    "build_m7",
    "build_massouros_original",
    "build_nakassis",
    "build_quotient",
    "build_sign",
    "builtin",
    "check_iso",
    "iso_search",
    "phi_tuple",
    "quotient_scan",
    "verify_axioms",
    "verify_large_sums",
    "verify_massouros",
    "verify_nakassis_triples",
]
