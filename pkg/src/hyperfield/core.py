"""Finite hyperfields given by explicit tables.

Elements are small integers indexing a fixed carrier; index 0 is always the
additive zero.  Hyperaddition returns a ``frozenset`` of indices (an *ESet*).
Internally the addition table is also kept as ``uint64`` bitmasks so the
exhaustive axiom checks can run in :mod:`hyperfield._kernels`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from hyperfield import _kernels

ESet = frozenset
MAX_CARRIER = 64


class HyperfieldError(ValueError):
    pass


class InvalidElementError(HyperfieldError, IndexError):
    pass


class DivisionByZeroError(HyperfieldError, ZeroDivisionError):
    pass


def mask_of(members: Iterable[int]) -> int:
    m = 0
    for x in members:
        m |= 1 << x
    return m


def members_of(mask: int) -> frozenset:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


class FiniteHyperfield:
    """A hyperfield on ``n <= 64`` elements given by its two tables.

    ``mul`` is an ``n x n`` table of indices and ``add`` an ``n x n`` table of
    nonempty index collections.  Negatives are derived: ``neg[x]`` is the
    unique ``y`` with ``0 in x + y``.  With ``strict=True`` (the default) a
    table without unique negatives or with asymmetric entries is rejected;
    ``strict=False`` keeps such tables around so :func:`verify_axioms` can
    report on them.
    """

    def __init__(
        self,
        names: Sequence[str],
        mul: Sequence[Sequence[int]],
        add: Sequence[Sequence[Iterable[int]]],
        one: int = 1,
        name: str = "",
        strict: bool = True,
    ):
        n = len(names)
        if n < 2:
            raise HyperfieldError("a hyperfield needs at least two elements")
        if n > MAX_CARRIER:
            raise HyperfieldError(f"carrier of size {n} exceeds {MAX_CARRIER}")
        if len(set(names)) != n:
            raise HyperfieldError("element names must be distinct")
        self.name = name
        self.names = tuple(str(s) for s in names)
        self.size = n
        self.zero = 0
        self.one = int(one)
        self._index = {s: i for i, s in enumerate(self.names)}

        mul_arr = np.asarray(mul, dtype=np.int64)
        if mul_arr.shape != (n, n):
            raise HyperfieldError(f"mul table must be {n}x{n}")
        if mul_arr.min() < 0 or mul_arr.max() >= n:
            raise InvalidElementError("mul table entry out of range")
        if len(add) != n or any(len(row) != n for row in add):
            raise HyperfieldError(f"add table must be {n}x{n}")
        sets = []
        for a, row in enumerate(add):
            out_row = []
            for b, entry in enumerate(row):
                s = frozenset(int(x) for x in entry)
                if not s:
                    raise HyperfieldError(f"empty sum {self.names[a]} + {self.names[b]}")
                if min(s) < 0 or max(s) >= n:
                    raise InvalidElementError(
                        f"sum {self.names[a]} + {self.names[b]} has an element out of range"
                    )
                out_row.append(s)
            sets.append(tuple(out_row))
        if not 0 < self.one < n:
            raise InvalidElementError("one must be a nonzero element")

        self.mul_table = mul_arr
        self.mul_table.setflags(write=False)
        self.add_sets = tuple(sets)
        self.add_masks = [[mask_of(s) for s in row] for row in sets]
        self.add_table = np.array(self.add_masks, dtype=np.uint64)
        self.add_table.setflags(write=False)
        self.full_mask = (1 << n) - 1
        self.carrier = frozenset(range(n))

        neg = []
        for x in range(n):
            ys = [y for y in range(n) if 0 in sets[x][y]]
            neg.append(ys[0] if len(ys) == 1 else -1)
        self.neg_table = tuple(neg)

        inv = [-1] * n
        for x in range(1, n):
            for y in range(1, n):
                if mul_arr[x, y] == self.one:
                    inv[x] = y
                    break
        self.inv_table = tuple(inv)

        if strict:
            bad = [self.names[x] for x in range(n) if neg[x] < 0]
            if bad:
                raise HyperfieldError(f"no unique negative for {', '.join(bad)}")
            for a in range(n):
                for b in range(a + 1, n):
                    if sets[a][b] != sets[b][a] or mul_arr[a, b] != mul_arr[b, a]:
                        raise HyperfieldError(
                            f"tables not symmetric at ({self.names[a]}, {self.names[b]})"
                        )

    # -- element helpers ---------------------------------------------------

    def __repr__(self):
        return f"FiniteHyperfield({self.name or '?'!s}, n={self.size})"

    def __len__(self):
        return self.size

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InvalidElementError(f"unknown element {name!r}") from None

    def check(self, a) -> int:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.size:
            raise InvalidElementError(f"element {a!r} is not in 0..{self.size - 1}")
        return int(a)

    def fmt(self, a: int) -> str:
        return self.names[a]

    def fmt_set(self, s: Iterable[int]) -> str:
        return "{" + ", ".join(self.names[x] for x in sorted(s)) + "}"

    @property
    def nonzero(self) -> range:
        return range(1, self.size)

    # -- arithmetic ----------------------------------------------------------

    def add(self, a: int, b: int) -> frozenset:
        return self.add_sets[self.check(a)][self.check(b)]

    def set_sum(self, s: Iterable[int], t: Iterable[int]) -> frozenset:
        """``S + T``: the union of ``a + b`` over ``a in S`` and ``b in T``."""
        m = 0
        masks = self.add_masks
        t = [self.check(b) for b in t]
        for a in s:
            row = masks[self.check(a)]
            for b in t:
                m |= row[b]
        return members_of(m)

    def sum_mask(self, mask: int, c: int) -> int:
        masks = self.add_masks
        out = 0
        i = 0
        while mask:
            if mask & 1:
                out |= masks[i][c]
            mask >>= 1
            i += 1
        return out

    def neg(self, a: int) -> int:
        y = self.neg_table[self.check(a)]
        if y < 0:
            raise HyperfieldError(f"{self.names[a]} has no unique negative")
        return y

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[self.check(a), self.check(b)])

    def inv(self, a: int) -> int:
        if self.check(a) == 0:
            raise DivisionByZeroError("zero has no inverse")
        y = self.inv_table[a]
        if y < 0:
            raise HyperfieldError(f"{self.names[a]} has no inverse")
        return y

    def scale(self, a: int, s: Iterable[int]) -> frozenset:
        row = self.mul_table[self.check(a)]
        return frozenset(int(row[self.check(x)]) for x in s)


def hadd(F: FiniteHyperfield, a: int, b: int) -> frozenset:
    return F.add(a, b)


def hsum(F: FiniteHyperfield, terms: Sequence[Iterable[int]]) -> frozenset:
    """Left fold of set sums; the empty sum is ``{0}``."""
    return reduce(F.set_sum, terms, frozenset({0}))


def neg(F: FiniteHyperfield, a: int) -> int:
    return F.neg(a)


def mul(F: FiniteHyperfield, a: int, b: int) -> int:
    return F.mul(a, b)


def inv(F: FiniteHyperfield, a: int) -> int:
    return F.inv(a)


def scale_set(F: FiniteHyperfield, a: int, s: Iterable[int]) -> frozenset:
    return F.scale(a, s)


# -- reports -----------------------------------------------------------------


@dataclass
class Report:
    """Named checks, each either passing (``None``) or failing with a witness."""

    title: str = ""
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def record(self, check: str, witness=None):
        if witness is None:
            self.checks.setdefault(check, None)
        elif self.checks.get(check) is None:
            self.checks[check] = witness

    @property
    def passed(self) -> bool:
        return all(w is None for w in self.checks.values())

    @property
    def failures(self) -> dict:
        return {k: w for k, w in self.checks.items() if w is not None}

    def __bool__(self):
        return self.passed

    def lines(self) -> list:
        out = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"] if self.title else []
        for k, w in self.checks.items():
            out.append(f"  {k}: " + ("ok" if w is None else f"FAIL witness={w}"))
        out.extend(f"  note: {n}" for n in self.notes)
        return out

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": {k: (None if w is None else _jsonable(w)) for k, w in self.checks.items()},
            "notes": list(self.notes),
            "data": _jsonable(self.data),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, np.integer):
        return int(x)
    return x


class AxiomReport(Report):
    pass


AXIOMS = (
    "add_commutative",
    "add_associative",
    "zero_identity",
    "unique_negatives",
    "reversibility",
    "mul_abelian_group",
    "distributive",
    "zero_absorbing",
)


def verify_axioms(F: FiniteHyperfield) -> AxiomReport:
    """Check every hyperfield axiom exhaustively, collecting all failures.

    Witnesses are the lexicographically first offending element tuple for
    each axiom, given as element names.
    """
    n = F.size
    rep = AxiomReport(title=f"axioms {F.name}".strip())
    for k in AXIOMS:
        rep.record(k)
    names = F.names
    sets = F.add_sets
    table = F.add_table

    def w(*xs):
        return tuple(names[x] for x in xs)

    for a in range(n):
        for b in range(a + 1, n):
            if sets[a][b] != sets[b][a]:
                rep.record("add_commutative", w(a, b))
                break

    hit = _kernels.assoc_witness(table)
    if hit[0] >= 0:
        rep.record("add_associative", w(*hit))

    for h in range(n):
        if sets[0][h] != {h}:
            rep.record("zero_identity", w(0, h))
            break
    for e in range(1, n):
        if all(sets[e][h] == {h} for h in range(n)):
            rep.record("zero_identity", w(e))
            break

    for x in range(n):
        if F.neg_table[x] < 0:
            rep.record("unique_negatives", w(x))
            break

    neg_arr = np.array(F.neg_table, dtype=np.int64)
    hit = _kernels.reversibility_witness(table, neg_arr)
    if hit[0] >= 0:
        rep.record("reversibility", w(*hit))

    _check_mul_group(F, rep, w)

    mt = F.mul_table
    if np.any(mt[0] != 0) or np.any(mt[:, 0] != 0):
        bad = int(np.flatnonzero((mt[0] != 0) | (mt[:, 0] != 0))[0])
        rep.record("zero_absorbing", w(bad))

    hit = _kernels.distrib_witness(table, np.ascontiguousarray(mt))
    if hit[0] >= 0:
        rep.record("distributive", w(*hit))
    return rep


def _check_mul_group(F: FiniteHyperfield, rep: Report, w):
    mt = F.mul_table
    nz = np.arange(1, F.size)
    sub = mt[1:, 1:]
    if np.any(sub == 0):
        a, b = np.argwhere(sub == 0)[0] + 1
        rep.record("mul_abelian_group", w(a, b))
        return
    if np.any(sub != sub.T):
        a, b = np.argwhere(sub != sub.T)[0] + 1
        rep.record("mul_abelian_group", w(a, b))
        return
    left = mt[mt[nz][:, nz][:, :, None], nz[None, None, :]]
    right = mt[nz[:, None, None], mt[nz][:, nz][None, :, :]]
    if np.any(left != right):
        a, b, c = np.argwhere(left != right)[0] + 1
        rep.record("mul_abelian_group", w(a, b, c))
        return
    if np.any(mt[F.one, nz] != nz):
        rep.record("mul_abelian_group", w(F.one))
        return
    for x in nz:
        if F.inv_table[x] < 0:
            rep.record("mul_abelian_group", w(x))
            return
