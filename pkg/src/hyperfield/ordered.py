"""Ordered hyperfields with value group Z, and the dyadic quotient Q/P.

An element is ``None`` (the adjoined least element, written Bottom) or an
integer level; multiplication adds levels.  Distinct elements add to their
maximum.  ``x + x`` is every element strictly below x (open mode) or at most
x (closed mode); both include Bottom.

Sets produced by these sums are infinite down-sets, so :class:`OrderedSet`
keeps a symbolic normal form and all axiom checks compare sets exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from hyperfield.core import Report

BOTTOM = None
OPEN, CLOSED = "open", "closed"


def _check_mode(mode):
    if mode not in (OPEN, CLOSED):
        raise ValueError(f"mode must be 'open' or 'closed', not {mode!r}")


def fmt_elem(x: Optional[int]) -> str:
    return "0" if x is None else str(x)


@dataclass(frozen=True)
class OrderedSet:
    """``{Bottom}?  U  finite  U  {k : k <= down_to}``.

    Levels are integers, so a strict threshold ``k < t`` is stored as
    ``k <= t - 1``.  Normal form: no finite level is covered by the down-set
    and ``down_to + 1`` is never listed separately.
    """

    bottom: bool = False
    finite: frozenset = frozenset()
    down_to: Optional[int] = None

    @classmethod
    def make(cls, bottom=False, finite=(), down_to=None) -> "OrderedSet":
        finite = set(finite)
        if down_to is not None:
            finite = {k for k in finite if k > down_to}
            while down_to + 1 in finite:
                down_to += 1
                finite.discard(down_to)
        return cls(bool(bottom), frozenset(finite), down_to)

    @classmethod
    def single(cls, x: Optional[int]) -> "OrderedSet":
        return cls(True) if x is None else cls.make(finite=(x,))

    def __contains__(self, x) -> bool:
        if x is None:
            return self.bottom
        return x in self.finite or (self.down_to is not None and x <= self.down_to)

    @property
    def empty(self) -> bool:
        return not self.bottom and not self.finite and self.down_to is None

    def union(self, other: "OrderedSet") -> "OrderedSet":
        if self.down_to is None:
            d = other.down_to
        elif other.down_to is None:
            d = self.down_to
        else:
            d = max(self.down_to, other.down_to)
        return OrderedSet.make(self.bottom or other.bottom, self.finite | other.finite, d)

    def atoms(self):
        if self.bottom:
            yield ("elem", None)
        for k in sorted(self.finite):
            yield ("elem", k)
        if self.down_to is not None:
            yield ("down", self.down_to)

    def window(self, lo: int, hi: int) -> list:
        """Members with level in ``[lo, hi]``, Bottom first when present."""
        out = [None] if self.bottom else []
        return out + [k for k in range(lo, hi + 1) if k in self]

    def shift(self, a: Optional[int]) -> "OrderedSet":
        """Multiply every member by a."""
        if a is None:
            return OrderedSet(True) if not self.empty else self
        return OrderedSet.make(
            self.bottom,
            {k + a for k in self.finite},
            None if self.down_to is None else self.down_to + a,
        )

    def __str__(self):
        parts = ["0"] if self.bottom else []
        if self.down_to is not None:
            parts.append(f"...,{self.down_to}")
        parts += [str(k) for k in sorted(self.finite)]
        return "{" + ", ".join(parts) + "}"


def oadd(mode: str, x: Optional[int], y: Optional[int]) -> OrderedSet:
    _check_mode(mode)
    if x is None:
        return OrderedSet.single(y)
    if y is None or x != y:
        return OrderedSet.single(x if y is None else max(x, y))
    return OrderedSet.make(True, (), x - 1 if mode == OPEN else x)


def _atom_sum(mode, a, b) -> OrderedSet:
    (ka, va), (kb, vb) = a, b
    if ka == "elem" and kb == "elem":
        return oadd(mode, va, vb)
    if ka == "elem":
        (ka, va), (kb, vb) = b, a
    # ka == "down": {k <= va} + vb
    if kb == "elem":
        if vb is None:
            return OrderedSet.make(False, (), va)
        if vb > va:
            return OrderedSet.single(vb)
        # k < vb gives vb, k == vb gives the down-set of vb, vb < k <= va gives k
        return OrderedSet.make(True, (), va)
    return OrderedSet.make(True, (), max(va, vb))


def oset_sum(mode: str, s: OrderedSet, t: OrderedSet) -> OrderedSet:
    """``S + T`` computed exactly from the atoms of both sets."""
    out = OrderedSet()
    for a in s.atoms():
        for b in t.atoms():
            out = out.union(_atom_sum(mode, a, b))
    return out


def omul(x: Optional[int], y: Optional[int]) -> Optional[int]:
    return None if x is None or y is None else x + y


def overify_window(mode: str, lo: int, hi: int) -> Report:
    """Hyperfield axioms on all elements with level in ``[lo, hi]`` plus Bottom."""
    _check_mode(mode)
    if lo >= hi:
        raise ValueError("need lo < hi")
    rep = Report(title=f"ordered {mode} [{lo},{hi}]")
    for c in ("commutative", "identity", "unique_negatives", "reversibility", "associative",
              "distributive", "nonempty"):
        rep.record(c)
    elems = [None] + list(range(lo, hi + 1))
    S = OrderedSet.single

    for x in elems:
        if oadd(mode, None, x) != S(x):
            rep.record("identity", (fmt_elem(x),))
        negs = [y for y in elems if None in oadd(mode, x, y)]
        if negs != [x]:
            rep.record("unique_negatives", (fmt_elem(x),))
        for y in elems:
            xy = oadd(mode, x, y)
            if xy.empty:
                rep.record("nonempty", (fmt_elem(x), fmt_elem(y)))
            if xy != oadd(mode, y, x):
                rep.record("commutative", (fmt_elem(x), fmt_elem(y)))
            for z in elems:
                # x in y+z  =>  z in x + (-y), and -y = y here
                if x in oadd(mode, y, z) and z not in oadd(mode, x, y):
                    rep.record("reversibility", tuple(map(fmt_elem, (x, y, z))))
                left = oset_sum(mode, xy, S(z))
                right = oset_sum(mode, S(x), oadd(mode, y, z))
                if left != right:
                    rep.record("associative", tuple(map(fmt_elem, (x, y, z))))
                if oadd(mode, y, z).shift(x) != oadd(mode, omul(x, y), omul(x, z)):
                    rep.record("distributive", tuple(map(fmt_elem, (x, y, z))))
    return rep


def self_sum_contains(mode: str, x: int) -> bool:
    return x in oadd(mode, x, x)


# -- dyadic quotient Q/P ---------------------------------------------------------


def v2(n: int) -> int:
    if n == 0:
        raise ValueError("v2(0) is undefined")
    n = abs(n)
    return (n & -n).bit_length() - 1


@dataclass(frozen=True)
class DyadicClass:
    """Class ``2^valuation * P`` of a nonzero rational, or the zero class."""

    valuation: Optional[int]

    @property
    def is_zero(self) -> bool:
        return self.valuation is None

    @property
    def level(self) -> Optional[int]:
        # 2P < P, so the level is the negated valuation
        return None if self.valuation is None else -self.valuation

    def __str__(self):
        if self.valuation is None:
            return "0"
        v = self.valuation
        if v == 0:
            return "P"
        return f"{2 ** v}P" if v > 0 else f"(1/{2 ** -v})P"


def dyadic_class(r) -> DyadicClass:
    r = Fraction(r)
    if r == 0:
        return DyadicClass(None)
    return DyadicClass(v2(r.numerator) - v2(r.denominator))


def _odd_parts(bound: int) -> Iterable[Fraction]:
    odds = range(1, bound + 1, 2)
    seen = set()
    for a in odds:
        for b in odds:
            f = Fraction(a, b)
            if f not in seen:
                seen.add(f)
                yield f
                yield -f


ZERO_CLASS_NOTE = (
    "the zero class belongs to 2^nP + 2^nP (for example 1 + (-1) = 0); the usual "
    "listing {..., 8P, 4P, 2P} leaves it out"
)


def dyadic_sum_check(m: int, n: int, window=(-8, 8), sample_bound: int = 9) -> Report:
    """Compare class sums in Q/P with the open-ordered rule.

    Soundness: every sum of sampled representatives ``2^m a/b`` and
    ``2^n c/d`` (odd parts bounded by ``sample_bound``) lands in the
    predicted set.  Completeness: every predicted class with valuation in
    ``window`` has an explicit witness pair.
    """
    lo, hi = window
    rep = Report(title=f"dyadic 2^{m}P + 2^{n}P")
    rep.record("soundness")
    rep.record("completeness")
    predicted = oadd(OPEN, -m, -n)
    rep.data["predicted"] = str(predicted)

    odd = list(_odd_parts(sample_bound))
    xs = [Fraction(2) ** m * f for f in odd]
    ys = [Fraction(2) ** n * f for f in odd]
    samples = 0
    for x in xs:
        for y in ys:
            samples += 1
            c = dyadic_class(x + y)
            if c.level not in predicted:
                rep.record("soundness", (str(x), str(y), str(c)))
    rep.data["samples"] = samples

    witnesses = {}
    if m == n:
        base = Fraction(2) ** m
        witnesses["0"] = (base, -base)
        for k in range(max(lo, m + 1), hi + 1):
            witnesses[str(DyadicClass(k))] = (base, Fraction(2) ** k - base)
        rep.notes.append(ZERO_CLASS_NOTE)
    else:
        witnesses[str(DyadicClass(min(m, n)))] = (Fraction(2) ** m, Fraction(2) ** n)
    expected = [None] + [-k for k in range(lo, hi + 1)]
    for level in expected:
        if level not in predicted:
            continue
        name = str(DyadicClass(None if level is None else -level))
        pair = witnesses.get(name)
        ok = (
            pair is not None
            and dyadic_class(pair[0]).valuation == m
            and dyadic_class(pair[1]).valuation == n
            and dyadic_class(pair[0] + pair[1]).level == level
        )
        if not ok:
            rep.record("completeness", (name,))
    rep.data["witnesses"] = {k: f"{a} + {b}" for k, (a, b) in witnesses.items()}
    return rep
