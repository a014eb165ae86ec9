"""Finite abelian groups as products of cyclic factors."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, prod
from typing import Sequence


@dataclass(frozen=True)
class AbelianGroup:
    """``Z/n1 x Z/n2 x ...``; elements are residue tuples, listed lexicographically.

    Index 0 is the identity.  ``gen_names`` label the canonical generators
    (one per factor) and drive the multiplicative display names.
    """

    factors: tuple
    gen_names: tuple = ()

    def __post_init__(self):
        factors = tuple(int(f) for f in self.factors)
        if any(f < 2 for f in factors):
            raise ValueError("cyclic factor orders must be >= 2")
        object.__setattr__(self, "factors", factors)
        if not self.gen_names:
            names = ("g",) if len(factors) == 1 else tuple(f"g{i + 1}" for i in range(len(factors)))
            object.__setattr__(self, "gen_names", names)
        if len(self.gen_names) != len(factors):
            raise ValueError("one generator name per factor")

    @classmethod
    def cyclic(cls, n: int, gen: str = "g") -> "AbelianGroup":
        return cls((n,), (gen,))

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def elements(self) -> list:
        return list(itertools.product(*(range(f) for f in self.factors)))

    def index(self, elem: Sequence[int]) -> int:
        i = 0
        for r, f in zip(elem, self.factors):
            i = i * f + (r % f)
        return i

    def op(self, x, y) -> tuple:
        return tuple((a + b) % f for a, b, f in zip(x, y, self.factors))

    def name(self, elem) -> str:
        parts = []
        for r, g in zip(elem, self.gen_names):
            if r == 1:
                parts.append(g)
            elif r > 1:
                parts.append(f"{g}^{r}")
        return "*".join(parts) if parts else "1"

    def element_order(self, elem) -> int:
        out = 1
        for r, f in zip(elem, self.factors):
            k = f // gcd(r, f)
            out = out * k // gcd(out, k)
        return out


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism fixed by the images of the source's canonical generators."""

    source: AbelianGroup
    target: AbelianGroup
    images: tuple

    def __post_init__(self):
        if len(self.images) != len(self.source.factors):
            raise ValueError("one image per source generator")
        for f, img in zip(self.source.factors, self.images):
            if f % self.target.element_order(tuple(img)) != 0:
                raise ValueError(f"image {img} has order not dividing {f}")

    def __call__(self, elem) -> tuple:
        out = tuple(0 for _ in self.target.factors)
        for r, img in zip(elem, self.images):
            for _ in range(r):
                out = self.target.op(out, tuple(img))
        return out

    def is_homomorphism(self) -> bool:
        els = self.source.elements
        return all(
            self(self.source.op(x, y)) == self.target.op(self(x), self(y)) for x in els for y in els
        )
