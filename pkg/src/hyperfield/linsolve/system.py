"""Sparse homogeneous linear systems over a finite hyperfield."""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Mapping, NamedTuple, Optional, Sequence

from hyperfield.core import FiniteHyperfield, HyperfieldError, InvalidElementError, members_of

CONTAINS0 = "contains0"
COVERS = "covers"

Term = tuple  # (coefficient, variable id)
Equation = tuple  # tuple of Term


class SystemParseError(HyperfieldError):
    pass


class PreconditionError(HyperfieldError):
    pass


class InvariantError(RuntimeError):
    """A proof obligation failed at runtime; indicates a bug or a bad field."""


@dataclass(frozen=True)
class LinearSystem:
    """Equations ``sum coef * var  ∋ 0`` (or ``⊇ F`` once strengthened).

    ``variables`` names every variable id ever used; ``active`` is the set of
    ids still free in this system (eliminated or zeroed ones drop out).
    ``labels`` gives each equation a stable name for traces, by default its
    1-based position in the original input.
    """

    field: FiniteHyperfield
    variables: tuple
    equations: tuple
    semantics: str = CONTAINS0
    labels: tuple = ()
    active: frozenset = None

    def __post_init__(self):
        eqs = tuple(tuple((int(c), int(v)) for c, v in eq) for eq in self.equations)
        object.__setattr__(self, "equations", eqs)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(1, len(eqs) + 1)))
        if len(self.labels) != len(eqs):
            raise HyperfieldError("one label per equation")
        if self.active is None:
            object.__setattr__(self, "active", frozenset(range(len(self.variables))))
        if self.semantics not in (CONTAINS0, COVERS):
            raise HyperfieldError(f"unknown semantics {self.semantics!r}")
        for eq in eqs:
            vs = [v for _, v in eq]
            if len(set(vs)) != len(vs):
                raise HyperfieldError("a variable occurs twice in one equation")
            for c, v in eq:
                if c == 0:
                    raise HyperfieldError("coefficients must be nonzero")
                self.field.check(c)
                if v not in self.active:
                    raise HyperfieldError(f"variable {v} is not active")

    @property
    def k(self) -> int:
        return len(self.equations)

    @property
    def n(self) -> int:
        return len(self.active)

    def with_(self, **changes) -> "LinearSystem":
        return replace(self, **changes)

    def var_sets(self) -> list:
        return [frozenset(v for _, v in eq) for eq in self.equations]

    def used_vars(self) -> frozenset:
        return frozenset(v for eq in self.equations for _, v in eq)

    def fmt_term(self, term) -> str:
        c, v = term
        return f"{self.field.fmt(c)}*{self.variables[v]}"

    def fmt_equation(self, eq) -> str:
        rhs = "∋ 0" if self.semantics == CONTAINS0 else "⊇ F"
        return " + ".join(self.fmt_term(t) for t in eq) + " " + rhs

    def lines(self) -> list:
        return [f"[{lab}] {self.fmt_equation(eq)}" for lab, eq in zip(self.labels, self.equations)]

    def __str__(self):
        return "\n".join(self.lines())


HEADER_KEYS = ("field", "phi")


def parse_equation(line: str, F: FiniteHyperfield, var_index: dict) -> tuple:
    terms = []
    seen = set()
    for tok in line.split("+"):
        tok = tok.strip()
        if not tok:
            raise SystemParseError(f"empty term in {line!r}")
        if "*" in tok:
            coef_s, var_s = (s.strip() for s in tok.rsplit("*", 1))
        else:
            coef_s, var_s = F.fmt(F.one), tok
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", var_s):
            raise SystemParseError(f"bad variable token {var_s!r}")
        try:
            coef = F.index(coef_s)
        except InvalidElementError:
            raise SystemParseError(f"unknown element {coef_s!r}") from None
        if coef == 0:
            raise SystemParseError(f"zero coefficient in term {tok!r}")
        if var_s in seen:
            raise SystemParseError(f"variable {var_s!r} occurs twice in {line!r}")
        seen.add(var_s)
        v = var_index.setdefault(var_s, len(var_index))
        terms.append((coef, v))
    return tuple(terms)


def parse_system(text: str, F: FiniteHyperfield, variables: Sequence[str] = ()) -> LinearSystem:
    """Parse one ``coeff*var + ...`` equation per line (``∋ 0`` semantics).

    Blank lines, ``#`` comments and ``field:``/``phi:`` header lines are
    skipped.  Variables are numbered in order of first appearance unless
    ``variables`` fixes the order (and may add variables used nowhere).
    """
    var_index = {name: i for i, name in enumerate(variables)}
    eqs = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key = line.split(":", 1)[0].strip().lower()
        if ":" in line and key in HEADER_KEYS:
            continue
        if "∋" in line:
            line = line.split("∋", 1)[0]
        eqs.append(parse_equation(line, F, var_index))
    names = tuple(sorted(var_index, key=var_index.get))
    return LinearSystem(F, names, tuple(eqs))


# -- evaluation -------------------------------------------------------------------


def eval_equation(F: FiniteHyperfield, equation, A) -> frozenset:
    """The hypersum of ``{coef * A[var]}`` over the terms (``{0}`` when empty)."""
    return members_of(_eval_mask(F, equation, A))


def _eval_mask(F: FiniteHyperfield, equation, A) -> int:
    m = 1
    for c, v in equation:
        m = F.sum_mask(m, F.mul(c, A[v]))
    return m


def equation_holds(F, equation, A, semantics=CONTAINS0) -> bool:
    m = _eval_mask(F, equation, A)
    return m == F.full_mask if semantics == COVERS else bool(m & 1)


class SolutionCheck(NamedTuple):
    solves: bool
    nontrivial: bool

    def __bool__(self):
        return self.solves and self.nontrivial


def check_solution(F: FiniteHyperfield, S: LinearSystem, A) -> SolutionCheck:
    A = as_assignment(S, A)
    missing = [S.variables[v] for v in S.used_vars() if v not in A]
    if missing:
        raise PreconditionError(f"assignment misses {', '.join(sorted(missing))}")
    solves = all(equation_holds(F, eq, A, S.semantics) for eq in S.equations)
    return SolutionCheck(solves, any(x != 0 for x in A.values()))


def as_assignment(S: LinearSystem, A) -> dict:
    """Accept ``{id: elem}``, ``{name: elem-or-name}`` or a sequence by id."""
    if isinstance(A, Mapping):
        out = {}
        for k, x in A.items():
            v = S.variables.index(k) if isinstance(k, str) else int(k)
            out[v] = S.field.index(x) if isinstance(x, str) else S.field.check(x)
        return out
    return {v: S.field.check(x) for v, x in enumerate(A)}


def named(S: LinearSystem, A: Mapping) -> dict:
    return {S.variables[v]: S.field.fmt(x) for v, x in sorted(A.items())}


def format_assignment(S: LinearSystem, A: Mapping) -> list:
    """``var = element`` lines sorted by variable name."""
    return [f"{k} = {x}" for k, x in sorted(named(S, A).items())]


# -- shared helpers for the reduction steps ----------------------------------------


def least_nonzero(s) -> Optional[int]:
    nz = [x for x in s if x != 0]
    return min(nz) if nz else None


@dataclass
class Workspace:
    """Mutable copy of a system used while reducing it."""

    equations: list
    labels: list
    active: set
    extra: dict = field(default_factory=dict)

    @classmethod
    def of(cls, S: LinearSystem) -> "Workspace":
        return cls([list(eq) for eq in S.equations], list(S.labels), set(S.active))

    def freeze(self, S: LinearSystem, semantics=None) -> LinearSystem:
        return LinearSystem(
            S.field,
            S.variables,
            tuple(tuple(eq) for eq in self.equations),
            semantics or S.semantics,
            tuple(self.labels),
            frozenset(self.active),
        )
