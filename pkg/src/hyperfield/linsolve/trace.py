"""Reduction steps recorded while simplifying a system, and their replay."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

from hyperfield.core import FiniteHyperfield


@dataclass(frozen=True)
class ZeroVar:
    var: int
    reason: str = ""


@dataclass(frozen=True)
class Substitute:
    """``var := coef * source`` everywhere in the system."""

    var: int
    source: int
    coef: int


@dataclass(frozen=True)
class DropEquation:
    label: object
    reason: str = ""


@dataclass(frozen=True)
class MergeCoefficient:
    """Terms on ``var`` in equation ``label`` collapsed to ``chosen`` from ``source``."""

    label: object
    var: int
    chosen: int
    source: frozenset


@dataclass(frozen=True)
class RemoveTerm:
    label: object
    term: tuple


Step = Union[ZeroVar, Substitute, DropEquation, MergeCoefficient, RemoveTerm]


@dataclass
class ReductionTrace:
    steps: list = field(default_factory=list)

    def add(self, step: Step):
        self.steps.append(step)

    def extend(self, other: "ReductionTrace"):
        self.steps.extend(other.steps)

    def __iter__(self):
        return iter(self.steps)

    def __len__(self):
        return len(self.steps)

    def of_type(self, kind) -> list:
        return [s for s in self.steps if isinstance(s, kind)]

    def replay(self, F: FiniteHyperfield, A: Mapping, variables=None) -> dict:
        """Lift an assignment of the reduced system to the original one.

        Steps are undone last-to-first: substituted variables are computed
        from their sources and zeroed variables become 0.  Any remaining
        variable among ``variables`` that still has no value gets 1.
        """
        out = dict(A)
        for step in reversed(self.steps):
            if isinstance(step, ZeroVar):
                out[step.var] = 0
            elif isinstance(step, Substitute):
                out[step.var] = F.mul(step.coef, out.setdefault(step.source, F.one))
        for v in variables or ():
            out.setdefault(v, F.one)
        return out

    def lines(self, F: FiniteHyperfield, variables) -> list:
        return [format_step(s, F, variables) for s in self.steps]


def format_step(step: Step, F: FiniteHyperfield, variables) -> str:
    name = variables.__getitem__
    if isinstance(step, ZeroVar):
        return f"zero {name(step.var)}" + (f" ({step.reason})" if step.reason else "")
    if isinstance(step, Substitute):
        return f"substitute {name(step.var)} = {F.fmt(step.coef)}*{name(step.source)}"
    if isinstance(step, DropEquation):
        return f"drop equation [{step.label}]" + (f" ({step.reason})" if step.reason else "")
    if isinstance(step, MergeCoefficient):
        return (
            f"merge in [{step.label}]: coefficient of {name(step.var)} "
            f"{F.fmt_set(step.source)} -> {F.fmt(step.chosen)}"
        )
    if isinstance(step, RemoveTerm):
        c, v = step.term
        return f"remove term {F.fmt(c)}*{name(v)} from [{step.label}]"
    raise TypeError(step)  # pragma: no cover
