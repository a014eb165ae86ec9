"""Simplifications that shrink a system while keeping solutions liftable."""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

from hyperfield.core import FiniteHyperfield
from hyperfield.linsolve.piles import find_pile_sets
from hyperfield.linsolve.system import (
    COVERS,
    CONTAINS0,
    InvariantError,
    LinearSystem,
    PreconditionError,
    least_nonzero,
)
from hyperfield.linsolve.trace import (
    DropEquation,
    MergeCoefficient,
    ReductionTrace,
    RemoveTerm,
    Substitute,
    ZeroVar,
)


def merge_terms(F: FiniteHyperfield, terms, label=None, trace=None) -> tuple:
    """Collapse repeated variables, keeping the first occurrence's position.

    ``c1*x + c2*x`` contains ``m*x`` for every ``m`` in ``c1 + c2``, so
    replacing the pair by the least nonzero ``m`` only shrinks the sum.
    """
    out = []
    pos = {}
    for c, v in terms:
        if v not in pos:
            pos[v] = len(out)
            out.append([c, v])
            continue
        i = pos[v]
        source = F.add(out[i][0], c)
        chosen = least_nonzero(source)
        if chosen is None:
            raise InvariantError(
                f"coefficients of variable {v} cancel to {{0}}; the field is not Massouros"
            )
        if trace is not None:
            trace.add(MergeCoefficient(label, v, chosen, source))
        out[i][0] = chosen
    return tuple((c, v) for c, v in out)


def substitute(
    S: LinearSystem, y: int, x: int, coef: int, trace: Optional[ReductionTrace] = None
) -> LinearSystem:
    """Replace ``y`` by ``coef * x`` in every equation and retire ``y``."""
    F = S.field
    eqs = []
    for lab, eq in zip(S.labels, S.equations):
        if all(v != y for _, v in eq):
            eqs.append(eq)
            continue
        terms = [(F.mul(c, coef), x) if v == y else (c, v) for c, v in eq]
        # the x-term keeps the position of whichever of x, y came first
        eqs.append(merge_terms(F, terms, lab, trace))
    return S.with_(equations=tuple(eqs), active=S.active - {y})


def drop_zeroed(S: LinearSystem, zeroed, trace: Optional[ReductionTrace] = None) -> LinearSystem:
    """Remove terms on zeroed variables (they contribute ``{0}``)."""
    zeroed = frozenset(zeroed)
    eqs = tuple(tuple(t for t in eq if t[1] not in zeroed) for eq in S.equations)
    return S.with_(equations=eqs, active=S.active - zeroed)


def eliminate_small_eqs(S: LinearSystem) -> tuple:
    """Remove all equations with at most two variables, to a fixpoint.

    ``a*x + b*y ∋ 0`` is removed with ``y := -(b^-1 a) x``; ``a*x ∋ 0`` with
    ``x := 0``; an empty equation is always true and simply dropped.
    """
    if S.semantics != CONTAINS0:
        raise PreconditionError("small-equation elimination needs ∋ 0 semantics")
    F = S.field
    trace = ReductionTrace()
    while True:
        sizes = [len(eq) for eq in S.equations]
        pick = next((i for i, s in enumerate(sizes) if s == 2), None)
        if pick is None:
            pick = next((i for i, s in enumerate(sizes) if s < 2), None)
        if pick is None:
            return S, trace
        eq, lab = S.equations[pick], S.labels[pick]
        rest = S.with_(
            equations=S.equations[:pick] + S.equations[pick + 1 :],
            labels=S.labels[:pick] + S.labels[pick + 1 :],
        )
        if len(eq) == 2:
            (a, x), (b, y) = eq
            coef = F.neg(F.mul(F.inv(b), a))
            trace.add(Substitute(y, x, coef))
            trace.add(DropEquation(lab, "two-variable equation solved by substitution"))
            S = substitute(rest, y, x, coef, trace)
        elif len(eq) == 1:
            (_, x), = eq
            trace.add(ZeroVar(x, f"one-variable equation [{lab}]"))
            trace.add(DropEquation(lab, "one-variable equation"))
            S = drop_zeroed(rest, {x}, trace)
        else:
            trace.add(DropEquation(lab, "empty equation"))
            S = rest


def strengthen(S: LinearSystem) -> LinearSystem:
    return S.with_(semantics=COVERS)


def _removal_candidates(eq, preferred) -> list:
    order = [i for v in preferred for i, (_, w) in enumerate(eq) if w == v]
    return order + [i for i in range(len(eq)) if i not in order]


def reduce_to_three(
    S: LinearSystem, prefer: Optional[Mapping] = None
) -> tuple:
    """Trim every equation to three terms without creating a pile.

    Equations are handled in order; for each excess term the candidates are
    tried left to right (after any variables listed in ``prefer[label]``) and
    the first removal leaving the system pilefree is kept.  Over a field with
    large sums, ``F + x = F``, so any solution of the trimmed strengthened
    system solves the original.
    """
    var_sets = S.var_sets()
    if find_pile_sets(var_sets) is not None:
        raise PreconditionError("reduce_to_three needs a pilefree system")
    if any(len(eq) < 3 for eq in S.equations):
        raise PreconditionError("reduce_to_three needs every equation to have >= 3 terms")
    if S.n <= S.k:
        raise PreconditionError("reduce_to_three needs more variables than equations")
    prefer = prefer or {}
    trace = ReductionTrace()
    eqs = [list(eq) for eq in S.equations]
    for i, lab in enumerate(S.labels):
        preferred = [S.variables.index(v) if isinstance(v, str) else v for v in prefer.get(lab, ())]
        while len(eqs[i]) > 3:
            for j in _removal_candidates(eqs[i], preferred):
                trial = eqs[i][:j] + eqs[i][j + 1 :]
                sets = [frozenset(v for _, v in e) for e in eqs]
                sets[i] = frozenset(v for _, v in trial)
                if find_pile_sets(sets) is None:
                    trace.add(RemoveTerm(lab, tuple(eqs[i][j])))
                    eqs[i] = trial
                    break
            else:
                raise InvariantError(f"no term of [{lab}] can be removed without a pile")
    out = S.with_(equations=tuple(tuple(e) for e in eqs), semantics=COVERS)
    return out, trace


def combine_for_induction(F: FiniteHyperfield, eq1, eq2, z: int, trace=None, label="E") -> tuple:
    """Eliminate the shared variable ``z`` from two strengthened equations.

    ``eq2`` is scaled by ``c f^-1`` (``c``, ``f`` the coefficients of ``z``)
    so both carry ``c z``; the result concatenates the remaining terms of
    ``eq1`` then ``eq2``, merging repeated variables.
    """
    c = _coef_of(eq1, z)
    f = _coef_of(eq2, z)
    scale = F.mul(c, F.inv(f))
    terms = [t for t in eq1 if t[1] != z]
    terms += [(F.mul(scale, d), v) for d, v in eq2 if v != z]
    return merge_terms(F, terms, label, trace)


def _coef_of(eq, z) -> int:
    for c, v in eq:
        if v == z:
            return c
    raise PreconditionError(f"variable {z} does not occur in the equation")
