"""Exhaustive search for systems without nontrivial solutions."""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement, product
from typing import Optional

from hyperfield.constructions import MassourosField
from hyperfield.core import FiniteHyperfield, Report
from hyperfield.linsolve.brute import BRUTE_CAP, brute_solve
from hyperfield.linsolve.system import (
    InvariantError,
    LinearSystem,
    PreconditionError,
    check_solution,
)
from hyperfield.linsolve.solver import solve

DEFAULT_MAX_SYSTEMS = 10**6


def canonical_equations(F: FiniteHyperfield, n: int, max_terms: int) -> list:
    """Every equation on ``n`` variables with at most ``max_terms`` terms,
    scaled so the first coefficient is 1, in a fixed order."""
    out = []
    for size in range(1, min(max_terms, n) + 1):
        for vs in combinations(range(n), size):
            for rest in product(F.nonzero, repeat=size - 1):
                coefs = (F.one,) + rest
                out.append(tuple(zip(coefs, vs)))
    return out


def fetvins_sweep(
    F: FiniteHyperfield,
    phi=None,
    k: int = 1,
    n: int = 2,
    max_terms: int = 3,
    max_systems: int = DEFAULT_MAX_SYSTEMS,
    cap: int = BRUTE_CAP,
) -> Report:
    """Check every canonical system of ``k`` equations in ``n`` variables.

    Systems are multisets of canonical equations.  Each is solved by brute
    force; when ``phi`` makes F a verified Massouros hyperfield the
    constructive solver runs as well and both answers are verified.
    """
    if k >= n:
        raise PreconditionError(f"need k < n (got k={k}, n={n})")
    if F.size**n > cap:
        raise PreconditionError(f"{F.size}^{n} candidates per system exceeds cap {cap}")
    M: Optional[MassourosField] = None
    if phi is not None:
        cand = MassourosField(F, tuple(phi))
        if cand.verified():
            M = cand

    rep = Report(title=f"fetvins {F.name} k={k} n={n} max_terms={max_terms}".strip())
    rep.record("fetvins")
    rep.record("solver_agreement")
    variables = tuple(f"x{i + 1}" for i in range(n))
    eqs = canonical_equations(F, n, max_terms)
    counterexamples, disagreements = [], []
    count = 0
    truncated = False
    for system in combinations_with_replacement(eqs, k):
        if count >= max_systems:
            truncated = True
            break
        count += 1
        S = LinearSystem(F, variables, system)
        brute = brute_solve(S, cap)
        if brute is None:
            counterexamples.append(str(S))
        if M is None:
            continue
        try:
            A = solve(M, S)
            ok = bool(check_solution(F, S, A))
        except (InvariantError, PreconditionError) as exc:
            ok, A = False, str(exc)
        if not ok or brute is None:
            disagreements.append(f"{S} -> solver {A!r}, brute {brute!r}")

    counterexamples.sort()
    disagreements.sort()
    if counterexamples:
        rep.record("fetvins", counterexamples[0])
    if disagreements:
        rep.record("solver_agreement", disagreements[0])
    rep.data.update(
        systems=count,
        canonical_equations=len(eqs),
        solver="constructive+brute" if M is not None else "brute",
        counterexamples=counterexamples,
        disagreements=disagreements,
        truncated=truncated,
    )
    if M is None:
        rep.notes.append("brute force only (no verified Massouros phi)")
    if truncated:
        rep.notes.append(f"truncated after {max_systems} systems")
    return rep
