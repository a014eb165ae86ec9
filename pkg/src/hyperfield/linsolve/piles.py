"""Pile detection: subsystems with at least as many equations as variables.

A pile exists exactly when Hall's condition fails for the incidence graph
with one equation duplicated, so detection reduces to bipartite matching.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from hyperfield.linsolve.system import LinearSystem
from hyperfield.linsolve.trace import DropEquation, ReductionTrace, ZeroVar


@dataclass(frozen=True)
class Pile:
    equations: tuple  # positions in the system
    variables: frozenset

    def __post_init__(self):
        assert len(self.equations) >= len(self.variables)


def _augment(adj, start, match_var, seen_var) -> bool:
    """Kuhn's augmenting path search from left vertex ``start``."""
    stack = [(start, iter(adj[start]))]
    path = []
    while stack:
        node, it = stack[-1]
        for v in it:
            if v in seen_var:
                continue
            seen_var.add(v)
            owner = match_var.get(v)
            if owner is None:
                # flip the path
                path.append((node, v))
                for left, var in path:
                    match_var[var] = left
                return True
            path.append((node, v))
            stack.append((owner, iter(adj[owner])))
            break
        else:
            stack.pop()
            if path:
                path.pop()
    return False


def _reachable(adj, start, match_var) -> tuple:
    """Equations and variables reachable from ``start`` by alternating paths."""
    eqs, vars_ = {start}, set()
    todo = [start]
    while todo:
        e = todo.pop()
        for v in adj[e]:
            if v in vars_:
                continue
            vars_.add(v)
            owner = match_var.get(v)
            if owner is not None and owner not in eqs:
                eqs.add(owner)
                todo.append(owner)
    return eqs, vars_


def find_pile_sets(var_sets: Sequence[frozenset]) -> Optional[Pile]:
    """Return a pile among equations given by their variable sets, or ``None``."""
    adj = [sorted(s) for s in var_sets]
    match_var = {}
    for e in range(len(adj)):
        if not _augment(adj, e, match_var, set()):
            eqs, _ = _reachable(adj, e, match_var)
            return _pile(var_sets, eqs)
    # every equation is matched; a pile is now a tight set, found by
    # duplicating one of its equations
    dup = len(adj)
    for e in range(len(adj)):
        trial = dict(match_var)
        adj.append(adj[e])
        ok = _augment(adj, dup, trial, set())
        if not ok:
            eqs, _ = _reachable(adj, dup, trial)
            adj.pop()
            return _pile(var_sets, eqs - {dup})
        adj.pop()
    return None


def _pile(var_sets, eqs) -> Pile:
    eqs = tuple(sorted(eqs))
    return Pile(eqs, frozenset().union(*(var_sets[e] for e in eqs)))


def find_pile(S: LinearSystem) -> Optional[Pile]:
    return find_pile_sets(S.var_sets())


def is_pilefree(S_or_sets) -> bool:
    sets = S_or_sets.var_sets() if isinstance(S_or_sets, LinearSystem) else S_or_sets
    return find_pile_sets(sets) is None


def find_pile_bruteforce(var_sets: Sequence[frozenset]) -> Optional[Pile]:
    """Reference oracle: the first pile in subset enumeration order."""
    m = len(var_sets)
    for r in range(1, m + 1):
        for eqs in combinations(range(m), r):
            vs = frozenset().union(*(var_sets[e] for e in eqs))
            if len(eqs) >= len(vs):
                return Pile(eqs, vs)
    return None


def remove_piles(S: LinearSystem, trace: Optional[ReductionTrace] = None) -> LinearSystem:
    """Zero out piles until none is left, re-eliminating small equations each round."""
    from hyperfield.linsolve.reduce import drop_zeroed, eliminate_small_eqs

    trace = trace if trace is not None else ReductionTrace()
    S, t = eliminate_small_eqs(S)
    trace.extend(t)
    while True:
        pile = find_pile(S)
        if pile is None:
            return S
        names = ", ".join(S.variables[v] for v in sorted(pile.variables))
        labels = ", ".join(str(S.labels[e]) for e in pile.equations)
        reason = f"pile {{{names}}} from equations [{labels}]"
        for v in sorted(pile.variables):
            trace.add(ZeroVar(v, reason))
        for e in pile.equations:
            trace.add(DropEquation(S.labels[e], "pile"))
        keep = [e for e in range(S.k) if e not in set(pile.equations)]
        S = S.with_(
            equations=tuple(S.equations[e] for e in keep),
            labels=tuple(S.labels[e] for e in keep),
        )
        S = drop_zeroed(S, pile.variables, trace)
        S, t = eliminate_small_eqs(S)
        trace.extend(t)
