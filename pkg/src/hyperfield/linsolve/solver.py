"""Constructive solver for homogeneous systems over Massouros hyperfields.

Pipeline: remove one- and two-variable equations, zero out piles, pass to
strengthened (``⊇ F``) equations, trim every equation to three terms, solve
the resulting pilefree three-variable system with all variables nonzero, and
lift the answer back through the recorded reduction trace.  The lifted
assignment is checked against the original system before it is returned.
"""

from __future__ import annotations

from collections import Counter
from typing import Mapping, Optional

from hyperfield.constructions import MassourosField
from hyperfield.linsolve.piles import find_pile_sets, remove_piles
from hyperfield.linsolve.reduce import (
    combine_for_induction,
    eliminate_small_eqs,
    reduce_to_three,
    strengthen,
)
from hyperfield.linsolve.system import (
    COVERS,
    CONTAINS0,
    InvariantError,
    LinearSystem,
    PreconditionError,
    check_solution,
    equation_holds,
)
from hyperfield.linsolve.trace import ReductionTrace


def _vars(eq) -> frozenset:
    return frozenset(v for _, v in eq)


def _two_equal_one_differs(a, b, c) -> bool:
    return (a == b != c) or (a == c != b) or (b == c != a)


class _Pilefree3:
    """Recursive all-nonzero solver for strengthened three-term systems.

    Each step picks a variable z of least degree (at most 2 by counting),
    solves a smaller pilefree system without z, then chooses z.  Choices are
    always the least element index that works; every choice is verified by
    evaluating the actual hypersums.
    """

    def __init__(self, M: MassourosField):
        self.F = M.field
        self.phi = M.phi

    # -- helpers ------------------------------------------------------------

    def covers(self, eq, A) -> bool:
        return equation_holds(self.F, eq, A, COVERS)

    def img(self, c, x) -> int:
        return self.phi[self.F.mul(c, x)]

    def predicate(self, eq, A) -> bool:
        """Large-sums shape: two term images agree and the third differs."""
        return _two_equal_one_differs(*(self.img(c, A[v]) for c, v in eq))

    def pick_z(self, z, eqs, A, s_candidates=()) -> int:
        F = self.F
        for zv in F.nonzero:
            A[z] = zv
            if all(self.predicate(eq, A) for eq in eqs) and all(self.covers(eq, A) for eq in eqs):
                return zv
        for zv in s_candidates:
            A[z] = zv
            if all(self.covers(eq, A) for eq in eqs):
                return zv
        del A[z]
        raise InvariantError(
            f"no value for variable {z} solves its equations; the field lacks large sums"
        )

    # -- recursion ------------------------------------------------------------

    def solve(self, eqs: list) -> dict:
        if not eqs:
            return {}
        deg = Counter(v for eq in eqs for _, v in eq)
        low = min(deg.values())
        if low > 2:
            raise InvariantError("every variable is in three equations; the system has a pile")
        cands = sorted(v for v, d in deg.items() if d == low)
        if low == 1:
            # the last such variable, so a lone equation a*x + b*y + c*z picks z
            return self._degree_one(eqs, cands[-1])
        z = min(cands, key=lambda v: (self._difficulty(eqs, v), v))
        i1, i2 = (i for i, eq in enumerate(eqs) if z in _vars(eq))
        e1, e2 = eqs[i1], eqs[i2]
        rest = [eq for i, eq in enumerate(eqs) if i not in (i1, i2)]
        if _vars(e1) == _vars(e2):
            return self._full_overlap(eqs, rest, e1, e2, z)
        return self._combine(rest, e1, e2, z)

    @staticmethod
    def _difficulty(eqs, z) -> int:
        """0: the two equations on z differ elsewhere; 1-3: they share both
        other variables, and then 1 if one of those is in no other equation,
        2 if no other equation holds both, 3 otherwise."""
        sets = [_vars(eq) for eq in eqs]
        i1, i2 = (i for i, s in enumerate(sets) if z in s)
        if sets[i1] != sets[i2]:
            return 0
        pair = sets[i1] - {z}
        others = [s for i, s in enumerate(sets) if i not in (i1, i2)]
        if any(not any(v in o for o in others) for v in pair):
            return 1
        return 3 if any(pair <= o for o in others) else 2

    def _degree_one(self, eqs, z) -> dict:
        F = self.F
        i = next(i for i, eq in enumerate(eqs) if z in _vars(eq))
        e = eqs[i]
        A = self.solve(eqs[:i] + eqs[i + 1 :])
        for c, v in e:
            if v != z and v not in A:
                A[v] = F.inv(c)
        self.pick_z(z, [e], A)
        return A

    def _combine(self, rest, e1, e2, z) -> dict:
        F = self.F
        E = list(combine_for_induction(F, e1, e2, z))
        if len(E) > 3:
            sets = [_vars(eq) for eq in rest]
            for j in range(len(E)):
                trial = E[:j] + E[j + 1 :]
                if find_pile_sets(sets + [_vars(trial)]) is None:
                    E = trial
                    break
            else:
                raise InvariantError("combined equation cannot be trimmed without a pile")
        A = self.solve(rest + [tuple(E)])
        for v in _vars(e1) | _vars(e2):
            if v != z:
                A.setdefault(v, F.one)  # trimmed away from E and used nowhere else

        c = next(cc for cc, v in e1 if v == z)
        f = next(cc for cc, v in e2 if v == z)
        scale = F.mul(c, F.inv(f))
        left = self._partial_sum(e1, z, A, 1)
        right = self._partial_sum(e2, z, A, scale)
        s_cands = [
            F.mul(F.inv(c), s) for s in sorted(left) if s != 0 and F.neg(s) in right
        ]
        self.pick_z(z, [e1, e2], A, s_cands)
        return A

    def _partial_sum(self, eq, z, A, scale) -> frozenset:
        F = self.F
        out = frozenset({0})
        for c, v in eq:
            if v != z:
                out = F.set_sum(out, {F.mul(F.mul(scale, c), A[v])})
        return out

    def _full_overlap(self, eqs, rest, e1, e2, z) -> dict:
        F = self.F
        (a, u), (b, w) = [t for t in e1 if t[1] != z]
        in_rest = set().union(*(_vars(eq) for eq in rest)) if rest else set()
        iso_u, iso_w = u not in in_rest, w not in in_rest

        if iso_u or iso_w:
            A = self.solve(rest)
            if iso_u and iso_w:
                A[u], A[w] = F.inv(a), F.inv(b)
            elif iso_u:
                A[u] = F.mul(F.mul(F.inv(a), b), A[w])
            else:
                A[w] = F.mul(F.mul(F.inv(b), a), A[u])
            self.pick_z(z, [e1, e2], A)
            return A

        if not any({u, w} <= _vars(eq) for eq in rest):
            ratio = self._block_ratio(e1, e2, u, w, z)
            if ratio is not None:
                r, zeta = ratio
                sub = [
                    tuple((F.mul(c, r), u) if v == w else (c, v) for c, v in eq) for eq in rest
                ]
                A = self.solve(sub)
                A[w] = F.mul(r, A[u])
                A[z] = F.mul(zeta, A[u])
                if self.covers(e1, A) and self.covers(e2, A):
                    return A
        return self._search(eqs)

    def _block_ratio(self, e1, e2, u, w, z) -> Optional[tuple]:
        F = self.F
        for r in F.nonzero:
            for zeta in F.nonzero:
                A = {u: F.one, w: r, z: zeta}
                if self.covers(e1, A) and self.covers(e2, A):
                    return r, zeta
        return None

    def _search(self, eqs) -> dict:
        """Backtracking over nonzero values; used only for doubly covered blocks."""
        F = self.F
        order = sorted(set().union(*(_vars(eq) for eq in eqs)))
        last = {}
        for eq in eqs:
            last[eq] = max(order.index(v) for v in _vars(eq))
        due = [[eq for eq in eqs if last[eq] == i] for i in range(len(order))]
        A = {}

        def go(i) -> bool:
            if i == len(order):
                return True
            for x in F.nonzero:
                A[order[i]] = x
                if all(self.covers(eq, A) for eq in due[i]) and go(i + 1):
                    return True
            del A[order[i]]
            return False

        if not go(0):
            raise InvariantError("no all-nonzero solution found for a doubly covered block")
        return A


def solve_pilefree3(M: MassourosField, S: LinearSystem) -> dict:
    """All-nonzero solution of a pilefree strengthened three-term system."""
    if S.semantics != COVERS:
        raise PreconditionError("solve_pilefree3 needs strengthened equations")
    if any(len(eq) != 3 for eq in S.equations):
        raise PreconditionError("solve_pilefree3 needs exactly three terms per equation")
    if find_pile_sets(S.var_sets()) is not None:
        raise PreconditionError("solve_pilefree3 needs a pilefree system")
    if S.k and S.n <= S.k:
        raise PreconditionError("solve_pilefree3 needs more variables than equations")
    F = M.field
    A = _Pilefree3(M).solve(list(S.equations))
    for v in S.active:
        A.setdefault(v, F.one)
    for eq in S.equations:
        if not equation_holds(F, eq, A, COVERS):
            raise InvariantError("pilefree solver produced a non-solution")
    return {v: A[v] for v in sorted(A)}


def _same_table(F, G) -> bool:
    return (
        F.names == G.names
        and F.one == G.one
        and F.add_masks == G.add_masks
        and (F.mul_table == G.mul_table).all()
    )


def solve(
    M: MassourosField,
    S: LinearSystem,
    trace: Optional[ReductionTrace] = None,
    prefer: Optional[Mapping] = None,
) -> dict:
    """Nontrivial solution of a system with fewer equations than variables.

    ``trace`` (if given) receives every reduction step; ``prefer`` is passed
    to :func:`reduce_to_three`.  The returned assignment is total on the
    system's variables and has been verified.
    """
    F = M.field
    if S.field is not F and not _same_table(S.field, F):
        raise PreconditionError("system and field differ")
    if S.semantics != CONTAINS0:
        raise PreconditionError("solve expects ∋ 0 semantics")
    if S.k >= S.n:
        raise PreconditionError(f"need fewer equations than variables (k={S.k}, n={S.n})")
    if not M.verified():
        raise PreconditionError("field does not pass the Massouros and large-sums checks")
    trace = trace if trace is not None else ReductionTrace()

    S1, t = eliminate_small_eqs(S)
    trace.extend(t)
    S2 = remove_piles(S1, trace)
    S3, t = reduce_to_three(strengthen(S2), prefer)
    trace.extend(t)
    A = solve_pilefree3(M, S3)
    full = trace.replay(F, A, variables=S.active)
    result = check_solution(F, S, full)
    if not result:
        raise InvariantError(f"lifted assignment fails verification: {result}")
    return {v: full[v] for v in sorted(S.active)}
