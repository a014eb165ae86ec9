import random
from functools import reduce

import pytest

from hyperfield import io
from hyperfield.constructions import build_FG, build_krasner, build_m7
from hyperfield.linsolve import (
    COVERS,
    CapExceededError,
    DropEquation,
    InvariantError,
    LinearSystem,
    PreconditionError,
    ReductionTrace,
    RemoveTerm,
    Substitute,
    SystemParseError,
    ZeroVar,
    brute_solve,
    check_solution,
    combine_for_induction,
    eliminate_small_eqs,
    eval_equation,
    fetvins_sweep,
    find_pile,
    find_pile_bruteforce,
    find_pile_sets,
    is_pilefree,
    named,
    parse_system,
    reduce_to_three,
    remove_piles,
    solve,
    solve_pilefree3,
    strengthen,
)
from hyperfield.linsolve.solver import _Pilefree3
from hyperfield.linsolve.system import equation_holds


@pytest.fixture(scope="module")
def worked(F7):
    return parse_system(io.worked_example_text(), F7)


def E(F, *terms):
    """Equation from ``(coef-name, var-id)`` pairs."""
    return tuple((F.index(c), v) for c, v in terms)


def fold_eval(F, eq, A):
    return reduce(F.set_sum, ({F.mul(c, A[v])} for c, v in eq), frozenset({0}))


# -- parsing and evaluation -----------------------------------------------------


def test_parse_worked_example(worked):
    assert worked.k == 7
    assert worked.variables == ("r", "s", "u", "v", "w", "x", "y", "z")
    assert [len(eq) for eq in worked.equations] == [8, 5, 6, 3, 3, 3, 3]


def test_parse_rejects_zero_coefficient(F7):
    with pytest.raises(SystemParseError):
        parse_system("0*x + 1*y", F7)


@pytest.mark.parametrize("bad", ["1*x + ", "q*x + 1*y", "1*x + 1*x", "1*3x"])
def test_parse_rejects_malformed(F7, bad):
    with pytest.raises(SystemParseError):
        parse_system(bad, F7)


def test_parse_bare_variable_and_fixed_order(F7):
    S = parse_system("x + a*y ∋ 0", F7, variables=("y", "x", "t"))
    assert S.variables == ("y", "x", "t")
    assert S.equations == (((F7.one, 1), (F7.index("a"), 0)),)
    assert S.n == 3


def test_reference_assignment_checks(F7, worked):
    A = {"r": "1", "s": "a^2", "u": "-1", "v": "a", "w": "-1", "x": "0", "y": "0", "z": "0"}
    assert check_solution(F7, worked, A) == (True, True)


def test_flipping_one_value_breaks_the_reference_assignment(F7, worked):
    A = {"r": "1", "s": "a^2", "u": "-1", "v": "-a", "w": "-1", "x": "0", "y": "0", "z": "0"}
    ids = {worked.variables.index(k): F7.index(x) for k, x in A.items()}
    expected = all(0 in fold_eval(F7, eq, ids) for eq in worked.equations)
    assert bool(check_solution(F7, worked, A)) == expected
    for eq in worked.equations:
        assert eval_equation(F7, eq, ids) == fold_eval(F7, eq, ids)


def test_zero_assignment_is_trivial(F7, worked):
    res = check_solution(F7, worked, [0] * 8)
    assert res.solves and not res.nontrivial and not res


def test_check_solution_needs_every_used_variable(F7, worked):
    with pytest.raises(PreconditionError):
        check_solution(F7, worked, {"r": "1"})


# -- brute force -----------------------------------------------------------------


def test_brute_krasner_single_equation():
    K = build_krasner()
    S = parse_system("1*x + 1*y", K)
    assert named(S, brute_solve(S)) == {"x": "1", "y": "1"}


def test_brute_single_variable_has_no_solution(F7):
    assert brute_solve(parse_system("1*x", F7)) is None


def test_brute_cap(F7, worked):
    with pytest.raises(CapExceededError):
        brute_solve(worked, cap=1000)


def test_brute_worked_example_is_lexicographically_first(F7, worked):
    A = brute_solve(worked)
    assert named(worked, A) == {
        "r": "0", "s": "0", "u": "0", "v": "1", "w": "1", "x": "a", "y": "1", "z": "1"
    }
    assert check_solution(F7, worked, A)


# -- elimination and piles ---------------------------------------------------------


def test_eliminate_worked_example_after_pile(F7, worked):
    trace = ReductionTrace()
    S = remove_piles(worked, trace)
    assert S.k == 3 and S.active == frozenset(range(4))
    assert [len(eq) for eq in S.equations] == [4, 3, 4]
    subs = trace.of_type(Substitute)
    assert subs == [Substitute(4, 3, F7.index("-a^2"))]


def test_eliminate_cascade(F7):
    S = parse_system("1*x\n1*x + 1*y + a*z", F7)
    S2, trace = eliminate_small_eqs(S)
    assert S2.k == 0
    assert [s.var for s in trace.of_type(ZeroVar)] == [0]
    assert trace.of_type(Substitute)[0].var == 2
    A = trace.replay(F7, {}, S.active)
    assert check_solution(F7, S, A)


def test_eliminate_needs_contains_semantics(F7, worked):
    with pytest.raises(PreconditionError):
        eliminate_small_eqs(strengthen(worked))


def test_find_pile_worked_example(worked):
    pile = find_pile(worked)
    assert pile.equations == (4, 5, 6)
    assert pile.variables == frozenset({5, 6, 7})


def test_find_pile_triangle():
    sets = [frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2})]
    assert find_pile_sets(sets) is not None
    assert find_pile_sets(sets[:2]) is None
    assert not is_pilefree(sets) and is_pilefree(sets[:2])


def test_find_pile_agrees_with_oracle():
    rng = random.Random(7)
    for _ in range(300):
        m, n = rng.randint(1, 7), rng.randint(1, 8)
        sets = [frozenset(rng.sample(range(n), rng.randint(1, min(4, n)))) for _ in range(m)]
        fast, slow = find_pile_sets(sets), find_pile_bruteforce(sets)
        assert (fast is None) == (slow is None)
        if fast is not None:
            assert len(fast.equations) >= len(fast.variables)
            assert fast.variables == frozenset().union(*(sets[e] for e in fast.equations))


def test_remove_piles_leaves_pilefree_input(F7):
    S = parse_system("1*x + a*y + 1*z\n1*y + 1*z + 1*w", F7)
    trace = ReductionTrace()
    assert remove_piles(S, trace) == S
    assert len(trace) == 0


def test_remove_piles_cascade(F7):
    # the pile {x,y,z} zeroes x, which turns the last equation into a 2-variable one
    text = "1*x + a*y + 1*z\n1*x + 1*y + a*z\na*x + 1*y + 1*z\n1*x + 1*u + a*t"
    S = parse_system(text, F7)
    trace = ReductionTrace()
    S2 = remove_piles(S, trace)
    assert S2.k == 0
    assert {s.var for s in trace.of_type(ZeroVar)} == {0, 1, 2}
    assert len(trace.of_type(Substitute)) == 1
    assert DropEquation(1, "pile") in trace.steps
    assert check_solution(F7, S, trace.replay(F7, {}, S.active))


# -- reduction to three terms ----------------------------------------------------------


def _pilefree_worked(worked):
    return strengthen(remove_piles(worked))


def test_reduce_default_removes_leftmost_feasible(F7, worked):
    S3, trace = reduce_to_three(_pilefree_worked(worked))
    assert all(len(eq) == 3 for eq in S3.equations)
    assert S3.semantics == COVERS and is_pilefree(S3)
    assert [s.term[1] for s in trace.of_type(RemoveTerm)] == [0, 0]


def test_reduce_prefer_path(F7, worked):
    S3, trace = reduce_to_three(_pilefree_worked(worked), prefer={1: ["s"], 3: ["v"]})
    removed = [(s.label, F7.fmt(s.term[0]), worked.variables[s.term[1]]) for s in trace.of_type(RemoveTerm)]
    assert removed == [(1, "a^2", "s"), (3, "a", "v")]


def test_reduce_leaves_three_term_system(F7):
    S = strengthen(parse_system("1*x + a*y + 1*z\n1*y + 1*z + 1*w", F7))
    S3, trace = reduce_to_three(S)
    assert S3.equations == S.equations and len(trace) == 0


def test_reduce_skips_removal_that_creates_pile(F7):
    S = LinearSystem(
        F7,
        ("x1", "x2", "x3", "x4", "x5"),
        (
            ((1, 0), (1, 1), (1, 2), (1, 3)),
            ((1, 1), (2, 2), (1, 3)),
            ((2, 1), (1, 2), (1, 3)),
        ),
        semantics=COVERS,
    )
    S3, trace = reduce_to_three(S)
    (step,) = trace.of_type(RemoveTerm)
    assert step.term[1] == 1  # removing x1 would leave a pile on {x2, x3, x4}
    assert is_pilefree(S3)


def test_reduce_preconditions(F7, worked):
    with pytest.raises(PreconditionError):
        reduce_to_three(strengthen(worked))
    with pytest.raises(PreconditionError):
        reduce_to_three(strengthen(parse_system("1*x + 1*y", F7)))


def test_reduced_solution_lifts(F7, worked):
    M = build_m7()
    trace = ReductionTrace()
    S2 = remove_piles(worked, trace)
    S3, t = reduce_to_three(strengthen(S2))
    A = solve_pilefree3(M, S3)
    for eq in S2.equations:
        assert equation_holds(F7, eq, A, COVERS)
    assert check_solution(F7, worked, trace.replay(F7, A, worked.active))


# -- combining two equations ------------------------------------------------------------


def test_combine_shared_variable(F7):
    r, s, u, v = range(4)
    eq1 = E(F7, ("a", r), ("1", u), ("1", v))
    eq2 = E(F7, ("1", r), ("-1", s), ("a", v))
    assert combine_for_induction(F7, eq1, eq2, v) == E(F7, ("a", r), ("1", u), ("-a^2", s))


def test_combine_disjoint_and_full_overlap(F7):
    eq1 = E(F7, ("1", 0), ("a", 1), ("1", 2))
    eq2 = E(F7, ("1", 2), ("1", 3), ("a^2", 4))
    assert {v for _, v in combine_for_induction(F7, eq1, eq2, 2)} == {0, 1, 3, 4}
    eq3 = E(F7, ("-1", 0), ("1", 1), ("a", 2))
    assert {v for _, v in combine_for_induction(F7, eq1, eq3, 2)} == {0, 1}


def test_combine_needs_shared_variable(F7):
    with pytest.raises(PreconditionError):
        combine_for_induction(F7, E(F7, ("1", 0)), E(F7, ("1", 1)), 0)


# -- pilefree three-term solver -----------------------------------------------------------


def _covers_sys(F, names, *eqs):
    return LinearSystem(F, names, tuple(eqs), semantics=COVERS)


def test_pilefree3_basis_fixture(m7, F7):
    r, s, u = range(3)
    S = _covers_sys(
        F7, ("r", "s", "u"),
        E(F7, ("a", r), ("-a^2", s), ("1", u)),
        E(F7, ("a", r), ("-1", s), ("a", u)),
    )
    assert check_solution(F7, S, {"r": "1", "s": "a^2", "u": "-1"})
    A = solve_pilefree3(m7, S)
    assert all(x != 0 for x in A.values())
    assert check_solution(F7, S, A)


def test_pilefree3_back_substitution_fixture(m7, F7):
    r, s, u, v = range(4)
    S = _covers_sys(
        F7, ("r", "s", "u", "v"),
        E(F7, ("a", r), ("1", u), ("1", v)),
        E(F7, ("a^2", r), ("-a^2", s), ("1", v)),
    )
    A = solve_pilefree3(m7, S)
    assert all(x != 0 for x in A.values()) and check_solution(F7, S, A)
    # fixing v = a, the combined equation still has a solution
    B = {**A, v: F7.index("a")}
    assert any(
        check_solution(F7, S, {**B, r: x, s: y, u: w})
        for x in F7.nonzero for y in F7.nonzero for w in F7.nonzero
    )


def test_pilefree3_single_equation_basis(m7, F7):
    S = _covers_sys(F7, ("x", "y", "z"), E(F7, ("a", 0), ("-a", 1), ("1", 2)))
    A = solve_pilefree3(m7, S)
    assert A[0] == F7.inv(F7.index("a")) and A[1] == F7.inv(F7.index("-a"))
    assert check_solution(F7, S, A)


def test_pilefree3_preconditions(m7, F7):
    with pytest.raises(PreconditionError):
        solve_pilefree3(m7, LinearSystem(F7, ("x", "y", "z"), (E(F7, ("1", 0), ("1", 1), ("1", 2)),)))
    with pytest.raises(PreconditionError):
        solve_pilefree3(m7, _covers_sys(F7, ("x", "y"), E(F7, ("1", 0), ("1", 1))))
    tri = [E(F7, ("1", 0), ("1", 1), ("1", 2))] * 3
    with pytest.raises(PreconditionError):
        solve_pilefree3(m7, _covers_sys(F7, ("x", "y", "z", "w"), *tri))


class _Spy(_Pilefree3):
    def __init__(self, M):
        super().__init__(M)
        self.calls = []

    def _block_ratio(self, *a):
        self.calls.append("block_ratio")
        return super()._block_ratio(*a)

    def _search(self, eqs):
        self.calls.append("search")
        return super()._search(eqs)


def _all_cover(F, eqs, A):
    return all(equation_holds(F, eq, A, COVERS) for eq in eqs) and all(A[v] != 0 for eq in eqs for _, v in eq)


def test_full_overlap_isolated_partners(m7, F7):
    u, w, z = range(3)
    eqs = [E(F7, ("1", u), ("a", w), ("1", z)), E(F7, ("a", u), ("-1", w), ("a^2", z))]
    P = _Spy(m7)
    A = P.solve(eqs)
    assert P.calls == [] and _all_cover(F7, eqs, A)
    # u is the least variable, so it plays the shared role; w and z get inverses
    assert A[w] == F7.inv(F7.index("a")) and A[z] == F7.inv(F7.one)


def test_full_overlap_one_isolated_partner(m7, F7):
    u, w, z, p, q = range(5)
    e1 = E(F7, ("1", u), ("a", w), ("1", z))
    e2 = E(F7, ("-1", u), ("1", w), ("a", z))
    e3 = E(F7, ("1", w), ("1", p), ("a", q))
    P = _Spy(m7)
    A = P._full_overlap([e1, e2, e3], [e3], e1, e2, z)
    assert P.calls == [] and _all_cover(F7, [e1, e2, e3], A)
    assert A[u] == F7.mul(F7.mul(F7.inv(F7.one), F7.index("a")), A[w])


def test_full_overlap_block_ratio(m7, F7):
    u, w, z, p, q = range(5)
    e1 = E(F7, ("1", u), ("a", w), ("1", z))
    e2 = E(F7, ("-1", u), ("1", w), ("a", z))
    e3 = E(F7, ("1", u), ("1", p), ("a", q))
    e4 = E(F7, ("1", w), ("a^2", p), ("-1", q))
    eqs = [e1, e2, e3, e4]
    P = _Spy(m7)
    A = P._full_overlap(eqs, [e3, e4], e1, e2, z)
    assert P.calls[0] == "block_ratio" and _all_cover(F7, eqs, A)


def test_full_overlap_search_fallback(m7, F7):
    u, w, z, p = range(4)
    e1 = E(F7, ("1", u), ("a", w), ("1", z))
    e2 = E(F7, ("-1", u), ("1", w), ("a", z))
    e3 = E(F7, ("1", u), ("1", w), ("a", p))
    P = _Spy(m7)
    A = P._full_overlap([e1, e2, e3], [e3], e1, e2, z)
    assert P.calls == ["search"] and _all_cover(F7, [e1, e2, e3], A)


def test_difficulty_order(F7):
    u, w, z, p, q = range(5)
    e1 = E(F7, ("1", u), ("1", w), ("1", z))
    e3 = E(F7, ("1", u), ("1", p), ("1", q))
    e4 = E(F7, ("1", w), ("1", p), ("1", q))
    e5 = E(F7, ("1", u), ("1", w), ("1", p))
    assert _Pilefree3._difficulty([e1, e3], u) == 0
    assert _Pilefree3._difficulty([e1, e1], z) == 1
    assert _Pilefree3._difficulty([e1, e1, e3, e4], z) == 2
    assert _Pilefree3._difficulty([e1, e1, e5], z) == 3


def test_regression_dense_fg3_instance():
    M = build_FG((3,))
    F = M.field
    raw = [
        ((1, 5), (3, 4), (3, 6)),
        ((1, 3), (3, 2), (2, 0)),
        ((2, 0), (2, 2), (3, 3)),
        ((1, 3), (1, 0), (2, 4)),
        ((1, 1), (3, 3), (3, 5)),
        ((2, 6), (3, 4), (1, 5)),
    ]
    S = _covers_sys(F, tuple(f"x{i}" for i in range(7)), *raw)
    P = _Spy(M)
    A = P.solve(list(S.equations))
    assert "search" not in P.calls
    assert _all_cover(F, S.equations, A)
    assert check_solution(F, S, solve_pilefree3(M, S))


class _CaseTwoOnly(_Pilefree3):
    """Back-solves the shared variable from the sum candidates only."""

    used = 0

    def pick_z(self, z, eqs, A, s_candidates=()):
        if isinstance(s_candidates, list):
            for zv in s_candidates:
                A[z] = zv
                if all(self.covers(eq, A) for eq in eqs):
                    type(self).used += 1
                    return zv
            raise InvariantError("no sum candidate works")
        return super().pick_z(z, eqs, A, s_candidates)


def test_back_solve_from_sum_candidates(m7, F7):
    x, y, z, u, w, p = range(6)
    eqs = [
        E(F7, ("1", x), ("a", y), ("1", z)),
        E(F7, ("a", z), ("1", u), ("-1", w)),
        E(F7, ("1", x), ("a^2", u), ("1", p)),
        E(F7, ("-a", y), ("1", w), ("1", p)),
    ]
    P = _CaseTwoOnly(m7)
    A = P.solve(eqs)
    assert _CaseTwoOnly.used >= 1
    assert _all_cover(F7, eqs, A)


def test_pick_z_reports_impossible(m7, F7):
    P = _Pilefree3(m7)
    P.predicate = lambda eq, A: False
    A = {0: F7.one, 1: F7.one}
    with pytest.raises(InvariantError):
        P.pick_z(2, [E(F7, ("1", 0), ("1", 1), ("1", 2))], A)
    assert 2 not in A


# -- end-to-end solve ------------------------------------------------------------------


def test_solve_worked_example(m7, F7, worked):
    trace = ReductionTrace()
    A = solve(m7, worked, trace=trace)
    assert check_solution(F7, worked, A)
    assert named(worked, A) == {
        "r": "1", "s": "1", "u": "1", "v": "1", "w": "-a^2", "x": "0", "y": "0", "z": "0"
    }
    lines = trace.lines(F7, worked.variables)
    assert "zero x (pile {x, y, z} from equations [5, 6, 7])" in lines
    assert "substitute w = -a^2*v" in lines


def test_solve_with_preferred_removals(m7, F7, worked):
    A = solve(m7, worked, prefer={1: ["s"], 3: ["v"]})
    assert check_solution(F7, worked, A)


def test_solve_accepts_equal_table_from_loader(F7):
    sf = io.parse_sys(io.worked_example_text())
    A = solve(build_m7(), sf.system)
    assert check_solution(sf.system.field, sf.system, A)


def test_solve_rejects_unverified_field():
    K = build_krasner()
    from hyperfield.constructions import MassourosField

    S = parse_system("1*x + 1*y + 1*z", K)
    with pytest.raises(PreconditionError):
        solve(MassourosField(K, (-1, 0)), S)


def test_solve_rejects_square_systems(m7, F7):
    S = parse_system("1*x + 1*y\n1*x + a*y", F7)
    with pytest.raises(PreconditionError):
        solve(m7, S)


def test_solve_rejects_strengthened_input(m7, F7):
    with pytest.raises(PreconditionError):
        solve(m7, strengthen(parse_system("1*x + 1*y", F7)))


def _random_system(rng, F, k, n, max_terms=4):
    eqs = []
    for _ in range(k):
        vs = rng.sample(range(n), rng.randint(1, min(max_terms, n)))
        eqs.append(tuple((rng.choice(list(F.nonzero)), v) for v in vs))
    return LinearSystem(F, tuple(f"x{i}" for i in range(n)), tuple(eqs))


def test_solve_random_fg4_against_brute():
    M = build_FG((4,))
    F = M.field
    rng = random.Random(11)
    for _ in range(200):
        S = _random_system(rng, F, 2, 4)
        A = solve(M, S)
        assert check_solution(F, S, A)
        assert brute_solve(S) is not None


def test_solve_random_m7_larger(m7, F7):
    rng = random.Random(5)
    for _ in range(100):
        k = rng.randint(1, 6)
        S = _random_system(rng, F7, k, k + rng.randint(1, 3), max_terms=5)
        assert check_solution(F7, S, solve(m7, S))


def test_solve_is_deterministic(m7, worked):
    assert all(solve(m7, worked) == solve(m7, worked) for _ in range(3))


def test_strengthened_solutions_solve_the_original(F7):
    rng = random.Random(3)
    for _ in range(50):
        S = _random_system(rng, F7, 2, 4)
        A = brute_solve(strengthen(S))
        if A is not None:
            assert check_solution(F7, S, A)


# -- sweep ---------------------------------------------------------------------------


def test_sweep_m7_small(m7, F7):
    rep = fetvins_sweep(F7, m7.phi, 1, 2)
    assert rep.passed
    assert rep.data["systems"] == 8 and rep.data["solver"] == "constructive+brute"
    assert rep.data["counterexamples"] == [] and rep.data["disagreements"] == []


def test_sweep_brute_only_note():
    rep = fetvins_sweep(build_krasner(), None, 1, 3)
    assert rep.passed and rep.data["solver"] == "brute" and rep.notes


def test_sweep_rejects_square(F7):
    with pytest.raises(PreconditionError):
        fetvins_sweep(F7, None, 3, 3)


def test_sweep_truncates(m7, F7):
    rep = fetvins_sweep(F7, m7.phi, 2, 3, max_systems=10)
    assert rep.data["truncated"] and rep.data["systems"] == 10


def test_sweep_counts_match_canonical_enumeration(m7, F7):
    rep = fetvins_sweep(F7, m7.phi, 1, 3)
    assert rep.data["canonical_equations"] == 3 + 3 * 6 + 36
    assert rep.data["systems"] == rep.data["canonical_equations"]
