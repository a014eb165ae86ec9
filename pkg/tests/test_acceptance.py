"""End-to-end acceptance checks, one test per criterion.

Each test prints a single summary line (visible in ``pytest -v`` output) and
asserts its wall-clock budget.
"""

import json
import random
import time

import pytest

from hyperfield import io
from hyperfield.constructions import (
    build_FG,
    build_krasner,
    build_m7,
    build_massouros_original,
    build_nakassis,
    build_quotient,
    build_sign,
    quotient_scan,
    verify_large_sums,
    verify_nakassis_triples,
)
from hyperfield.core import hsum, verify_axioms
from hyperfield.finite_field import divisors, prime_powers
from hyperfield.linsolve import (
    ReductionTrace,
    check_solution,
    fetvins_sweep,
    find_pile_bruteforce,
    find_pile_sets,
    named,
    parse_system,
    solve,
)
from hyperfield.ordered import dyadic_class, dyadic_sum_check, overify_window


@pytest.fixture
def say(capsys):
    def emit(line):
        with capsys.disabled():
            print(f"\n  {line}")

    return emit


def criterion_fields():
    fields = [build_krasner(), build_sign()]
    fields += [build_FG((n,)).field for n in (3, 4, 5)]
    fields.append(build_massouros_original((3,)).field)
    fields += [build_nakassis((n,)) for n in (4, 5, 6)]
    fields += [build_quotient(q, d) for q in prime_powers(31) for d in divisors(q - 1)]
    return fields


# -- criterion runners shared with the determinism check ----------------------------


def run_worked_example():
    M = build_m7()
    S = parse_system(io.worked_example_text(), M.field)
    trace = ReductionTrace()
    A = solve(M, S, trace=trace)
    return {
        "assignment": named(S, A),
        "check": list(check_solution(M.field, S, A)),
        "trace": trace.lines(M.field, S.variables),
    }


SWEEPS = [("m7", (1, 2)), ("m7", (1, 3)), ("m7", (2, 3))] + [
    (name, kn) for name in ("krasner", "sign") for kn in ((1, 2), (1, 3), (2, 3))
]


def run_sweeps():
    M = build_m7()
    out = []
    for name, (k, n) in SWEEPS:
        if name == "m7":
            rep = fetvins_sweep(M.field, M.phi, k, n, 3)
        else:
            F = build_krasner() if name == "krasner" else build_sign()
            rep = fetvins_sweep(F, None, k, n, 3)
        out.append(rep.to_dict())
    return out


def run_scans():
    return [
        quotient_scan(build_quotient(7, 2), 16).to_dict(),
        quotient_scan(build_m7().field, 64).to_dict(),
    ]


def dump(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False).encode()


# -- criteria -----------------------------------------------------------------------


def test_c01_axiom_suite(say):
    t0 = time.perf_counter()
    fields = criterion_fields()
    failed = [F.name for F in fields if not verify_axioms(F).passed]
    dt = time.perf_counter() - t0
    say(f"[1] axioms: {len(fields)} hyperfields, {len(failed)} failures, {dt:.2f}s")
    assert not failed
    assert dt < 10


def test_c02_worked_example(say):
    t0 = time.perf_counter()
    res = run_worked_example()
    dt = time.perf_counter() - t0
    M = build_m7()
    S = parse_system(io.worked_example_text(), M.field)
    reference = {"r": "1", "s": "a^2", "u": "-1", "v": "a", "w": "-1", "x": "0", "y": "0", "z": "0"}
    ref_ok = bool(check_solution(M.field, S, reference))
    say(f"[2] worked example: solution {res['assignment']} check={res['check']} reference={ref_ok} {dt:.3f}s")
    assert res["check"] == [True, True]
    assert ref_ok
    assert any(line.startswith("zero x (pile {x, y, z}") for line in res["trace"])
    assert "substitute w = -a^2*v" in res["trace"]
    assert dt < 1


def test_c03_fetvins_sweeps(say):
    t0 = time.perf_counter()
    reps = run_sweeps()
    dt = time.perf_counter() - t0
    systems = sum(r["data"]["systems"] for r in reps)
    cex = sum(len(r["data"]["counterexamples"]) for r in reps)
    dis = sum(len(r["data"]["disagreements"]) for r in reps)
    say(f"[3] sweeps: {len(reps)} sweeps, {systems} systems, {cex} counterexamples, {dis} disagreements, {dt:.2f}s")
    assert all(r["passed"] and not r["data"]["truncated"] for r in reps)
    assert cex == 0 and dis == 0
    assert all(r["data"]["solver"] == "constructive+brute" for r in reps[:3])
    assert dt < 300


def test_c04_large_sums(say):
    Ms = [build_FG((n,)) for n in (3, 4, 5)] + [build_massouros_original((n,)) for n in (3, 4)]
    reps = [verify_large_sums(M) for M in Ms]
    triples = sum(r.data["triples_checked"] for r in reps)
    say(f"[4] large sums: {len(reps)} fields, {triples} triples, all pass={all(r.passed for r in reps)}")
    assert all(r.passed for r in reps)


def test_c05_permanent_carrier(say):
    fields = criterion_fields()
    checked = 0
    for F in fields:
        carrier = frozenset(range(F.size))
        for x in range(F.size):
            assert hsum(F, [carrier, {x}]) == carrier, (F.name, x)
            checked += 1
    say(f"[5] carrier + x = carrier: {len(fields)} fields, {checked} elements")


def test_c06_nakassis_triples(say):
    by_size = {F.size: F for F in (build_nakassis((n,)) for n in (4, 5, 6))}
    reps = {n: verify_nakassis_triples(F) for n, F in by_size.items()}
    say(
        "[6] triples: "
        + ", ".join(f"|F|={n}: {'n/a' if not r.data['applicable'] else ('PASS' if r.passed else 'FAIL')}" for n, r in reps.items())
    )
    assert reps[6].passed and reps[7].passed
    assert reps[6].data["applicable"] and reps[7].data["applicable"]
    assert not reps[5].data["applicable"]
    assert reps[5].notes[0].startswith("not applicable")


def test_c07_pile_detector(say):
    rng = random.Random(20261016)
    piles = 0
    for _ in range(1000):
        m, n = rng.randint(1, 12), rng.randint(1, 12)
        sets = [frozenset(rng.sample(range(n), rng.randint(1, min(n, 5)))) for _ in range(m)]
        fast, slow = find_pile_sets(sets), find_pile_bruteforce(sets)
        assert (fast is None) == (slow is None), sets
        if fast is not None:
            piles += 1
            assert len(fast.equations) >= len(fast.variables)
            assert fast.variables == frozenset().union(*(sets[e] for e in fast.equations))
    say(f"[7] pile detector: 1000 random systems, {piles} with piles, oracle agrees")


def test_c08_dyadic(say):
    t0 = time.perf_counter()
    c7 = dyadic_class(7)
    assert str(c7) == "P" and c7.valuation == 0
    assert str(dyadic_class(4)) == "4P" and str(dyadic_class(3)) == "P"
    bad, notes = [], set()
    for m in range(-4, 5):
        for n in range(-4, 5):
            rep = dyadic_sum_check(m, n, (-8, 8), 9)
            if not rep.passed:
                bad.append((m, n, rep.failures))
            notes.update(rep.notes)
    windows = [overify_window(mode, -4, 4) for mode in ("open", "closed")]
    dt = time.perf_counter() - t0
    say(f"[8] dyadic: class(7)={c7}, 81 pairs, {len(bad)} failures, zero-class note={bool(notes)}, ordered windows pass={all(w.passed for w in windows)}, {dt:.2f}s")
    assert not bad
    assert notes
    assert all(w.passed for w in windows)
    assert dt < 30


def test_c09_quotient_scan(say):
    t0 = time.perf_counter()
    hit, miss = run_scans()
    dt = time.perf_counter() - t0
    say(f"[9] quotient scan: GF(7)/2 hits={hit['data']['hits']}; m7 candidates={len(miss['data']['candidates'])} hits={miss['data']['hits']} (evidence only), {dt:.2f}s")
    assert [7, 2] in [list(h) for h in hit["data"]["hits"]]
    assert miss["data"]["hits"] == []
    assert dt < 120


def test_c10_determinism(say):
    first = [dump(run_worked_example()), dump(run_sweeps()), dump(run_scans())]
    second = [dump(run_worked_example()), dump(run_sweeps()), dump(run_scans())]
    same = [a == b for a, b in zip(first, second)]
    say(f"[10] determinism: worked example, sweeps, scans byte-identical = {same}")
    assert all(same)
