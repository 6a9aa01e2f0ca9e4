"""Acceptance criteria 1-10, one test per criterion.

Each test prints a "criterion N: PASS|FAIL ..." line and records it; the
collected lines are repeated in the pytest terminal summary.
"""

import pytest

from uqcag.fock import (
    brute_force_dimension,
    build_fock,
    ladder_check,
    supercommutation_check,
    valid_energies,
)
from uqcag.matrep import classical_rep, evaluate, quantum_vector_rep, span_dimension
from uqcag.presentations import (
    AlgebraSpec,
    Gens,
    build_presentation,
    cartan_matrix,
    gl_relations,
    triple_relations,
)
from uqcag.status import Status
from uqcag.suites import (
    classical_round_trips,
    eq51_targets,
    prop2_targets,
    prop3_targets,
    run_suite,
    span_elements,
)

RESULTS: dict[int, list[str]] = {}

DEFORMED_RANKS = [(0, 1), (1, 1), (2, 1), (1, 2), (2, 2)]

# literal matrix for n+1 = 3, m = 5
CARTAN_2_5 = [
    [2, -1, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0],
    [0, -1, 0, 1, 0, 0, 0],
    [0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, -1, 2],
]

# proved fractions recorded for theorem_fwd; a lower value is a regression
THEOREM_FWD_BASELINE = {(2, 1): 1.0, (1, 2): 1.0}


def report(n: int, ok: bool, detail: str):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    RESULTS.setdefault(n, []).append(line)
    return ok


def _ranks(lo, hi):
    return [(n, r - n) for r in range(lo, hi + 1) for n in range(r + 1)]


def test_criterion_1_cartan_matrix():
    A = cartan_matrix(AlgebraSpec(2, 5))
    assert report(1, A == CARTAN_2_5, "cartan_matrix(2,5) equals the 7x7 reference entry for entry")


def test_criterion_2_bracket_identities():
    rep = run_suite("identities", AlgebraSpec(1, 1))
    ids = sorted({r.label.split(":")[0] for r in rep.records})
    ok = ids == ["I29", "I30", "I31", "I32", "I33", "I36", "I42"] and rep.status is Status.PROVED_ZERO
    assert report(2, ok, f"{len(rep.records)} instances over {ids}, {rep.counts()['ProvedZero']} ProvedZero")


def test_criterion_3_classical_faithful_rep():
    checked, bad = 0, []
    for n, m in _ranks(1, 5):
        spec = AlgebraSpec(n, m, False)
        rep = classical_rep(spec)
        rels = (
            gl_relations(spec)
            + list(build_presentation("chevalley", spec).relations)
            + list(build_presentation("cag", spec).relations)
            + triple_relations(spec)
            + classical_round_trips(spec)
        )
        checked += len(rels)
        bad += [(n, m, lbl) for lbl in rep.validate(rels)]
    # the checks must be able to fail: a false relation gives a nonzero matrix
    spec = AlgebraSpec(1, 1, False)
    g = Gens(spec)
    control = not evaluate(g.ap(1) * g.am(1) - g.am(1) * g.ap(1), classical_rep(spec)).is_zero()
    ok = not bad and control
    assert report(3, ok, f"{checked} relations exact zero for all 1<=n+m<=5; negative control nonzero={control}; failures={bad[:3]}")


def test_criterion_4_span_condition():
    dims = {}
    for n, m in _ranks(1, 4):
        spec = AlgebraSpec(n, m, False)
        dims[(n, m)] = span_dimension(span_elements(spec), classical_rep(spec))
    bad = {nm: d for nm, d in dims.items() if d != (sum(nm) + 1) ** 2 - 1}
    assert report(4, not bad, f"{len(dims)} ranks with n+m<=4, mismatches={bad}")


def test_criterion_5_quantum_vector_rep():
    counts, bad = {}, []
    for n, m in DEFORMED_RANKS:
        spec = AlgebraSpec(n, m, True)
        rep = quantum_vector_rep(spec)
        if not rep.validated or rep.validate(build_presentation("chevalley", spec).relations):
            bad.append((n, m, "chevalley"))
        sets = [
            build_presentation("cag", spec).relations,
            prop2_targets(spec),
            prop3_targets(spec),
            eq51_targets(spec),
        ]
        counts[(n, m)] = sum(len(s) for s in sets)
        bad += [(n, m, lbl) for s in sets for lbl in rep.validate(s)]
    assert report(5, not bad, f"relations evaluated to zero per rank {counts}; failures={bad[:3]}")


def test_criterion_6_theorem_fwd():
    lines, ok = [], True
    for n, m in DEFORMED_RANKS[:4]:
        rep = run_suite("theorem_fwd", AlgebraSpec(n, m, True))
        frac = rep.proved_fraction()
        at_least = all(r.status in (Status.PROVED_ZERO, Status.REP_CONSISTENT) for r in rep.records)
        if (n, m) in THEOREM_FWD_BASELINE:
            ok &= at_least and frac >= THEOREM_FWD_BASELINE[(n, m)]
        else:
            ok &= frac == 1.0
        lines.append(f"({n},{m}) proved {frac:.3f} of {len(rep.records)}")
    assert report(6, ok, "; ".join(lines))


@pytest.mark.parametrize("suite,crit", [("classical_limit", 7), ("star_closure", 8), ("fault_sensitivity", 10)])
def test_criteria_7_8_10_suites(suite, crit):
    lines, ok = [], True
    for n, m in DEFORMED_RANKS:
        rep = run_suite(suite, AlgebraSpec(n, m, True))
        ok &= bool(rep.records) and rep.status is Status.PROVED_ZERO
        lines.append(f"({n},{m}) {rep.counts()['ProvedZero']}/{len(rep.records)}")
    assert report(crit, ok, f"{suite}: " + ", ".join(lines))


FOCK_CASES = [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 0, 2)]


def test_criterion_9_fock_checks():
    lines, ok = [], True
    for n, m, p in FOCK_CASES:
        spec = AlgebraSpec(n, m, False)
        mod = build_fock(spec, p)
        dim_ok = mod.dim == brute_force_dimension(spec, p, mod.cutoff)
        hs = valid_energies(spec)
        ladder_ok = bool(hs) and all(ladder_check(mod, h)["ok"] for h in hs)
        sc_ok = supercommutation_check(mod)["ok"]
        ok &= dim_ok and ladder_ok and sc_ok
        lines.append(f"({n},{m},{p}) dim={mod.dim} eps={len(hs)} ladder={ladder_ok} supercomm={sc_ok}")
    assert report(9, ok, "dimension, ladder on every valid eps, supercommutation: " + "; ".join(lines))


@pytest.mark.xfail(
    strict=True,
    reason="for (n,m)=(1,0) the energy constraint forces eps_1 = 0, so only one valid vector exists",
)
def test_criterion_9_three_energy_vectors():
    counts = {c: len(valid_energies(AlgebraSpec(c[0], c[1], False), limit=3)) for c in FOCK_CASES}
    ok = all(k >= 3 for k in counts.values())
    report(9, ok, f"at least 3 distinct valid eps per case: {counts}")
    assert ok
