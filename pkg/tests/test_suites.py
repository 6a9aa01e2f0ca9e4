import json

import pytest

from uqcag.presentations import AlgebraSpec, build_presentation
from uqcag.status import Status
from uqcag.suites import (
    SUITES,
    Budget,
    SuiteSpecError,
    classical_limit,
    eq51_targets,
    perturb,
    run_suite,
)

D = lambda n, m: AlgebraSpec(n, m, True)
C = lambda n, m: AlgebraSpec(n, m, False)


def _all(report, status=Status.PROVED_ZERO):
    return report.records and all(r.status is status for r in report.records)


def test_theorem_fwd_smallest():
    assert _all(run_suite("theorem_fwd", D(0, 1)))


def test_prop2_rep_consistent():
    rep = run_suite("prop2", D(1, 1))
    assert rep.records
    assert all(r.status in (Status.PROVED_ZERO, Status.REP_CONSISTENT) for r in rep.records)


def test_prop1_classical():
    rep = run_suite("prop1_classical", C(1, 1))
    assert _all(rep)
    labels = {r.label for r in rep.records}
    assert any(l.startswith("17b:") for l in labels) and any(l.startswith("17c:") for l in labels)


@pytest.mark.parametrize("sid", ["prop3", "theorem_bwd", "eq51", "classical_limit", "star_closure", "fault_sensitivity"])
def test_suites_pass_small(sid):
    assert _all(run_suite(sid, D(1, 1)))


def test_same_sign_targets_unique():
    labels = [r.label for r in eq51_targets(D(2, 1))]
    assert len(labels) == len(set(labels))


def test_deformed_only_suites_reject_classical_specs():
    for sid in ("prop2", "prop3", "classical_limit", "star_closure", "fault_sensitivity"):
        with pytest.raises(SuiteSpecError):
            run_suite(sid, C(1, 1))
    with pytest.raises(SuiteSpecError):
        run_suite("nope", D(1, 1))


def test_rep_validation_classical_is_proved():
    rep = run_suite("rep_validation", C(1, 1))
    assert _all(rep)
    assert {r.method for r in rep.records} == {"faithful-rep"}


def test_rep_validation_deformed_is_rep_consistent():
    assert _all(run_suite("rep_validation", D(1, 1)), Status.REP_CONSISTENT)


def test_injected_relation_fails():
    rep = run_suite("rep_validation", D(1, 1), inject=["e_1 f_1 - f_1 e_1"])
    assert rep.status is Status.FAILED
    assert len(rep.failed()) == 1


def test_cartan_only_embeds_matrix():
    rep = run_suite("cartan_only", C(2, 5))
    assert rep.info["cartan_matrix"][2] == [0, -1, 0, 1, 0, 0, 0]
    assert _all(rep)


def test_report_deterministic():
    a = run_suite("theorem_fwd", D(1, 1)).to_dict(timing=False)
    b = run_suite("theorem_fwd", D(1, 1), Budget()).to_dict(timing=False)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["summary"]["total"] == 36


def test_tiny_budget_is_not_a_proof():
    rep = run_suite("theorem_fwd", D(1, 1), Budget(max_steps=1))
    assert all(r.status is not Status.FAILED for r in rep.records)
    assert any(r.status is not Status.PROVED_ZERO for r in rep.records)


def test_perturb_changes_q_coefficients():
    rels = build_presentation("chevalley", D(1, 0)).relations
    changed = [r.label for r in rels if perturb(r.element) != r.element]
    assert "21c:[e_1,f_1]" in changed
    assert "inv:k_1kbar_1" not in changed


def test_classical_limit_of_cartan_relation():
    spec = D(0, 1)
    rel = build_presentation("cag", spec).by_label(next(r.label for r in build_presentation("cag", spec).relations if r.label.startswith("38c")))
    order, el = classical_limit(rel.element, spec)
    assert order == 0
    assert not el.is_zero()


def test_every_suite_registered_runs():
    for sid in SUITES:
        spec = C(1, 1) if sid in ("prop1_classical", "span_check", "cartan_only") else D(1, 1)
        assert run_suite(sid, spec).status is not Status.FAILED
