import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uqcag.identities import (
    IDENTITIES,
    PreconditionError,
    check_bracket_identity,
    param_grid,
    parity_assignments,
)
from uqcag.matrep import GradedMatrix, RepAssignment, evaluate
from uqcag.presentations import AlgebraSpec
from uqcag.scalar import ONE, Q, QBAR, Scalar
from uqcag.status import Status
from uqcag.superfree import Element, free_symbol

PAR = (0, 1, 0, 1)  # blocks {0,1} and {2,3}, each holding both parities


def test_examples():
    assert check_bracket_identity("I33", (0, 0, 0), {"x": Q}).status is Status.PROVED_ZERO
    P = {"x": ONE, "y": ONE, "z": Q, "r": QBAR, "s": QBAR, "t": QBAR}
    assert check_bracket_identity("I42", (0, 0, 0), P).status is Status.PROVED_ZERO
    assert check_bracket_identity("I29", (0, 0, 0), {"p": QBAR, "q": Q}).status is Status.PROVED_ZERO


@pytest.mark.parametrize("ident", sorted(IDENTITIES))
def test_all_assignments_proved(ident):
    n = 0
    for par in parity_assignments(ident):
        for P in param_grid(ident):
            assert check_bracket_identity(ident, par, P).status is Status.PROVED_ZERO, (ident, par, P)
            n += 1
    assert n > 0


def test_parameter_product_constraint_enforced():
    P = {"x": Q, "y": ONE, "z": Q, "r": QBAR, "s": QBAR, "t": QBAR}
    with pytest.raises(PreconditionError):
        check_bracket_identity("I42", (0, 0, 0), P)


def test_even_hypothesis_enforced():
    with pytest.raises(PreconditionError):
        check_bracket_identity("I31", (0, 1, 0), {"x": Q})
    with pytest.raises(PreconditionError):
        check_bracket_identity("I32", (1, 0, 0), {"x": Q})


def test_dropping_hypothesis_fails():
    # I29 is false in general when a and b do not commute: the rewrite sees the nonzero remainder
    build = IDENTITIES["I29"][0]
    a, b, c = (Element.sym(free_symbol(i, 0)) for i in range(3))
    assert not build(a, b, c, (0, 0, 0), {"p": QBAR, "q": Q}).is_zero()


def _homogeneous(draw, parity, rows, cols):
    entries = {}
    for i in rows:
        for j in cols:
            if (PAR[i] + PAR[j]) % 2 == parity:
                v = draw(st.integers(-2, 2))
                if v:
                    entries[(i, j)] = Scalar(v) * draw(st.sampled_from([ONE, Q, QBAR]))
    return GradedMatrix(PAR, entries)


@st.composite
def instances(draw):
    ident = draw(st.sampled_from(sorted(IDENTITIES)))
    par = draw(st.sampled_from(list(parity_assignments(ident))))
    P = draw(st.sampled_from(list(param_grid(ident))))
    hyp = IDENTITIES[ident][2]
    mats = [_homogeneous(draw, p, range(4), range(4)) for p in par]
    if hyp is not None:
        # matrices in disjoint blocks multiply to zero both ways, so their bracket vanishes
        u, v = hyp
        mats[u] = _homogeneous(draw, par[u], (0, 1), (0, 1))
        mats[v] = _homogeneous(draw, par[v], (2, 3), (2, 3))
    return ident, par, P, mats


@settings(max_examples=80, deadline=None)
@given(instances())
def test_identities_hold_on_matrices(inst):
    ident, par, P, mats = inst
    syms = [free_symbol(i, par[i]) for i in range(3)]
    rep = RepAssignment(AlgebraSpec(1, 1), "random", {s.key: M for s, M in zip(syms, mats)}, True, basis_parities=PAR)
    diff = IDENTITIES[ident][0](*(Element.sym(s) for s in syms), par, P)
    assert evaluate(diff, rep).is_zero()
