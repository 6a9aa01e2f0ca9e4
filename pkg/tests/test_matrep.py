
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uqcag.matrep import (
    GradedMatrix,
    UnassignedSymbolError,
    classical_rep,
    evaluate,
    graded_kron,
    matrix_bracket,
    quantum_vector_rep,
    rank,
    span_dimension,
    tensor_square_rep,
)
from uqcag.presentations import AlgebraSpec, Gens, build_presentation
from uqcag.scalar import ONE, Q, QBAR, Scalar
from uqcag.suites import span_elements
from uqcag.superfree import Element, br, free_symbol


def _plain(M):
    """Independent dense oracle: list-of-lists of Scalars."""
    return [[M[i, j] for j in range(M.dim)] for i in range(M.dim)]


def _dense_mul(A, B):
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(n)), Scalar(0)) for j in range(n)] for i in range(n)]


def test_classical_even_bracket():
    E = lambda i, j: GradedMatrix.unit((0, 0), i, j)
    assert matrix_bracket(E(0, 1), E(1, 0)) == E(0, 0) - E(1, 1)


def test_classical_odd_bracket():
    E = lambda i, j: GradedMatrix.unit((0, 1), i, j)
    assert matrix_bracket(E(0, 1), E(1, 0)) == E(0, 0) + E(1, 1)


def test_cag_image_is_matrix_unit():
    s = AlgebraSpec(0, 1, False)
    rep = classical_rep(s)
    assert evaluate(Gens(s).ap(1), rep) == GradedMatrix.unit((0, 1), 1, 0)
    assert evaluate(Gens(s).am(1), rep) == GradedMatrix.unit((0, 1), 0, 1)


def test_evaluate_examples():
    s = AlgebraSpec(1, 0, False)
    rep = classical_rep(s)
    assert evaluate(Element.one(), rep) == GradedMatrix.identity((0, 0))
    g = Gens(s)
    assert evaluate(g.e(1) * g.f(1), rep) == GradedMatrix.unit((0, 0), 0, 0)


def test_unassigned_symbol():
    rep = classical_rep(AlgebraSpec(1, 0, False))
    with pytest.raises(UnassignedSymbolError):
        evaluate(Element.sym(free_symbol(0, 0)), rep)


def test_quantum_sl2_images():
    s = AlgebraSpec(1, 0, True)
    rep = quantum_vector_rep(s)
    g = Gens(s)
    assert evaluate(g.k(1), rep) == GradedMatrix.diagonal((0, 0), [Q, QBAR])
    lhs = evaluate(g.e(1) * g.f(1) - g.f(1) * g.e(1), rep)
    rhs = evaluate((g.k(1) - g.kbar(1)).scale(ONE / (Q - QBAR)), rep)
    assert lhs == rhs == GradedMatrix.diagonal((0, 0), [ONE, -ONE])


def test_quantum_am2_is_unit():
    s = AlgebraSpec(1, 1, True)
    rep = quantum_vector_rep(s)
    M = evaluate(Gens(s).am(2), rep)
    assert set(M.entries) == {(0, 2)}
    assert M[0, 2] in (ONE, -ONE)


@pytest.mark.parametrize("n,m", [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)])
def test_quantum_rep_validates_chevalley(n, m):
    s = AlgebraSpec(n, m, True)
    rep = quantum_vector_rep(s)
    assert rep.validated
    assert rep.validate(build_presentation("chevalley", s).relations) == []
    g = Gens(s)
    for i in s.indices:
        assert evaluate(g.k(i) * g.kbar(i), rep) == GradedMatrix.identity(rep.parities)


@pytest.mark.parametrize("n,m", [(0, 1), (1, 1), (2, 1)])
def test_tensor_square_validates(n, m):
    s = AlgebraSpec(n, m, True)
    rep = tensor_square_rep(s)
    assert rep.validate(build_presentation("chevalley", s).relations) == []
    assert rep.validate(build_presentation("cag", s).relations) == []


def test_span_examples():
    for (n, m), want in [((0, 1), 3), ((1, 1), 8)]:
        s = AlgebraSpec(n, m, False)
        assert span_dimension(span_elements(s), classical_rep(s)) == want
    rep = classical_rep(AlgebraSpec(1, 1, False))
    assert span_dimension([Element.one()], rep) == 1


def test_rank_exact():
    assert rank([[ONE, Q], [Q, Q * Q]]) == 1
    assert rank([[ONE, Q], [QBAR, ONE]]) == 1
    assert rank([[ONE, Q], [ONE, QBAR]]) == 2


def test_graded_kron_sign():
    # (1 (x) A)(B (x) 1) = (-1)^{|A||B|} B (x) A
    par = (0, 1)
    I = GradedMatrix.identity(par)
    A = GradedMatrix.unit(par, 0, 1)
    B = GradedMatrix.unit(par, 1, 0)
    assert graded_kron(I, A) @ graded_kron(B, I) == -graded_kron(B, A)


units = st.builds(lambda i, j, c: GradedMatrix.unit((0, 0, 1), i, j, Scalar(c)),
                  st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3).filter(bool))


@settings(max_examples=60, deadline=None)
@given(st.lists(units, min_size=1, max_size=3), st.lists(units, min_size=1, max_size=3))
def test_matmul_matches_dense_oracle(xs, ys):
    A = sum(xs[1:], xs[0])
    B = sum(ys[1:], ys[0])
    assert _plain(A @ B) == _dense_mul(_plain(A), _plain(B))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(1, 1), (0, 2), (2, 1)]), st.data())
def test_evaluate_is_homomorphism(nm, data):
    s = AlgebraSpec(*nm, False)
    rep = classical_rep(s)
    g = Gens(s)
    gens = [g.ap(i) for i in s.indices] + [g.am(i) for i in s.indices]
    x = data.draw(st.sampled_from(gens))
    y = data.draw(st.sampled_from(gens))
    assert evaluate(x * y, rep) == evaluate(x, rep) @ evaluate(y, rep)
    assert evaluate(br(x, y), rep) == matrix_bracket(evaluate(x, rep), evaluate(y, rep))
