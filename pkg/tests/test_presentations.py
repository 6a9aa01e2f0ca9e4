import pytest

from uqcag.matrep import classical_rep, evaluate
from uqcag.presentations import (
    AlgebraSpec,
    Gens,
    build_presentation,
    cag_from_chevalley,
    cartan_matrix,
    chevalley_from_cag,
    theta,
    theta_pair,
)
from uqcag.scalar import QBAR, Q
from uqcag.superfree import br


def test_theta_examples():
    s = AlgebraSpec(2, 5)
    assert theta(0, s) == 0
    assert theta(2, s) == 0
    assert theta(3, s) == 1
    assert theta_pair(2, 3, s) == 1


def test_small_cartan_matrices():
    assert cartan_matrix(AlgebraSpec(1, 0)) == [[2]]
    assert cartan_matrix(AlgebraSpec(0, 1)) == [[0]]


def _cartan_oracle(n, m):
    # [h_i, e_j] = alpha_ij e_j with h_i = E_{i-1,i-1} - (-1)^theta E_ii and e_j = E_{j-1,j};
    # for diagonal h this is alpha_ij = h_i[j-1] - h_i[j]
    th = [0] * (n + 1) + [1] * m
    out = []
    for i in range(1, n + m + 1):
        d = [0] * (n + m + 1)
        d[i - 1] = 1
        d[i] = -((-1) ** (th[i - 1] + th[i]))
        out.append([d[j - 1] - d[j] for j in range(1, n + m + 1)])
    return out


@pytest.mark.parametrize("n,m", [(n, m) for n in range(4) for m in range(4) if n + m >= 1])
def test_cartan_matrix_oracle(n, m):
    assert cartan_matrix(AlgebraSpec(n, m)) == _cartan_oracle(n, m)


def test_unsupported_spec():
    with pytest.raises(ValueError):
        AlgebraSpec(0, 0)
    with pytest.raises(ValueError):
        AlgebraSpec(-1, 2)


def test_cag_classical_odd_squares():
    pres = build_presentation("cag", AlgebraSpec(0, 1, False))
    labels = {r.label for r in pres.relations}
    assert {"18a:[ap_1,ap_1]", "18a:[am_1,am_1]"} <= labels
    g = Gens(AlgebraSpec(0, 1, False))
    assert pres.by_label("18a:[ap_1,ap_1]").element == br(g.ap(1), g.ap(1))


def test_chevalley_deformed_odd_square():
    pres = build_presentation("chevalley", AlgebraSpec(1, 1, True))
    g = Gens(AlgebraSpec(1, 1, True))
    assert pres.by_label("22a:e_2^2").element == g.e(2) * g.e(2)
    assert pres.by_label("22d:f_2^2").element == g.f(2) * g.f(2)


def test_additional_serre_relations_present():
    pres = build_presentation("chevalley", AlgebraSpec(2, 2, True))
    c = pres.counts()
    assert c["22c"] == 2 and c["22f"] == 2


def test_counts_deterministic():
    for kind in ("chevalley", "cag"):
        for deformed in (True, False):
            s = AlgebraSpec(2, 1, deformed)
            a, b = build_presentation(kind, s), build_presentation(kind, s)
            assert a.counts() == b.counts()
            assert a.to_json() == b.to_json()


def test_cag_from_chevalley_examples():
    s = AlgebraSpec(1, 1, True)
    g = Gens(s)
    assert cag_from_chevalley(1, -1, s) == g.e(1)
    assert cag_from_chevalley(2, -1, s) == g.e(1) * g.e(2) - (g.e(2) * g.e(1)).scale(QBAR)
    s02 = AlgebraSpec(0, 2, True)
    g02 = Gens(s02)
    assert cag_from_chevalley(2, -1, s02) == g02.e(1) * g02.e(2) - (g02.e(2) * g02.e(1)).scale(Q)


def test_cag_from_chevalley_parity():
    s = AlgebraSpec(2, 2, True)
    for i in s.indices:
        for sign in (1, -1):
            assert cag_from_chevalley(i, sign, s).parity() == theta(i, s)


def test_chevalley_from_cag_examples():
    s = AlgebraSpec(1, 1, True)
    g = Gens(s)
    assert chevalley_from_cag("e", 1, s) == g.am(1)
    assert chevalley_from_cag("f", 2, s) == -(g.el("Lbar", 1) * br(g.am(1), g.ap(2)))
    c = AlgebraSpec(1, 1, False)
    gc = Gens(c)
    h2 = br(gc.am(2), gc.ap(2)) - br(gc.am(1), gc.ap(1))
    assert chevalley_from_cag("h", 2, c) == h2


@pytest.mark.parametrize("n,m", [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)])
def test_classical_presentations_hold_in_rep(n, m):
    s = AlgebraSpec(n, m, False)
    rep = classical_rep(s)
    for kind in ("chevalley", "cag"):
        for rel in build_presentation(kind, s).relations:
            assert evaluate(rel.element, rep).is_zero(), rel.label
