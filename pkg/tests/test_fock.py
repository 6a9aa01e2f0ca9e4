import csv
import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uqcag.fock import (
    FockState,
    HamiltonianConstraintError,
    HamiltonianSpec,
    StateNotInBasisError,
    act,
    brute_force_dimension,
    build_fock,
    hamiltonian,
    hamiltonian_forms_check,
    ladder_check,
    spectrum,
    supercommutation_check,
    valid_energies,
)
from uqcag.presentations import AlgebraSpec, theta

CASES = [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 0, 2), (0, 1, 1), (2, 1, 2), (1, 2, 2), (0, 3, 2)]


def _spec(n, m):
    return AlgebraSpec(n, m, False)


def test_small_basis():
    mod = build_fock(_spec(1, 1), 1, 1)
    assert [b.occupation for b in mod.basis] == [(0, 0), (1, 0), (0, 1)]
    assert build_fock(_spec(1, 0), 2, 2).dim == 3


def test_rejects_deformed_and_bad_args():
    with pytest.raises(ValueError):
        build_fock(AlgebraSpec(1, 1, True), 1)
    with pytest.raises(ValueError):
        build_fock(_spec(1, 1), 1, -1)
    with pytest.raises(ValueError):
        build_fock(_spec(1, 1), 0)


@pytest.mark.parametrize("n,m,p", CASES)
def test_dimension_matches_enumeration(n, m, p):
    mod = build_fock(_spec(n, m), p)
    assert mod.dim == brute_force_dimension(_spec(n, m), p, mod.cutoff)


def test_act_examples():
    mod = build_fock(_spec(1, 1), 1)
    assert act("am_1", (0, 0), mod) == {}
    assert act("am_1", (1, 0), mod) == {FockState((0, 0)): 1}
    assert act("ap_2", (0, 1), mod) == {}
    # [H_1, a_1^+] = -2 a_1^+ for even mode 1, so the eigenvalue drops by 2
    h_vac = act("H_1", (0, 0), mod)[FockState((0, 0))]
    h_one = act("H_1", (1, 0), mod)[FockState((1, 0))]
    assert h_one - h_vac == -2


def test_state_not_in_basis():
    mod = build_fock(_spec(1, 1), 1)
    with pytest.raises(StateNotInBasisError):
        act("ap_1", (0, 2), mod)


@pytest.mark.parametrize("n,m,p", CASES)
def test_odd_creation_squares_to_zero(n, m, p):
    mod = build_fock(_spec(n, m), p)
    for i in _spec(n, m).indices:
        if theta(i, _spec(n, m)):
            A = mod.matrix(f"ap_{i}")
            assert A * A == 0 * A


@pytest.mark.parametrize("n,m,p", CASES)
def test_supercommutation(n, m, p):
    assert supercommutation_check(build_fock(_spec(n, m), p))["ok"]


@pytest.mark.parametrize("n,m,p", CASES)
def test_ladder_for_valid_energies(n, m, p):
    mod = build_fock(_spec(n, m), p)
    hs = valid_energies(_spec(n, m))
    assert hs
    for h in hs:
        assert ladder_check(mod, h)["ok"], h


def test_hamiltonian_example():
    mod = build_fock(_spec(1, 1), 1)
    h = HamiltonianSpec((1, 1))
    spec_ = spectrum(mod, h)
    assert spec_[mod.index((1, 0))] - spec_[mod.index((0, 0))] == 1
    assert spec_ == [0, 1, 1]


def test_zero_energies():
    mod = build_fock(_spec(2, 1), 1)
    h = HamiltonianSpec((0, 0, 0))
    H = hamiltonian(mod, h)
    assert H == 0 * H
    assert ladder_check(mod, h)["ok"]


def test_constraint_rejected():
    with pytest.raises(HamiltonianConstraintError, match="constraint"):
        HamiltonianSpec((1, 2)).validate(_spec(1, 1))
    with pytest.raises(HamiltonianConstraintError):
        HamiltonianSpec((1,)).validate(_spec(1, 1))


def test_only_zero_energy_for_single_even_mode():
    assert [h.energies for h in valid_energies(_spec(1, 0), limit=10)] == [(Fraction(0),)]


@pytest.mark.parametrize("n,m,p", [(1, 1, 1), (2, 1, 1), (1, 2, 1), (2, 1, 2)])
def test_hamiltonian_forms_differ_by_even_part(n, m, p):
    mod = build_fock(_spec(n, m), p)
    for h in valid_energies(_spec(n, m)):
        rep = hamiltonian_forms_check(mod, h)
        assert rep["difference_is_2_sum_even"]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(1, 1), (2, 1), (1, 2)]), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_spectrum_counts_weighted_occupation(nm, raw):
    spec = _spec(*nm)
    eps = raw[: spec.rank - 1]
    # solve the constraint for the last energy
    last = sum(e if theta(i, spec) == 0 else -e for i, e in enumerate(eps, start=1))
    eps.append(last if theta(spec.rank, spec) else -last)
    h = HamiltonianSpec(tuple(eps))
    h.validate(spec)
    mod = build_fock(spec, 1)
    vac = spectrum(mod, h)[mod.index((0,) * spec.rank)]
    for b, e in zip(mod.basis, spectrum(mod, h)):
        assert e - vac == sum(Fraction(x) * r for x, r in zip(h.energies, b.occupation))


def test_dumps():
    mod = build_fock(_spec(1, 1), 1)
    h = HamiltonianSpec((1, 1))
    d = json.loads(mod.to_json(h))
    assert d["dimension"] == 3
    assert d["basis"] == [[0, 0], [1, 0], [0, 1]]
    assert d["spectrum"] == ["0", "1", "1"]
    rows = list(csv.reader(io.StringIO(mod.spectrum_csv(h))))
    assert rows[0] == ["state", "r_1", "r_2", "energy"]
    assert rows[2] == ["|1,0>", "1", "0", "1"]
