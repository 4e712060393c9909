import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aqcfactor import fock
from aqcfactor.errors import DomainError, TruncationError
from aqcfactor.fock import FockSpace

THETA6 = 6**0.25


def test_annihilation_small():
    a1 = fock.annihilation(1)
    assert a1.shape == (2, 2)
    np.testing.assert_array_equal(a1, np.array([[0, 1], [0, 0]]))
    a2 = fock.annihilation(2)
    expected = np.zeros((3, 3))
    expected[0, 1], expected[1, 2] = 1.0, math.sqrt(2)
    np.testing.assert_array_equal(a2, expected)


@pytest.mark.parametrize("n_max", [1, 2, 7, 22])
def test_creation_is_adjoint(n_max):
    np.testing.assert_array_equal(fock.creation(n_max), fock.annihilation(n_max).conj().T)


def test_annihilation_kills_vacuum():
    vac = np.zeros(5)
    vac[0] = 1
    assert not np.any(fock.annihilation(4) @ vac)


def test_annihilation_domain():
    with pytest.raises(DomainError):
        fock.annihilation(0)


def test_number_operator():
    np.testing.assert_array_equal(fock.number_operator(2), np.diag([0.0, 1.0, 2.0]))
    a = fock.annihilation(5)
    np.testing.assert_allclose(a.conj().T @ a, np.diag(np.arange(6.0)), rtol=0, atol=1e-14)
    assert np.trace(fock.number_operator(22)).real == 253


@pytest.mark.parametrize("n_max", [1, 3, 22, 40])
def test_number_is_exactly_diagonal_product(n_max):
    a = fock.annihilation(n_max)
    prod = a.conj().T @ a
    off = prod - np.diag(np.diag(prod))
    assert not np.any(off)
    np.testing.assert_allclose(np.diag(prod).real, np.arange(n_max + 1), rtol=0, atol=1e-12)


def test_coherent_vacuum():
    cs = fock.coherent_state(0, 10)
    expected = np.zeros(11)
    expected[0] = 1
    np.testing.assert_array_equal(cs.vector, expected)
    assert cs.tail_weight == 0.0


def test_coherent_default_theta_mean_occupation():
    cs = fock.coherent_state(THETA6, 22)
    mean = (cs.vector.conj() @ fock.number_operator(22) @ cs.vector).real
    assert abs(mean - math.sqrt(6)) < 1e-6


def test_coherent_vacuum_amplitude_theta_one():
    cs = fock.coherent_state(1.0, 22)
    assert abs(cs.vector[0] - math.exp(-0.5)) < 1e-9


def test_coherent_unit_norm_and_tail_reported():
    cs = fock.coherent_state(2.0, 13, tol=1e-3)
    assert abs(np.linalg.norm(cs.vector) - 1) < 1e-12
    direct = 1 - sum(math.exp(-4) * 4**k / math.factorial(k) for k in range(14))
    assert cs.tail_weight == pytest.approx(direct, rel=1e-6)


def test_coherent_truncation_error():
    with pytest.raises(TruncationError):
        fock.coherent_state(3.0, 5)


def test_min_n_max_for():
    n = fock.min_n_max_for(THETA6)
    assert fock.coherent_tail_weight(THETA6, n) <= 1e-6 < fock.coherent_tail_weight(THETA6, n - 1)


@settings(max_examples=40, deadline=None)
@given(r=st.floats(0.1, 2.5), phase=st.floats(0, 2 * math.pi))
def test_coherent_eigen_residual_shrinks_with_cutoff(r, phase):
    theta = r * complex(math.cos(phase), math.sin(phase))
    start = fock.min_n_max_for(theta)
    residuals = []
    for n_max in range(start, start + 12):
        v = fock.coherent_state(theta, n_max).vector
        resid = fock.annihilation(n_max) @ v - theta * v
        # only the top level is wrong
        assert np.allclose(resid[:-1], 0, atol=1e-12)
        residuals.append(np.linalg.norm(resid))
    assert all(b <= a for a, b in zip(residuals, residuals[1:]))


def test_space_dim_and_index_map():
    space = FockSpace(3, 5)
    assert space.dim == 24
    idx = [space.index(n, m) for n in range(4) for m in range(6)]
    assert idx == list(range(24))
    with pytest.raises(DomainError):
        space.index(4, 0)
    with pytest.raises(DomainError):
        FockSpace(-1, 2)


@settings(max_examples=100, deadline=None)
@given(nx=st.integers(0, 30), ny=st.integers(0, 30), data=st.data())
def test_index_round_trip(nx, ny, data):
    space = FockSpace(nx, ny)
    n = data.draw(st.integers(0, nx))
    m = data.draw(st.integers(0, ny))
    assert space.label(space.index(n, m)) == (n, m)


def test_tensor_product_examples():
    space = FockSpace(4, 4)
    ident = fock.tensor_product(fock.identity(4), fock.identity(4), space)
    np.testing.assert_array_equal(ident, np.eye(25))
    nx = fock.tensor_product(fock.number_operator(4), fock.identity(4), space)
    ny = fock.tensor_product(fock.identity(4), fock.number_operator(4), space)
    v = fock.basis_state(space, 2, 3)
    np.testing.assert_allclose(nx @ v, 2 * v)
    np.testing.assert_allclose(ny @ v, 3 * v)
    np.testing.assert_allclose(nx @ ny @ v, 6 * v)


def test_tensor_product_mismatch():
    with pytest.raises(DomainError):
        fock.tensor_product(fock.identity(3), fock.identity(4), FockSpace(4, 4))


def test_truncation_defect_default_cutoff():
    d = fock.truncation_commutator_defect(22)
    expected = np.zeros((23, 23))
    expected[22, 22] = -23
    np.testing.assert_array_equal(d, expected)


def test_truncation_defect_two_level():
    np.testing.assert_array_equal(fock.truncation_commutator_defect(1), np.diag([0.0, -2.0]))


@pytest.mark.parametrize("n_max", [1, 4, 22])
def test_truncation_defect_trace(n_max):
    a, ad = fock.annihilation(n_max), fock.creation(n_max)
    assert abs(np.trace(a @ ad - ad @ a)) < 1e-12
    assert np.trace(fock.truncation_commutator_defect(n_max)).real == pytest.approx(-(n_max + 1))


@pytest.mark.parametrize("n_max", [1, 5, 22])
def test_commutator_identity_except_corner(n_max):
    a, ad = fock.annihilation(n_max), fock.creation(n_max)
    comm = a @ ad - ad @ a
    corner = comm[n_max, n_max].real
    assert corner == pytest.approx(-n_max)
    comm[n_max, n_max] = 1
    np.testing.assert_allclose(comm, np.eye(n_max + 1), atol=1e-12)
