import json

import numpy as np
import pytest

from aqcfactor import ProblemSpec
from aqcfactor.errors import DomainError
from aqcfactor.fock import FockSpace
from aqcfactor.hamiltonian import target_diagonal
from aqcfactor.spectra import SpectralFlow, find_near_degeneracies, gap_at, min_gap, spectral_flow


@pytest.fixture(scope="module")
def spec6():
    return ProblemSpec.default(6)


@pytest.fixture(scope="module")
def flow6(spec6):
    return spectral_flow(spec6)


def test_endpoint_two_lowest(spec6):
    flow = spectral_flow(spec6, grid_points=11, k=2)
    assert flow.endpoint_labels == [(2, 3), (3, 2)]
    assert flow.levels[-1][0] == pytest.approx(2, abs=1e-9)
    assert flow.levels[-1][1] == pytest.approx(3, abs=1e-9)


def test_endpoint_matches_sorted_diagonal(flow6, spec6):
    diag = np.sort(target_diagonal(6, "q", spec6.space))
    np.testing.assert_allclose(flow6.levels[-1], diag[: flow6.k], rtol=0, atol=1e-9)
    assert flow6.endpoint_labels[:3] == [(2, 3), (3, 2), (1, 6)]


def test_start_is_coherent_ground(flow6):
    assert flow6.levels[0][0] <= 1e-6
    assert flow6.levels[0][0] >= -1e-12


def test_full_spectrum_small_space():
    spec = ProblemSpec(6, theta_x=0.8, theta_y=0.8, space=FockSpace.square(10))
    flow = spectral_flow(spec, grid_points=2, k=spec.space.dim)
    assert flow.s_grid == [0.0, 1.0]
    diag = np.sort(target_diagonal(6, "q", spec.space))
    np.testing.assert_allclose(flow.levels[-1], diag, rtol=1e-12, atol=1e-9)


def test_levels_ascending(flow6):
    for row in flow6.levels:
        assert all(a <= b for a, b in zip(row, row[1:]))
    assert flow6.s_grid == sorted(flow6.s_grid)


def test_gaps_at_endpoint(flow6):
    assert gap_at(flow6, 0, 2) == pytest.approx(23, abs=1e-9)
    assert gap_at(flow6, 0, 1) == pytest.approx(1, abs=1e-9)


def test_min_gap_same_level(flow6):
    assert min_gap(flow6, 3, 3)[0] == 0.0


def test_min_gap_index_errors(flow6):
    for i, j in ((2, 1), (-1, 0), (0, 8)):
        with pytest.raises(IndexError):
            min_gap(flow6, i, j)


def test_min_gap_location_within_grid(flow6):
    gap, s = min_gap(flow6, 0, 1)
    assert 0 <= s <= 1
    assert gap == min(np.array(flow6.level(1)) - np.array(flow6.level(0)))


def test_min_gap_grid_refinement(spec6, flow6):
    coarse = min_gap(flow6, 0, 1, spec6)
    fine = min_gap(spectral_flow(spec6, grid_points=201), 0, 1, spec6)
    print(f"min gap(0,1): {coarse[0]:.9f} at s={coarse[1]:.5f}; refined {fine[0]:.9f} at s={fine[1]:.5f}")
    assert abs(coarse[0] - fine[0]) < 1e-6


def test_argument_validation(spec6):
    with pytest.raises(DomainError):
        spectral_flow(spec6, grid_points=1)
    with pytest.raises(DomainError):
        spectral_flow(spec6, k=0)
    with pytest.raises(DomainError):
        spectral_flow(spec6, k=spec6.space.dim + 1)


def test_complex_theta_supported():
    spec = ProblemSpec(6, theta_x=1.2 + 0.4j, theta_y=1.2 - 0.4j, space=FockSpace.square(14))
    flow = spectral_flow(spec, grid_points=5, k=3)
    assert flow.endpoint_labels[:2] == [(2, 3), (3, 2)]
    assert flow.levels[0][0] < 1e-6


def test_near_degeneracy_detection():
    flow = SpectralFlow([0.0, 1.0], [[0.0, 1.0], [2.0, 2.0]], [None, None])
    assert find_near_degeneracies(flow) == [(1.0, 0)]


def test_round_trip(flow6):
    back = SpectralFlow.from_dict(json.loads(json.dumps(flow6.to_dict())))
    assert back == flow6
