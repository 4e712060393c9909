"""Energy spread, orthogonality-time lower bound and energy cost of a run.

Only time-independent data enter here: the initial product coherent
state, the diagonal of ``H_P`` and the schedule. No propagation is done.

The bound ``T_perp ~ 1 / (Delta_I E_P * int_0^1 g)`` holds up to an O(1)
factor. We fix that factor to 1, so comparisons between reports are
meaningful as ratios only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .errors import DegenerateBoundError
from .hamiltonian import ProblemSpec, mode_initial_hamiltonian, target_diagonal

DEFAULT_COST_GRID = 1001
# spread below this fraction of <H_P> is treated as an exact eigenstate
ZERO_SPREAD_RTOL = 1e-12


@dataclass(frozen=True)
class BoundReport:
    delta_I_E_P: float
    g_integral: float
    t_perp: float
    e_cost: float
    theta_x: complex
    theta_y: complex

    def to_dict(self) -> dict:
        return {
            "delta_I_E_P": self.delta_I_E_P,
            "g_integral": self.g_integral,
            "t_perp": self.t_perp,
            "e_cost": self.e_cost,
            "theta_x": [self.theta_x.real, self.theta_x.imag],
            "theta_y": [self.theta_y.real, self.theta_y.imag],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BoundReport":
        return cls(
            delta_I_E_P=float(data["delta_I_E_P"]),
            g_integral=float(data["g_integral"]),
            t_perp=float(data["t_perp"]),
            e_cost=float(data["e_cost"]),
            theta_x=complex(*data["theta_x"]),
            theta_y=complex(*data["theta_y"]),
        )


def target_moments(spec: ProblemSpec) -> tuple[float, float]:
    """``(<g_I|H_P|g_I>, <g_I|H_P^2|g_I>)`` from the truncated initial state."""
    psi = spec.initial_state()
    weights = np.abs(psi) ** 2
    diag = target_diagonal(spec.n, spec.kind, spec.space)
    return float(weights @ diag), float(weights @ diag**2)


def initial_energy(spec: ProblemSpec) -> float:
    """``<g_I|H_I|g_I>``; zero up to truncation effects."""
    cx, cy = spec.initial_modes()
    hx = mode_initial_hamiltonian(spec.theta_x, spec.space.n_max_x)
    hy = mode_initial_hamiltonian(spec.theta_y, spec.space.n_max_y)
    return float((cx.conj() @ hx @ cx).real + (cy.conj() @ hy @ cy).real)


def energy_spread(spec: ProblemSpec) -> float:
    """Standard deviation of ``H_P`` in the initial state."""
    m1, m2 = target_moments(spec)
    return math.sqrt(max(m2 - m1 * m1, 0.0))


def t_perp(spec: ProblemSpec) -> float:
    spread = energy_spread(spec)
    m1, _ = target_moments(spec)
    if spread <= ZERO_SPREAD_RTOL * max(abs(m1), 1.0):
        raise DegenerateBoundError(
            "initial state is an eigenstate of H_P (zero energy spread); T_perp is undefined"
        )
    return 1.0 / (spread * spec.schedule.g_integral())


def energy_cost(spec: ProblemSpec, grid_points: int = DEFAULT_COST_GRID) -> float:
    """``max_s f(s) <H_I> + g(s) <H_P>`` in the initial state, on a uniform grid."""
    e_i = initial_energy(spec)
    e_p, _ = target_moments(spec)
    best = -math.inf
    for s in np.linspace(0.0, 1.0, grid_points):
        best = max(best, spec.schedule.f(s) * e_i + spec.schedule.g(s) * e_p)
    return float(best)


def bound_report(spec: ProblemSpec, grid_points: int = DEFAULT_COST_GRID) -> BoundReport:
    return BoundReport(
        delta_I_E_P=energy_spread(spec),
        g_integral=spec.schedule.g_integral(),
        t_perp=t_perp(spec),
        e_cost=energy_cost(spec, grid_points),
        theta_x=complex(spec.theta_x),
        theta_y=complex(spec.theta_y),
    )


def scaling_n_max(n: int, theta: complex) -> int:
    """Cutoff for scaling studies: at least ``4 ceil(sqrt(n))`` and tail-safe for ``theta``."""
    return max(4 * math.isqrt(n - 1) + 4, fock.min_n_max_for(theta))


def theta_sweep(n: int, thetas, kind="q", grid_points: int = DEFAULT_COST_GRID,
                n_max: int | None = None) -> list[BoundReport]:
    """Bound reports across equal-theta initial states.

    Each point gets its own cutoff (``scaling_n_max``) unless ``n_max`` is
    given, since larger ``|theta|`` needs more levels.
    """
    reports = []
    for theta in thetas:
        cut = n_max if n_max is not None else scaling_n_max(n, theta)
        spec = ProblemSpec.default(n, kind, n_max=cut, theta=theta, total_time=1.0)
        reports.append(bound_report(spec, grid_points))
    return reports
