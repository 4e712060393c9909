"""Initial, target and interpolated Hamiltonians of the factoring AQC.

``H(s) = f(s) H_I + g(s) H_P`` for ``s = t / T`` in ``[0, 1]``, where

* ``H_I = (a_x^+ - theta_x^*)(a_x - theta_x) + (a_y^+ - theta_y^*)(a_y - theta_y)``
  has the product coherent state ``|theta_x, theta_y>`` as ground state;
* ``H_P`` is diagonal in the number basis with the factoring objective
  evaluated at the occupation numbers.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from . import fock
from .diophantine import ObjectiveKind, divisor_min, objective_formula
from .errors import DomainError, TruncationError
from .fock import FockSpace

SCHEDULE_ATOL = 1e-12


class CutoffWarning(UserWarning):
    """The truncated space cannot represent the classical solution."""


@dataclass(frozen=True)
class Schedule:
    """Interpolation weights ``f`` (on ``H_I``) and ``g`` (on ``H_P``) over ``[0, 1]``."""

    f: Callable[[float], float]
    g: Callable[[float], float]
    label: str = "custom"

    def __post_init__(self):
        ends = {"f(0)": (self.f(0.0), 1.0), "f(1)": (self.f(1.0), 0.0),
                "g(0)": (self.g(0.0), 0.0), "g(1)": (self.g(1.0), 1.0)}
        for name, (got, want) in ends.items():
            if abs(got - want) > SCHEDULE_ATOL:
                raise DomainError(f"schedule {self.label!r}: {name} = {got}, expected {want}")
        grid = np.linspace(0.0, 1.0, 1000)
        if min(self.g(s) for s in grid) < -SCHEDULE_ATOL:
            raise DomainError(f"schedule {self.label!r}: g must be nonnegative on [0, 1]")

    def g_integral(self) -> float:
        """``int_0^1 g(s) ds`` by adaptive quadrature."""
        value, _ = integrate.quad(self.g, 0.0, 1.0, epsabs=1e-12, epsrel=1e-10)
        return value


def _linear_f(s: float) -> float:
    return 1.0 - s


def _linear_g(s: float) -> float:
    return s


def linear_schedule() -> Schedule:
    return Schedule(_linear_f, _linear_g, "linear")


@dataclass(frozen=True)
class ProblemSpec:
    """Everything needed to set up one adiabatic run."""

    n: int
    kind: ObjectiveKind = ObjectiveKind.Q
    theta_x: complex = 0.0
    theta_y: complex = 0.0
    space: FockSpace = field(default_factory=FockSpace)
    schedule: Schedule = field(default_factory=linear_schedule)
    total_time: float = 100.0
    tail_tol: float = fock.TAIL_TOLERANCE

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "kind", ObjectiveKind.parse(self.kind))
        if not self.total_time > 0:
            raise DomainError(f"total_time must be positive, got {self.total_time}")
        for theta, n_max in ((self.theta_x, self.space.n_max_x), (self.theta_y, self.space.n_max_y)):
            tail = fock.coherent_tail_weight(theta, n_max)
            if tail > self.tail_tol:
                raise TruncationError(
                    f"n_max={n_max} discards weight {tail:.3e} of |theta={theta}>"
                )

    @classmethod
    def default(
        cls,
        n: int,
        kind: "ObjectiveKind | str" = ObjectiveKind.Q,
        *,
        n_max: int = fock.DEFAULT_N_MAX,
        theta: complex | None = None,
        total_time: float = 100.0,
        schedule: Schedule | None = None,
    ) -> "ProblemSpec":
        """Square truncation, equal thetas defaulting to ``n ** 0.25``.

        With that theta the initial state has ``<n_x n_y> = n``.
        """
        if theta is None:
            theta = default_theta(n)
        return cls(
            n=n,
            kind=ObjectiveKind.parse(kind),
            theta_x=theta,
            theta_y=theta,
            space=FockSpace.square(n_max),
            schedule=schedule or linear_schedule(),
            total_time=total_time,
        )

    def with_time(self, total_time: float) -> "ProblemSpec":
        return ProblemSpec(self.n, self.kind, self.theta_x, self.theta_y, self.space,
                           self.schedule, total_time, self.tail_tol)

    def initial_modes(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-mode coherent amplitudes ``(c_x, c_y)`` of the initial state."""
        cx = fock.coherent_state(self.theta_x, self.space.n_max_x, self.tail_tol).vector
        cy = fock.coherent_state(self.theta_y, self.space.n_max_y, self.tail_tol).vector
        return cx, cy

    def initial_state(self) -> np.ndarray:
        cx, cy = self.initial_modes()
        return fock.product_state(cx, cy, self.space)


def default_theta(n: int) -> float:
    return float(n) ** 0.25


def mode_initial_hamiltonian(theta: complex, n_max: int) -> np.ndarray:
    """Single-mode ``(a^+ - theta^*)(a - theta)``; positive semidefinite by construction."""
    shifted = fock.annihilation(n_max) - complex(theta) * fock.identity(n_max)
    return shifted.conj().T @ shifted


def build_H_I(theta_x: complex, theta_y: complex, space: FockSpace) -> np.ndarray:
    hx = mode_initial_hamiltonian(theta_x, space.n_max_x)
    hy = mode_initial_hamiltonian(theta_y, space.n_max_y)
    return (fock.tensor_product(hx, fock.identity(space.n_max_y), space)
            + fock.tensor_product(fock.identity(space.n_max_x), hy, space))


def check_cutoff(n: int, kind: ObjectiveKind, space: FockSpace) -> None:
    """Warn when the truncated space cannot hold the classical optimum."""
    need = math.isqrt(n - 1) + 1 if n > 1 else 1  # ceil(sqrt(n))
    if min(space.n_max_x, space.n_max_y) < need:
        warnings.warn(
            f"n_max {space.shape} below ceil(sqrt({n})) = {need}; "
            "the solution state lies outside the truncated space",
            CutoffWarning, stacklevel=3,
        )
        return
    best = divisor_min(n, kind)
    if best.x > space.n_max_x or best.y > space.n_max_y:
        warnings.warn(
            f"optimum ({best.x}, {best.y}) is not representable with n_max {space.shape}",
            CutoffWarning, stacklevel=3,
        )


def target_diagonal(n: int, kind: "ObjectiveKind | str", space: FockSpace) -> np.ndarray:
    """Diagonal of ``H_P``: the objective at every label, zeros included.

    Zero occupations are not masked. The formula already places them far
    above the optimum, e.g. ``n**4`` at ``n_x = 0`` for kind Q.
    """
    kind = ObjectiveKind.parse(kind)
    nx, my = space.labels()
    exact = objective_formula(int(n), kind, nx.astype(object), my.astype(object))
    return np.array([float(v) for v in exact])


def build_H_P(n: int, kind: "ObjectiveKind | str", space: FockSpace) -> np.ndarray:
    kind = ObjectiveKind.parse(kind)
    check_cutoff(n, kind, space)
    return np.diag(target_diagonal(n, kind, space)).astype(complex)


def interpolated_H(spec: ProblemSpec, s: float, *, H_I: np.ndarray | None = None,
                   H_P: np.ndarray | None = None) -> np.ndarray:
    """``f(s) H_I + g(s) H_P``. Prebuilt endpoint matrices may be passed in."""
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s must lie in [0, 1], got {s}")
    if H_I is None:
        H_I = build_H_I(spec.theta_x, spec.theta_y, spec.space)
    if H_P is None:
        H_P = build_H_P(spec.n, spec.kind, spec.space)
    return spec.schedule.f(s) * H_I + spec.schedule.g(s) * H_P
