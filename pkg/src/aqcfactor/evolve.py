"""Time-dependent Schroedinger evolution of the interpolated Hamiltonian.

Units have hbar = 1. The propagator for one step of length ``dt`` centred
at ``s_k`` is the symmetric (Strang) splitting

    exp(-i dt/2 g(s_k) H_P) exp(-i dt f(s_k) H_I) exp(-i dt/2 g(s_k) H_P)

Both factors are computed exactly, not approximated. ``H_P`` is diagonal.
``H_I`` is a sum of commuting single-mode terms, so its exponential is a
Kronecker product of two small matrices, applied as ``E_x Psi E_y^T`` to
the amplitudes reshaped to ``(n_max_x + 1, n_max_y + 1)``. Every step is
unitary and the scheme is second order in ``dt``. Adjacent half-steps of
``H_P`` are merged.

The target diagonal reaches ~1e7 at the top of the truncated space, so
the step must resolve those phases. Hence the default density below.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import AqcError, ConvergenceError, DomainError, NormError
from .hamiltonian import ProblemSpec, check_cutoff, mode_initial_hamiltonian, target_diagonal

log = logging.getLogger(__name__)

DEFAULT_STEPS_PER_UNIT_TIME = 8000
MIN_STEPS = 2000
NORM_TOL = 1e-8
HALVING_TOL = 1e-6


@dataclass
class EvolutionResult:
    final_state: np.ndarray
    probabilities: dict[tuple[int, int], float]
    norm_drift: float
    steps: int
    total_time: float
    halving_delta: float | None = None

    def probability(self, n_x: int, m_y: int) -> float:
        return self.probabilities.get((n_x, m_y), 0.0)

    def top(self, k: int = 2) -> list[tuple[tuple[int, int], float]]:
        """The ``k`` most probable labels, largest first. Ties go to the smaller label."""
        ranked = sorted(self.probabilities.items(), key=lambda kv: (-kv[1], kv[0]))
        return ranked[:k]

    def to_dict(self) -> dict:
        return {
            "total_time": self.total_time,
            "steps": self.steps,
            "norm_drift": self.norm_drift,
            "halving_delta": self.halving_delta,
            "probabilities": [[n, m, p] for (n, m), p in sorted(self.probabilities.items())],
            "final_state": [[z.real, z.imag] for z in self.final_state.tolist()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvolutionResult":
        return cls(
            final_state=np.array([complex(re, im) for re, im in data["final_state"]]),
            probabilities={(int(n), int(m)): float(p) for n, m, p in data["probabilities"]},
            norm_drift=float(data["norm_drift"]),
            steps=int(data["steps"]),
            total_time=float(data["total_time"]),
            halving_delta=data.get("halving_delta"),
        )


def default_steps(total_time: float, steps_per_unit_time: float = DEFAULT_STEPS_PER_UNIT_TIME) -> int:
    return max(MIN_STEPS, int(np.ceil(steps_per_unit_time * total_time)))


def _schedule_values(fn, s: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(fn(s), dtype=float)
        if out.shape == s.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([fn(float(v)) for v in s])


class _ModePropagator:
    """``exp(-i tau h)`` for one mode from a one-off eigendecomposition of ``h``."""

    def __init__(self, h: np.ndarray):
        self.w, self.u = np.linalg.eigh(h)
        self.u_h = self.u.conj().T

    def __call__(self, tau: float) -> np.ndarray:
        return (self.u * np.exp(-1j * tau * self.w)) @ self.u_h


def propagate(spec: ProblemSpec, steps: int) -> np.ndarray:
    """Final state ``psi(T)`` after ``steps`` split steps from ``|g_I>``."""
    if isinstance(steps, bool) or int(steps) != steps or steps < 1:
        raise DomainError(f"steps must be a positive integer, got {steps!r}")
    steps = int(steps)
    space = spec.space
    T = float(spec.total_time)
    dt = T / steps

    check_cutoff(spec.n, spec.kind, space)
    diag = target_diagonal(spec.n, spec.kind, space).reshape(space.shape)
    prop_x = _ModePropagator(mode_initial_hamiltonian(spec.theta_x, space.n_max_x))
    same_modes = spec.theta_x == spec.theta_y and space.n_max_x == space.n_max_y
    prop_y = prop_x if same_modes else _ModePropagator(
        mode_initial_hamiltonian(spec.theta_y, space.n_max_y))

    mids = (np.arange(steps) + 0.5) / steps
    f_mid = _schedule_values(spec.schedule.f, mids) * dt
    g_mid = _schedule_values(spec.schedule.g, mids) * (0.5 * dt)
    # phase weight on H_P before step k; the last entry closes the final half-step
    g_merged = np.empty(steps + 1)
    g_merged[0] = g_mid[0]
    g_merged[1:-1] = g_mid[:-1] + g_mid[1:]
    g_merged[-1] = g_mid[-1]

    cx, cy = spec.initial_modes()
    psi = np.outer(cx, cy)
    neg_i_diag = -1j * diag
    for k in range(steps):
        psi *= np.exp(g_merged[k] * neg_i_diag)
        ex = prop_x(f_mid[k])
        ey = ex if same_modes else prop_y(f_mid[k])
        psi = ex @ psi @ ey.T
    psi *= np.exp(g_merged[-1] * neg_i_diag)
    return psi.ravel()


def _result_from_state(spec: ProblemSpec, psi: np.ndarray, steps: int) -> EvolutionResult:
    norm_drift = abs(float(np.linalg.norm(psi)) - 1.0)
    if norm_drift >= NORM_TOL:
        raise NormError(f"norm drift {norm_drift:.3e} exceeds {NORM_TOL:g} (steps={steps})")
    probs = np.abs(psi) ** 2
    labels = zip(*spec.space.labels())
    return EvolutionResult(
        final_state=psi,
        probabilities={(int(n), int(m)): float(p) for (n, m), p in zip(labels, probs)},
        norm_drift=norm_drift,
        steps=steps,
        total_time=float(spec.total_time),
    )


def evolve(spec: ProblemSpec, steps: int | None = None, *, check_convergence: bool = False,
           tol: float = HALVING_TOL) -> EvolutionResult:
    """Integrate ``i d/dt psi = H(t/T) psi`` over ``[0, T]`` from ``|g_I>``.

    Parameters
    ----------
    spec : ProblemSpec
        Problem, truncation, schedule and total time ``T``.
    steps : int, optional
        Number of split steps. Defaults to ``DEFAULT_STEPS_PER_UNIT_TIME * T``,
        but never fewer than ``MIN_STEPS``.
    check_convergence : bool
        Also run with ``2 * steps``. Fails if any basis probability moves
        by ``tol`` or more. The finer run is returned, with the largest
        change in ``halving_delta``.

    Raises
    ------
    NormError
        If ``| ||psi(T)|| - 1 |`` reaches ``1e-8``.
    ConvergenceError
        If the step-halving check fails.
    """
    if steps is None:
        steps = default_steps(spec.total_time)
    coarse = _result_from_state(spec, propagate(spec, steps), steps)
    if not check_convergence:
        return coarse
    fine = _result_from_state(spec, propagate(spec, 2 * steps), 2 * steps)
    delta = float(np.max(np.abs(np.abs(fine.final_state) ** 2 - np.abs(coarse.final_state) ** 2)))
    fine.halving_delta = delta
    log.debug("T=%g steps=%d halving delta %.3e", spec.total_time, steps, delta)
    if delta >= tol:
        raise ConvergenceError(
            f"T={spec.total_time:g}: halving the step ({steps} -> {2 * steps}) "
            f"moved a probability by {delta:.3e} >= {tol:g}"
        )
    return fine


def sweep_T(spec: ProblemSpec, T_list, steps_per_unit_time: float = DEFAULT_STEPS_PER_UNIT_TIME,
            *, check_convergence: bool = False) -> list[EvolutionResult]:
    """One :func:`evolve` per total time, in input order.

    Errors are re-raised with the offending ``T`` in the message.
    """
    T_list = [float(t) for t in T_list]
    if not T_list:
        raise DomainError("T_list must be nonempty")
    if any(b < a for a, b in zip(T_list, T_list[1:])):
        raise DomainError(f"T_list must be ascending, got {T_list}")
    results = []
    for T in T_list:
        try:
            results.append(evolve(spec.with_time(T), default_steps(T, steps_per_unit_time),
                                  check_convergence=check_convergence))
        except AqcError as exc:
            tagged = type(exc)(f"at T={T:g}: {exc}")
            tagged.total_time = T
            raise tagged from exc
    return results


def success_probability(result: EvolutionResult, n: int) -> float:
    """Total probability on labels with ``n_x * m_y == n`` and both positive."""
    return float(sum(p for (x, y), p in result.probabilities.items()
                     if x >= 1 and y >= 1 and x * y == n))


def expected_target_energy(result: EvolutionResult, spec: ProblemSpec) -> float:
    diag = target_diagonal(spec.n, spec.kind, spec.space)
    return float(np.sum(np.abs(result.final_state) ** 2 * diag))


def sample_counts(result: EvolutionResult, shots: int, seed: int = 0) -> dict[tuple[int, int], int]:
    """Simulated number-basis measurements of ``psi(T)``; seeded, for demos only."""
    labels = sorted(result.probabilities)
    p = np.array([result.probabilities[lab] for lab in labels])
    counts = np.random.default_rng(seed).multinomial(int(shots), p / p.sum())
    return {lab: int(c) for lab, c in zip(labels, counts) if c}
