"""Spectral flow of the interpolated Hamiltonian and its level gaps."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, optimize

from .errors import DomainError, EigensolverError
from .hamiltonian import ProblemSpec, build_H_I, build_H_P

DEFAULT_GRID = 101
DEFAULT_LEVELS = 8
LABEL_DOMINANCE = 0.99
DEGENERACY_ATOL = 1e-8


@dataclass
class SpectralFlow:
    s_grid: list[float]
    levels: list[list[float]]
    endpoint_labels: list[tuple[int, int] | None]
    near_degeneracies: list[tuple[float, int]] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.levels[0]) if self.levels else 0

    def level(self, i: int) -> np.ndarray:
        return np.array([row[i] for row in self.levels])

    def to_dict(self) -> dict:
        return {
            "s_grid": list(self.s_grid),
            "levels": [list(row) for row in self.levels],
            "endpoint_labels": [None if lab is None else list(lab) for lab in self.endpoint_labels],
            "near_degeneracies": [[s, i] for s, i in self.near_degeneracies],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SpectralFlow":
        return cls(
            s_grid=[float(s) for s in data["s_grid"]],
            levels=[[float(e) for e in row] for row in data["levels"]],
            endpoint_labels=[None if lab is None else (int(lab[0]), int(lab[1]))
                             for lab in data["endpoint_labels"]],
            near_degeneracies=[(float(s), int(i)) for s, i in data.get("near_degeneracies", [])],
        )


def _label_of(vec: np.ndarray, spec: ProblemSpec) -> tuple[int, int] | None:
    weights = np.abs(vec) ** 2
    top = int(np.argmax(weights))
    if weights[top] < LABEL_DOMINANCE:
        return None
    return spec.space.label(top)


def spectral_flow(spec: ProblemSpec, grid_points: int = DEFAULT_GRID,
                  k: int = DEFAULT_LEVELS) -> SpectralFlow:
    """The ``k`` lowest eigenvalues of ``H(s)`` on a uniform grid over ``[0, 1]``.

    At ``s = 1`` the Hamiltonian is diagonal and the eigenvectors are
    number states. Their labels are reported, or ``None`` when no single
    basis state carries 99% of the weight (which happens inside degenerate
    subspaces).
    """
    dim = spec.space.dim
    if grid_points < 2:
        raise DomainError(f"grid_points must be >= 2, got {grid_points}")
    if not 1 <= k <= dim:
        raise DomainError(f"k must lie in [1, {dim}], got {k}")
    H_I = build_H_I(spec.theta_x, spec.theta_y, spec.space)
    H_P = build_H_P(spec.n, spec.kind, spec.space)
    if not np.any(H_I.imag):
        # real thetas: real symmetric eigensolves are several times cheaper
        H_I, H_P = H_I.real, H_P.real
    s_grid = np.linspace(0.0, 1.0, grid_points)
    levels, labels = [], []
    for i, s in enumerate(s_grid):
        H = spec.schedule.f(s) * H_I + spec.schedule.g(s) * H_P
        last = i == grid_points - 1
        try:
            if last:
                w, v = linalg.eigh(H, subset_by_index=[0, k - 1])
            else:
                w = linalg.eigh(H, eigvals_only=True, subset_by_index=[0, k - 1])
        except (linalg.LinAlgError, ValueError) as exc:
            raise EigensolverError(f"eigensolver failed at s={s:.6g}: {exc}") from exc
        levels.append([float(e) for e in np.sort(w)])
        if last:
            labels = [_label_of(v[:, j], spec) for j in range(k)]
    flow = SpectralFlow([float(s) for s in s_grid], levels, labels)
    flow.near_degeneracies = find_near_degeneracies(flow)
    return flow


def find_near_degeneracies(flow: SpectralFlow, atol: float = DEGENERACY_ATOL) -> list[tuple[float, int]]:
    """Grid points ``(s, i)`` where levels ``i`` and ``i + 1`` touch, i.e. candidate crossings."""
    hits = []
    for s, row in zip(flow.s_grid, flow.levels):
        for i in range(len(row) - 1):
            if row[i + 1] - row[i] <= atol:
                hits.append((s, i))
    return hits


def min_gap(flow: SpectralFlow, i: int, j: int, spec: ProblemSpec | None = None) -> tuple[float, float]:
    """Smallest ``level_j(s) - level_i(s)`` over the grid and the ``s`` where it occurs.

    With ``spec`` given, an interior grid minimum is polished by a bounded
    scalar search over the two neighbouring cells. The result then no
    longer depends on the grid spacing.
    """
    k = flow.k
    if not (0 <= i <= j < k):
        raise IndexError(f"level indices ({i}, {j}) must satisfy 0 <= i <= j < {k}")
    gaps = flow.level(j) - flow.level(i)
    where = int(np.argmin(gaps))
    best, s_best = float(gaps[where]), flow.s_grid[where]
    if spec is None or i == j:
        return best, s_best
    lo = flow.s_grid[max(where - 1, 0)]
    hi = flow.s_grid[min(where + 1, len(flow.s_grid) - 1)]
    H_I = build_H_I(spec.theta_x, spec.theta_y, spec.space)
    H_P = build_H_P(spec.n, spec.kind, spec.space)

    def gap(s):
        H = spec.schedule.f(s) * H_I + spec.schedule.g(s) * H_P
        w = linalg.eigh(H, eigvals_only=True, subset_by_index=[0, j])
        return w[j] - w[i]

    res = optimize.minimize_scalar(gap, bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-10})
    if res.success and res.fun < best:
        best, s_best = float(res.fun), float(res.x)
    return best, s_best


def gap_at(flow: SpectralFlow, i: int, j: int, s_index: int = -1) -> float:
    """``level_j - level_i`` at one grid point; the endpoint ``s = 1`` by default."""
    row = flow.levels[s_index]
    return float(row[j] - row[i])
