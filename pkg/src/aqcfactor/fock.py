"""Truncated two-mode bosonic Fock space.

Operators are dense numpy arrays. Single-mode matrices have shape
``(n_max + 1, n_max + 1)``; two-mode matrices act on the product basis
``|n_x, m_y>`` with flat index ``n_x * (n_max_y + 1) + m_y``, which is the
ordering produced by ``np.kron(A_x, B_y)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammainc

from .errors import DomainError, TruncationError

DEFAULT_N_MAX = 22
TAIL_TOLERANCE = 1e-6
HERMITIAN_ATOL = 1e-12


@dataclass(frozen=True)
class FockSpace:
    n_max_x: int = DEFAULT_N_MAX
    n_max_y: int = DEFAULT_N_MAX

    def __post_init__(self):
        for name in ("n_max_x", "n_max_y"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 0:
                raise DomainError(f"{name} must be a nonnegative integer, got {v!r}")

    @classmethod
    def square(cls, n_max: int = DEFAULT_N_MAX) -> "FockSpace":
        return cls(n_max, n_max)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_max_x + 1, self.n_max_y + 1

    @property
    def dim(self) -> int:
        return (self.n_max_x + 1) * (self.n_max_y + 1)

    def index(self, n_x: int, m_y: int) -> int:
        if not (0 <= n_x <= self.n_max_x and 0 <= m_y <= self.n_max_y):
            raise DomainError(f"label ({n_x}, {m_y}) outside the truncated space {self.shape}")
        return n_x * (self.n_max_y + 1) + m_y

    def label(self, index: int) -> tuple[int, int]:
        if not 0 <= index < self.dim:
            raise DomainError(f"index {index} outside [0, {self.dim})")
        n_x, m_y = divmod(int(index), self.n_max_y + 1)
        return n_x, m_y

    def labels(self) -> tuple[np.ndarray, np.ndarray]:
        """Occupation numbers ``(n_x, m_y)`` of every basis index, as flat arrays."""
        nx, my = np.meshgrid(
            np.arange(self.n_max_x + 1), np.arange(self.n_max_y + 1), indexing="ij"
        )
        return nx.ravel(), my.ravel()


def _check_n_max(n_max: int, minimum: int = 0) -> int:
    if isinstance(n_max, bool) or int(n_max) != n_max or n_max < minimum:
        raise DomainError(f"n_max must be an integer >= {minimum}, got {n_max!r}")
    return int(n_max)


def annihilation(n_max: int) -> np.ndarray:
    """Lowering operator ``a`` with ``a|n> = sqrt(n)|n-1>``."""
    n_max = _check_n_max(n_max, 1)
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1).astype(complex)


def creation(n_max: int) -> np.ndarray:
    return annihilation(n_max).conj().T


def number_operator(n_max: int) -> np.ndarray:
    n_max = _check_n_max(n_max)
    return np.diag(np.arange(n_max + 1, dtype=float)).astype(complex)


def identity(n_max: int) -> np.ndarray:
    return np.eye(_check_n_max(n_max) + 1, dtype=complex)


def is_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.allclose(m, m.conj().T, rtol=0, atol=atol)


def coherent_tail_weight(theta: complex, n_max: int) -> float:
    """Weight ``1 - sum_{n <= n_max} |c_n|^2`` lost by truncating ``|theta>``.

    The occupation distribution is Poisson with mean ``|theta|^2``; its
    upper tail is a regularised lower incomplete gamma function, which
    avoids the cancellation in ``1 - sum``.
    """
    n_max = _check_n_max(n_max)
    lam = abs(complex(theta)) ** 2
    if lam == 0.0:
        return 0.0
    return float(gammainc(n_max + 1, lam))


class CoherentState(NamedTuple):
    vector: np.ndarray
    tail_weight: float


def coherent_state(theta: complex, n_max: int, tol: float = TAIL_TOLERANCE) -> CoherentState:
    """Truncated, renormalised coherent state ``|theta>``.

    Amplitudes are ``exp(-|theta|^2/2) theta^n / sqrt(n!)`` for
    ``n <= n_max``; the vector is rescaled to unit norm afterwards and the
    discarded weight is returned alongside it.

    Raises
    ------
    TruncationError
        If the discarded weight exceeds ``tol``.
    """
    n_max = _check_n_max(n_max)
    theta = complex(theta)
    tail = coherent_tail_weight(theta, n_max)
    if tail > tol:
        raise TruncationError(
            f"n_max={n_max} discards weight {tail:.3e} > {tol:g} of |theta={theta}>"
        )
    # recursive form keeps theta^n / sqrt(n!) finite for large n
    amps = np.empty(n_max + 1, dtype=complex)
    amps[0] = np.exp(-abs(theta) ** 2 / 2)
    for k in range(1, n_max + 1):
        amps[k] = amps[k - 1] * theta / np.sqrt(k)
    amps /= np.linalg.norm(amps)
    return CoherentState(amps, tail)


def min_n_max_for(theta: complex, tol: float = TAIL_TOLERANCE) -> int:
    """Smallest cutoff whose coherent-state tail weight is within ``tol``."""
    n = 0
    while coherent_tail_weight(theta, n) > tol:
        n += 1
    return n


def tensor_product(a: np.ndarray, b: np.ndarray, space: FockSpace) -> np.ndarray:
    """``A (x) B`` on the two-mode product basis of ``space``."""
    nx, ny = space.shape
    if a.shape != (nx, nx) or b.shape != (ny, ny):
        raise DomainError(
            f"operator shapes {a.shape}, {b.shape} do not match space {space.shape}"
        )
    return np.kron(a, b)


def product_state(psi_x: np.ndarray, psi_y: np.ndarray, space: FockSpace) -> np.ndarray:
    nx, ny = space.shape
    if psi_x.shape != (nx,) or psi_y.shape != (ny,):
        raise DomainError(f"state shapes {psi_x.shape}, {psi_y.shape} do not match space {space.shape}")
    return np.kron(psi_x, psi_y)


def basis_state(space: FockSpace, n_x: int, m_y: int) -> np.ndarray:
    v = np.zeros(space.dim, dtype=complex)
    v[space.index(n_x, m_y)] = 1.0
    return v


def truncation_commutator_defect(n_max: int) -> np.ndarray:
    """``[a, a^dagger] - 1`` for the truncated ladder matrices.

    Equals ``-(n_max + 1) |n_max><n_max|``: the canonical commutator only
    fails at the highest retained level, where ``a^dagger`` has nowhere
    to go.
    """
    n_max = _check_n_max(n_max, 1)
    a = annihilation(n_max)
    ad = creation(n_max)
    comm = a @ ad - ad @ a
    # sqrt(k) * sqrt(k) carries roundoff; the true product is an integer matrix
    exact = np.rint(comm.real)
    if not np.allclose(comm, exact, rtol=0, atol=1e-12):
        raise AssertionError("ladder commutator is not integer-valued")
    return exact.astype(complex) - identity(n_max)
