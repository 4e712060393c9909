"""Exact evaluation and classical minimisation of the factoring polynomials.

Two objectives are supported over positive integers ``x, y``::

    Q_N(x, y) = N^2 (N - x y)^2 + x (x - y)^2
    R_N(x, y) = N^2 (N - x y)^2 + (x - y)^2 + x

Both have a unique minimiser with ``x * y == N`` and ``x <= sqrt(N) <= y``,
and ``x == 1`` exactly when ``N`` is prime. The functions here serve as the
ground-truth oracle for the quantum simulation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ClaimViolation, DomainError

__all__ = [
    "ObjectiveKind",
    "FactorPair",
    "FactorisationResult",
    "eval_objective",
    "objective_formula",
    "objective_grid",
    "brute_force_min",
    "divisor_pairs",
    "divisor_min",
    "factorise_fully",
    "objective_slice",
]

# Largest n whose full-grid objective values fit in int64 (values < n^6 + n^3).
_INT64_GRID_LIMIT = 1400


class ObjectiveKind(str, enum.Enum):
    Q = "q"
    R = "r"

    @classmethod
    def parse(cls, value: "str | ObjectiveKind") -> "ObjectiveKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown objective kind {value!r}; expected 'q' or 'r'") from None


@dataclass(frozen=True)
class FactorPair:
    x: int
    y: int
    value: int

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "value": self.value}

    @classmethod
    def from_dict(cls, data: dict) -> "FactorPair":
        return cls(int(data["x"]), int(data["y"]), int(data["value"]))


@dataclass(frozen=True)
class FactorisationResult:
    n: int
    kind: ObjectiveKind
    optimum: FactorPair
    is_prime: bool
    prime_factors: list[int] | None = field(default=None)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "kind": self.kind.value,
            "optimum": self.optimum.to_dict(),
            "is_prime": self.is_prime,
            "prime_factors": self.prime_factors,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FactorisationResult":
        pf = data.get("prime_factors")
        return cls(
            n=int(data["n"]),
            kind=ObjectiveKind.parse(data["kind"]),
            optimum=FactorPair.from_dict(data["optimum"]),
            is_prime=bool(data["is_prime"]),
            prime_factors=None if pf is None else [int(p) for p in pf],
        )


def _check_n(n: int) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    return n


def objective_formula(n, kind: ObjectiveKind, x, y):
    """Evaluate the objective polynomial literally, with no domain checks.

    Works for Python ints (exact), floats, and numpy arrays alike, which is
    what the Hamiltonian diagonal and the real-valued slice need.
    """
    first = n * n * (n - x * y) ** 2
    if kind == ObjectiveKind.Q:
        return first + x * (x - y) ** 2
    return first + (x - y) ** 2 + x


def eval_objective(n: int, kind: "ObjectiveKind | str", x: int, y: int) -> int:
    """Exact value of the objective at a positive integer point.

    Raises
    ------
    DomainError
        If ``n < 2`` or ``x``, ``y`` lie outside ``[1, n]``.
    """
    n = _check_n(n)
    kind = ObjectiveKind.parse(kind)
    for name, v in (("x", x), ("y", y)):
        if isinstance(v, bool) or int(v) != v or not 1 <= int(v) <= n:
            raise DomainError(f"{name} must be an integer in [1, {n}], got {v!r}")
    return objective_formula(n, kind, int(x), int(y))


def objective_grid(n: int, kind: "ObjectiveKind | str") -> np.ndarray:
    """All objective values on ``[1, n] x [1, n]``; entry ``[x-1, y-1]``.

    Exact: int64 while the values provably fit, Python ints otherwise.
    """
    n = _check_n(n)
    kind = ObjectiveKind.parse(kind)
    dtype = np.int64 if n <= _INT64_GRID_LIMIT else object
    r = np.arange(1, n + 1, dtype=np.int64).astype(dtype)
    return objective_formula(n, kind, r[:, None], r[None, :])


def brute_force_min(n: int, kind: "ObjectiveKind | str") -> FactorPair:
    """Global minimiser over the full square grid by exhaustive scan.

    No part of the search relies on divisibility, so this can be used to
    test the theory that predicts the minimiser.

    Raises
    ------
    ClaimViolation
        If the minimum is attained at more than one grid point.
    """
    n = _check_n(n)
    kind = ObjectiveKind.parse(kind)
    grid = objective_grid(n, kind)
    best = grid.min()
    xs, ys = np.nonzero(grid == best)
    if len(xs) != 1:
        where = [(int(a) + 1, int(b) + 1) for a, b in zip(xs, ys)]
        raise ClaimViolation(f"n={n}, kind={kind.value}: {len(where)} minimisers {where}")
    return FactorPair(int(xs[0]) + 1, int(ys[0]) + 1, int(best))


def divisor_pairs(n: int) -> list[tuple[int, int]]:
    """Ordered pairs ``(d, n // d)`` for every divisor ``d`` of ``n``, ascending in ``d``."""
    n = _check_n(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    large = [n // d for d in reversed(small) if d * d != n]
    return [(d, n // d) for d in small + large]


def divisor_min(n: int, kind: "ObjectiveKind | str") -> FactorPair:
    """Minimiser restricted to divisor pairs; fast path for large ``n``.

    Points with ``x * y != n`` cost at least ``n**2`` while some divisor
    pair always costs less, so this agrees with :func:`brute_force_min`.
    """
    n = _check_n(n)
    kind = ObjectiveKind.parse(kind)
    scored = [(objective_formula(n, kind, x, y), x, y) for x, y in divisor_pairs(n)]
    best = min(v for v, _, _ in scored)
    winners = [(x, y) for v, x, y in scored if v == best]
    if len(winners) != 1:
        raise ClaimViolation(f"n={n}, kind={kind.value}: divisor minimisers {winners}")
    x, y = winners[0]
    return FactorPair(x, y, best)


def factorise_fully(n: int, kind: "ObjectiveKind | str" = ObjectiveKind.Q) -> FactorisationResult:
    """Prime factorisation by repeatedly splitting with :func:`divisor_min`."""
    n = _check_n(n)
    kind = ObjectiveKind.parse(kind)
    top = divisor_min(n, kind)
    primes: list[int] = []
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        pair = top if m == n else divisor_min(m, kind)
        if pair.x == 1:
            primes.append(m)
        else:
            stack.extend((pair.x, pair.y))
    primes.sort()
    if math.prod(primes) != n:
        raise ClaimViolation(f"prime factors {primes} do not multiply to {n}")
    return FactorisationResult(n, kind, top, top.x == 1, primes)


def objective_slice(n: int, kind: "ObjectiveKind | str", total: float, step: float = 0.05):
    """Real-valued objective along the line ``x + y = total``.

    Returns ``(xs, values)`` with ``xs`` running from 1 to ``total - 1``
    in increments of ``step``.
    """
    n = _check_n(n)
    kind = ObjectiveKind.parse(kind)
    if total < 2:
        raise DomainError(f"slice sum must be >= 2, got {total}")
    if step <= 0:
        raise DomainError(f"step must be positive, got {step}")
    count = int(math.floor((total - 2) / step + 1e-9)) + 1
    xs = 1.0 + step * np.arange(count)
    values = objective_formula(float(n), kind, xs, total - xs)
    return xs, values
