import ast
import inspect
import json
import math

import numpy as np
import pytest
from scipy.stats import poisson

from aqcfactor import ProblemSpec, bounds
from aqcfactor.bounds import (
    BoundReport,
    bound_report,
    energy_cost,
    energy_spread,
    initial_energy,
    scaling_n_max,
    t_perp,
    target_moments,
    theta_sweep,
)
from aqcfactor.diophantine import objective_formula
from aqcfactor.errors import DegenerateBoundError

THETA6 = 6**0.25


def poisson_moments(n, theta, n_max):
    """Both H_P moments from truncated, renormalised Poisson weights; exact objective ints."""
    k = np.arange(n_max + 1)
    w = poisson.pmf(k, abs(theta) ** 2)
    w = w / w.sum()
    m1 = m2 = 0.0
    for a in range(n_max + 1):
        for b in range(n_max + 1):
            q = objective_formula(n, "q", a, b)
            m1 += w[a] * w[b] * q
            m2 += w[a] * w[b] * q * q
    return m1, m2


def test_moments_match_poisson_oracle():
    spec = ProblemSpec.default(6)
    m1, m2 = target_moments(spec)
    o1, o2 = poisson_moments(6, THETA6, 22)
    assert m1 == pytest.approx(o1, rel=1e-6)
    assert m2 == pytest.approx(o2, rel=1e-6)
    assert energy_spread(spec) == pytest.approx(math.sqrt(o2 - o1 * o1), rel=1e-6)


def test_zero_theta_is_degenerate():
    spec = ProblemSpec.default(6, theta=0.0)
    assert energy_spread(spec) == 0.0
    with pytest.raises(DegenerateBoundError):
        t_perp(spec)
    assert energy_cost(spec) == 6**4


def test_linear_schedule_t_perp():
    spec = ProblemSpec.default(6)
    rep = bound_report(spec)
    assert rep.g_integral == 0.5
    assert rep.t_perp == pytest.approx(2 / rep.delta_I_E_P, rel=1e-15)
    assert rep.t_perp * rep.delta_I_E_P * rep.g_integral == pytest.approx(1, rel=1e-15)
    assert 0 < rep.t_perp < math.inf


def test_e_cost_is_target_mean():
    spec = ProblemSpec.default(6)
    assert abs(initial_energy(spec)) < 1e-6
    assert energy_cost(spec) == pytest.approx(target_moments(spec)[0], abs=1e-9)


def test_doubling_theta_lowers_t_perp():
    a = ProblemSpec.default(6, theta=THETA6)
    b = ProblemSpec.default(6, theta=2 * THETA6, n_max=scaling_n_max(6, 2 * THETA6))
    assert t_perp(b) < t_perp(a)


def test_spread_grows_with_n():
    spreads = [energy_spread(ProblemSpec.default(n, theta=1.0, n_max=scaling_n_max(n, 1.0)))
               for n in (8, 16, 32, 64)]
    assert all(b > a for a, b in zip(spreads, spreads[1:]))


def test_e_cost_quartic_slope():
    ns = [8, 16, 32, 64]
    costs = [energy_cost(ProblemSpec.default(n, theta=1.0, n_max=scaling_n_max(n, 1.0))) for n in ns]
    slope = np.polyfit(np.log(ns), np.log(costs), 1)[0]
    print(f"e_cost log-log slope {slope:.4f}")
    assert 3.8 <= slope <= 4.2


def test_theta_trade_off():
    reports = theta_sweep(6, [THETA6, 2 * THETA6, 4 * THETA6])
    tp = [r.t_perp for r in reports]
    ec = [r.e_cost for r in reports]
    assert all(b <= a for a, b in zip(tp, tp[1:]))
    assert all(b >= a for a, b in zip(ec, ec[1:]))


def test_scaling_n_max():
    assert scaling_n_max(8, 1.0) == 12
    assert scaling_n_max(64, 1.0) == 32
    assert scaling_n_max(2, 4.0) >= 30


def test_complex_theta_depends_on_modulus_only():
    a = ProblemSpec.default(6, theta=1.3)
    b = ProblemSpec(6, theta_x=1.3j, theta_y=-1.3, space=a.space)
    assert energy_spread(b) == pytest.approx(energy_spread(a), rel=1e-12)


def test_report_round_trip():
    rep = bound_report(ProblemSpec.default(6))
    back = BoundReport.from_dict(json.loads(json.dumps(rep.to_dict())))
    assert back == rep


def test_no_time_dependent_state_used():
    tree = ast.parse(inspect.getsource(bounds))
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            imported.add(node.module or "")
            imported.update(alias.name for alias in node.names)
        elif isinstance(node, ast.Import):
            imported.update(alias.name for alias in node.names)
    assert not any("evolve" in name or "spectra" in name for name in imported)
