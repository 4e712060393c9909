"""Command-line front end.

Every command prints JSON (default) or CSV to stdout, or to ``--out``.
Output is deterministic: identical arguments give byte-identical output.

Exit codes: 0 success, 2 domain error, 3 violated mathematical claim,
4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

from . import bounds, diophantine, spectra
from .evolve import (
    DEFAULT_STEPS_PER_UNIT_TIME,
    EvolutionResult,
    default_steps,
    evolve,
    sample_counts,
    success_probability,
    sweep_T,
)
from .diophantine import ObjectiveKind
from .errors import ClaimViolation, DomainError, NumericalError
from .fock import DEFAULT_N_MAX
from .hamiltonian import ProblemSpec, default_theta

EXIT_OK, EXIT_DOMAIN, EXIT_CLAIM, EXIT_NUMERIC = 0, 2, 3, 4
BRUTE_FORCE_LIMIT = 300
REPORT_THRESHOLD = 1e-6


@dataclass
class RunConfig:
    command: str
    n: int
    objective: str = "q"
    n_max: int = DEFAULT_N_MAX
    theta: str = "auto"
    time: float = 100.0
    t_list: list[float] = field(default_factory=list)
    steps: str = "auto"
    grid: int = spectra.DEFAULT_GRID
    levels: int = spectra.DEFAULT_LEVELS
    output_format: str = "json"
    output_path: str | None = None

    @property
    def kind(self) -> ObjectiveKind:
        return ObjectiveKind.parse(self.objective)

    def resolved_theta(self) -> float:
        return default_theta(self.n) if self.theta == "auto" else float(self.theta)

    def resolved_steps(self, total_time: float) -> int:
        return default_steps(total_time) if self.steps == "auto" else int(self.steps)

    def problem(self, total_time: float | None = None) -> ProblemSpec:
        return ProblemSpec.default(self.n, self.kind, n_max=self.n_max, theta=self.resolved_theta(),
                                   total_time=self.time if total_time is None else total_time)


class Output:
    """A JSON document or a CSV table, plus metadata kept apart from the data."""

    def __init__(self, data=None, *, columns=None, rows=None, meta=None, footer=None):
        self.data = data
        self.columns = columns
        self.rows = rows
        self.meta = meta or {}
        self.footer = footer

    def render(self, fmt: str) -> str:
        if fmt == "json":
            doc = {"meta": self.meta, "data": self.data}
            if self.data is None:
                doc["data"] = [dict(zip(self.columns, r)) for r in self.rows]
            return json.dumps(doc, sort_keys=True, indent=2) + "\n"
        if self.columns is None:
            raise DomainError("this command has no tabular form; use --format json")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        w.writerows(self.rows)
        if self.footer:
            for key, value in self.footer.items():
                buf.write(f"# {key}: {value}\n")
        return buf.getvalue()


def _label(lab) -> str:
    return "none" if lab is None else f"{lab[0]}:{lab[1]}"


def cmd_oracle(cfg: RunConfig, full: bool = False, verify: bool = False) -> Output:
    best = diophantine.divisor_min(cfg.n, cfg.kind)
    result = diophantine.FactorisationResult(cfg.n, cfg.kind, best, best.x == 1)
    if full:
        result = diophantine.factorise_fully(cfg.n, cfg.kind)
    data = result.to_dict()
    if verify and cfg.n <= BRUTE_FORCE_LIMIT:
        brute = diophantine.brute_force_min(cfg.n, cfg.kind)
        if brute != best:
            raise ClaimViolation(f"brute force {brute} disagrees with divisor scan {best}")
        data["brute_force"] = brute.to_dict()
    row = [cfg.n, cfg.kind.value, best.x, best.y, best.value, result.is_prime]
    columns = ["n", "objective", "x", "y", "value", "is_prime"]
    if full:
        columns.append("prime_factors")
        row.append(" ".join(map(str, result.prime_factors)))
    return Output(data, columns=columns, rows=[row], meta={"command": "oracle"})


def cmd_factor(cfg: RunConfig) -> Output:
    out = cmd_oracle(cfg, full=True)
    out.meta["command"] = "factor"
    return out


def _simulation_payload(res: EvolutionResult, n: int) -> dict:
    top = res.top(2)
    return {
        "total_time": res.total_time,
        "steps": res.steps,
        "norm_drift": res.norm_drift,
        "halving_delta": res.halving_delta,
        "success_probability": success_probability(res, n),
        "top": [{"label": list(lab), "probability": p} for lab, p in top],
    }


def cmd_simulate(cfg: RunConfig, check: bool = False, shots: int = 0, seed: int = 0) -> Output:
    spec = cfg.problem()
    res = evolve(spec, cfg.resolved_steps(spec.total_time), check_convergence=check)
    table = [(lab, p) for lab, p in res.top(len(res.probabilities)) if p > REPORT_THRESHOLD]
    rows = []
    for (x, y), p in table:
        amp = res.final_state[spec.space.index(x, y)]
        rows.append([x, y, p, float(amp.real), float(amp.imag)])
    data = _simulation_payload(res, cfg.n)
    data["probabilities"] = [[x, y, p] for (x, y), p in table]
    if shots:
        data["samples"] = [[x, y, c] for (x, y), c in sorted(sample_counts(res, shots, seed).items())]
    meta = {"command": "simulate", "n": cfg.n, "objective": cfg.kind.value, "n_max": cfg.n_max,
            "theta": cfg.resolved_theta(), "schedule": "linear"}
    footer = {"success_probability": data["success_probability"], "norm_drift": res.norm_drift,
              "top": " ".join(_label(lab) for lab, _ in res.top(2))}
    return Output(data, columns=["n_x", "m_y", "probability", "amp_re", "amp_im"], rows=rows,
                  meta=meta, footer=footer)


def cmd_sweep(cfg: RunConfig, check: bool = False) -> Output:
    spec = cfg.problem()
    if cfg.steps == "auto":
        density = DEFAULT_STEPS_PER_UNIT_TIME
    else:
        density = float(cfg.steps)
    results = sweep_T(spec, cfg.t_list, density, check_convergence=check)
    rows, data = [], []
    for res in results:
        (l1, p1), (l2, p2) = res.top(2)
        rows.append([res.total_time, res.steps, l1[0], l1[1], p1, l2[0], l2[1], p2,
                     success_probability(res, cfg.n), res.norm_drift])
        data.append(_simulation_payload(res, cfg.n))
    meta = {"command": "sweep", "n": cfg.n, "objective": cfg.kind.value, "n_max": cfg.n_max,
            "theta": cfg.resolved_theta(), "steps_per_unit_time": density}
    columns = ["T", "steps", "top1_x", "top1_y", "top1_p", "top2_x", "top2_y", "top2_p",
               "success_probability", "norm_drift"]
    return Output(data, columns=columns, rows=rows, meta=meta)


def cmd_spectrum(cfg: RunConfig) -> Output:
    flow = spectra.spectral_flow(cfg.problem(), cfg.grid, cfg.levels)
    columns = ["s"] + [f"level_{i}" for i in range(flow.k)]
    rows = [[s] + row for s, row in zip(flow.s_grid, flow.levels)]
    meta = {"command": "spectrum", "n": cfg.n, "objective": cfg.kind.value, "n_max": cfg.n_max,
            "theta": cfg.resolved_theta()}
    footer = {"endpoint_labels": " ".join(_label(lab) for lab in flow.endpoint_labels)}
    return Output(flow.to_dict(), columns=columns, rows=rows, meta=meta, footer=footer)


def cmd_slice(cfg: RunConfig, total: float, step: float = 0.05) -> Output:
    xs, values = diophantine.objective_slice(cfg.n, cfg.kind, total, step)
    rows = [[round(float(x), 10), float(v)] for x, v in zip(xs, values)]
    meta = {"command": "slice", "n": cfg.n, "objective": cfg.kind.value, "sum": total, "step": step}
    return Output(columns=["x", "value"], rows=rows, meta=meta)


def cmd_bound(cfg: RunConfig, theta_sweep: list[float] | None = None) -> Output:
    columns = ["theta", "delta_I_E_P", "g_integral", "t_perp", "e_cost"]
    if theta_sweep:
        reports = bounds.theta_sweep(cfg.n, theta_sweep, cfg.kind)
        rows = [[r.theta_x.real, r.delta_I_E_P, r.g_integral, r.t_perp, r.e_cost] for r in reports]
        meta = {"command": "bound", "n": cfg.n, "objective": cfg.kind.value, "theta_sweep": theta_sweep}
        return Output([r.to_dict() for r in reports], columns=columns, rows=rows, meta=meta)
    report = bounds.bound_report(cfg.problem(total_time=1.0))
    meta = {"command": "bound", "n": cfg.n, "objective": cfg.kind.value, "n_max": cfg.n_max,
            "theta": cfg.resolved_theta()}
    row = [report.theta_x.real, report.delta_I_E_P, report.g_integral, report.t_perp, report.e_cost]
    return Output(report.to_dict(), columns=columns, rows=[row], meta=meta)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _theta(text: str) -> str:
    if text == "auto":
        return text
    try:
        float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"theta must be 'auto' or a real number, got {text!r}") from None
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aqcfactor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, physics=True):
        p.add_argument("--n", type=int, required=True, help="integer to factor (>= 2)")
        p.add_argument("--objective", choices=["q", "r"], default="q")
        p.add_argument("--format", dest="output_format", choices=["json", "csv"], default="json")
        p.add_argument("--out", dest="output_path", default=None, help="write here instead of stdout")
        if physics:
            p.add_argument("--n-max", type=int, default=DEFAULT_N_MAX, help="highest occupation per mode")
            p.add_argument("--theta", type=_theta, default="auto", help="coherent amplitude, or 'auto' = N^(1/4)")

    p = sub.add_parser("oracle", help="classical minimiser of the objective")
    common(p, physics=False)
    p.add_argument("--full", action="store_true", help="also give the full prime factorisation")
    p.add_argument("--verify", action="store_true", help=f"cross-check by brute force when N <= {BRUTE_FORCE_LIMIT}")

    p = sub.add_parser("factor", help="prime factorisation by repeated minimisation")
    common(p, physics=False)

    for name, helptext in (("simulate", "adiabatic evolution for one total time"),
                           ("sweep", "adiabatic evolution for several total times")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        if name == "simulate":
            p.add_argument("--time", type=float, default=100.0, help="total evolution time T")
            p.add_argument("--steps", default="auto", help="split steps, or 'auto'")
            p.add_argument("--samples", type=int, default=0, help="also draw this many seeded measurements")
            p.add_argument("--seed", type=int, default=0)
        else:
            p.add_argument("--t-list", type=_float_list, required=True, help="comma-separated T values")
            p.add_argument("--steps", default="auto", help="steps per unit time, or 'auto'")
        p.add_argument("--check-convergence", action="store_true", help="verify by step halving")

    p = sub.add_parser("spectrum", help="lowest levels of H(s) across the interpolation")
    common(p)
    p.add_argument("--grid", type=int, default=spectra.DEFAULT_GRID)
    p.add_argument("--levels", type=int, default=spectra.DEFAULT_LEVELS)

    p = sub.add_parser("slice", help="objective along the line x + y = SUM")
    common(p, physics=False)
    p.add_argument("--sum", type=float, required=True)
    p.add_argument("--step", type=float, default=0.05)

    p = sub.add_parser("bound", help="energy spread, T_perp and energy cost")
    common(p)
    p.add_argument("--theta-sweep", type=_float_list, default=None, help="comma-separated theta values")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        n=args.n,
        objective=args.objective,
        n_max=getattr(args, "n_max", DEFAULT_N_MAX),
        theta=getattr(args, "theta", "auto"),
        time=getattr(args, "time", 100.0),
        t_list=getattr(args, "t_list", None) or [],
        steps=getattr(args, "steps", "auto"),
        grid=getattr(args, "grid", spectra.DEFAULT_GRID),
        levels=getattr(args, "levels", spectra.DEFAULT_LEVELS),
        output_format=args.output_format,
        output_path=args.output_path,
    )


def _dispatch(cfg: RunConfig, args: argparse.Namespace) -> Output:
    if cfg.command == "oracle":
        return cmd_oracle(cfg, full=args.full, verify=args.verify)
    if cfg.command == "factor":
        return cmd_factor(cfg)
    if cfg.command == "simulate":
        return cmd_simulate(cfg, check=args.check_convergence, shots=args.samples, seed=args.seed)
    if cfg.command == "sweep":
        return cmd_sweep(cfg, check=args.check_convergence)
    if cfg.command == "spectrum":
        return cmd_spectrum(cfg)
    if cfg.command == "slice":
        return cmd_slice(cfg, args.sum, args.step)
    return cmd_bound(cfg, args.theta_sweep)


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    try:
        text = _dispatch(cfg, args).render(cfg.output_format)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ClaimViolation as exc:
        print(f"claim violated: {exc}", file=sys.stderr)
        return EXIT_CLAIM
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
