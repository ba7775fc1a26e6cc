"""Scenario-driven command line front end.

Scenarios are TOML files describing a pair of Levy triplets (or a parametric
family) plus estimator settings; ``run`` evaluates the requested bounds,
Monte Carlo estimates and certified lower bounds over the sweep grid and
writes a CSV report (with a JSON mirror), ``plot`` renders a report, and
``list-theorems`` prints the bound catalogue.

Scenario schema (TOML):

    [scenario]
    id = "..."            # report key
    kind = "pair_certification" | "stable_scaling" | "jr_decay"
    # pair_certification: p, eps, samples, seed, sim_eps, slack, theorems,
    #   [pair.first]/[pair.second] with b, sigma and a [*.measure] table
    #   (family = "zero" | "twopoint" | "finite_discrete" | "stable" with
    #   its parameters), and t or [sweep] t = [...]
    # stable_scaling: p, t, samples, seed, [stable] alpha = [...], c,
    #   eps = [...]
    # jr_decay: [jr] r, budget, n = [...], verify_sup_up_to

The CSV columns are fixed: scenario_id, kind, theorem, alpha, t, eps, n, p,
samples, seed, sim_eps, value, rigorous, branch, emp_point, emp_ci_low,
emp_ci_high, error_budget, lower, extra, pass.  Cells that do not apply to a
row are empty.  Floats are written with repr so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import bounds, empirical, fourier
from .measures import (
    FiniteDiscrete,
    LevyTriplet,
    StablePower,
    TwoPoint,
    ZeroMeasure,
)

CSV_COLUMNS = [
    "scenario_id", "kind", "theorem", "alpha", "t", "eps", "n", "p",
    "samples", "seed", "sim_eps", "value", "rigorous", "branch",
    "emp_point", "emp_ci_low", "emp_ci_high", "error_budget", "lower",
    "extra", "pass",
]

# tags computable from a (pair, t, eps) scenario cell
_PAIR_RUNNABLE = {"MainW", "T1LowerW", "MainTV", "SmallJumpPair", "LieseTV"}


class SchemaError(ValueError):
    """Scenario file violates the schema; message names the field."""


@dataclass
class Scenario:
    id: str
    kind: str
    p: float = 1.0
    eps: float = 0.1
    t: float = 1.0
    samples: int = empirical.DEFAULT_SAMPLES
    seed: int = 0
    sim_eps: float = 0.0
    slack: float = 0.0
    theorems: List[str] = field(default_factory=list)
    triplet1: Optional[LevyTriplet] = None
    triplet2: Optional[LevyTriplet] = None
    sweep_t: List[float] = field(default_factory=list)
    stable: dict = field(default_factory=dict)
    jr: dict = field(default_factory=dict)


def _require(table: dict, key: str, where: str):
    if key not in table:
        raise SchemaError(f"{where}: missing required field '{key}'")
    return table[key]


def _measure_from_spec(spec: dict, where: str):
    family = _require(spec, "family", where)
    if family == "zero":
        return ZeroMeasure()
    if family == "twopoint":
        return TwoPoint(
            float(_require(spec, "eps0", where)), float(spec.get("scale", 1.0))
        )
    if family == "finite_discrete":
        atoms = _require(spec, "atoms", where)
        try:
            return FiniteDiscrete([(float(x), float(r)) for x, r in atoms])
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{where}.atoms: expected [[x, rate], ...] ({exc})")
    if family == "stable":
        return StablePower(
            float(_require(spec, "c", where)),
            float(_require(spec, "alpha", where)),
            float(spec.get("cutoff", 1.0)),
            side=str(spec.get("side", "symmetric")),
        )
    raise SchemaError(
        f"{where}.family: unknown measure family {family!r} "
        "(expected zero | twopoint | finite_discrete | stable)"
    )


def _triplet_from_spec(spec: dict, where: str) -> LevyTriplet:
    nu = _measure_from_spec(spec.get("measure", {"family": "zero"}), f"{where}.measure")
    return LevyTriplet(
        b=float(spec.get("b", 0.0)), sigma=float(spec.get("sigma", 0.0)), nu=nu
    )


def load_scenario(path) -> Scenario:
    """Parse and validate a scenario file; SchemaError messages name the
    offending field."""
    try:
        data = tomllib.loads(Path(path).read_text())
    except tomllib.TOMLDecodeError as exc:
        raise SchemaError(f"{path}: not valid TOML ({exc})")
    head = _require(data, "scenario", str(path))
    sc = Scenario(
        id=str(_require(head, "id", "scenario")),
        kind=str(_require(head, "kind", "scenario")),
        p=float(head.get("p", 1.0)),
        eps=float(head.get("eps", 0.1)),
        t=float(head.get("t", 1.0)),
        samples=int(head.get("samples", empirical.DEFAULT_SAMPLES)),
        seed=int(head.get("seed", 0)),
        sim_eps=float(head.get("sim_eps", 0.0)),
        slack=float(head.get("slack", 0.0)),
        theorems=list(head.get("theorems", [])),
    )
    if not (1.0 <= sc.p <= 2.0):
        raise SchemaError("scenario.p: must lie in [1, 2]")
    if sc.kind == "pair_certification":
        pair = _require(data, "pair", "file")
        sc.triplet1 = _triplet_from_spec(_require(pair, "first", "pair"), "pair.first")
        sc.triplet2 = _triplet_from_spec(_require(pair, "second", "pair"), "pair.second")
        sc.sweep_t = [float(v) for v in data.get("sweep", {}).get("t", [sc.t])]
        if not sc.theorems:
            sc.theorems = ["MainW", "T1LowerW"]
        for tag in sc.theorems:
            if tag not in bounds.BOUND_TAGS:
                raise SchemaError(f"scenario.theorems: unknown bound tag {tag!r}")
            if tag not in _PAIR_RUNNABLE:
                raise SchemaError(
                    f"scenario.theorems: {tag} is not runnable from a pair "
                    f"scenario (supported: {sorted(_PAIR_RUNNABLE)})"
                )
            if tag == "MainTV" and (
                sc.triplet1.sigma <= 0.0 or sc.triplet2.sigma <= 0.0
            ):
                raise SchemaError(
                    "scenario.theorems: MainTV requires sigma > 0 on both "
                    "triplets; set pair.*.sigma or drop the tag"
                )
        if not (0.0 < sc.eps <= 1.0):
            raise SchemaError("scenario.eps: must lie in (0, 1]")
    elif sc.kind == "stable_scaling":
        st = _require(data, "stable", "file")
        sc.stable = {
            "alpha": [float(a) for a in _require(st, "alpha", "stable")],
            "c": float(_require(st, "c", "stable")),
            "eps": [float(e) for e in _require(st, "eps", "stable")],
        }
        if any(not (0.0 < a < 2.0) for a in sc.stable["alpha"]):
            raise SchemaError("stable.alpha: entries must lie in (0, 2)")
        if len(sc.stable["eps"]) < 2:
            raise SchemaError("stable.eps: need at least two points to fit a slope")
    elif sc.kind == "jr_decay":
        jr = _require(data, "jr", "file")
        sc.jr = {
            "r": float(_require(jr, "r", "jr")),
            "budget": float(jr.get("budget", 1.0)),
            "n": [int(n) for n in _require(jr, "n", "jr")],
            "verify_sup_up_to": int(jr.get("verify_sup_up_to", 10**4)),
        }
        if not (1.0 < sc.jr["r"] < 2.0):
            raise SchemaError("jr.r: must lie in (1, 2)")
    else:
        raise SchemaError(
            f"scenario.kind: unknown kind {sc.kind!r} (expected "
            "pair_certification | stable_scaling | jr_decay)"
        )
    return sc


# ---------------------------------------------------------------------------
# Runners
# ---------------------------------------------------------------------------


def _row(**kw) -> dict:
    row = {c: "" for c in CSV_COLUMNS}
    row.update(kw)
    return row


def _run_pair(sc: Scenario) -> List[dict]:
    rows = []
    policy = bounds.ConstantPolicy()
    for t in sc.sweep_t:
        cert = empirical.certify(sc, t=t)
        common = dict(
            scenario_id=sc.id, kind=sc.kind, t=t, eps=sc.eps, p=sc.p,
            samples=sc.samples, seed=sc.seed, sim_eps=sc.sim_eps,
        )
        for tag in sc.theorems:
            if tag == "MainW":
                ok = cert.emp_ci_low - cert.error_budget <= cert.upper * (1.0 + sc.slack)
                rows.append(_row(
                    **common, theorem=tag, value=cert.upper,
                    rigorous=cert.upper_rigorous, branch=cert.branch,
                    emp_point=cert.emp_point, emp_ci_low=cert.emp_ci_low,
                    emp_ci_high=cert.emp_ci_high, error_budget=cert.error_budget,
                    lower=cert.lower, **{"pass": ok},
                ))
            elif tag == "T1LowerW":
                ok = cert.lower <= cert.emp_ci_high + cert.error_budget
                rows.append(_row(
                    **common, theorem=tag, value=cert.lower, rigorous=True,
                    emp_point=cert.emp_point, emp_ci_low=cert.emp_ci_low,
                    emp_ci_high=cert.emp_ci_high, error_budget=cert.error_budget,
                    **{"pass": ok},
                ))
            elif tag == "SmallJumpPair":
                rep = bounds.small_jump_pair_w(
                    sc.p, t, sc.triplet1, sc.triplet2, sc.eps, policy
                )
                rows.append(_row(
                    **common, theorem=tag, value=rep.value, rigorous=rep.rigorous,
                    branch=";".join(f"{k}={v}" for k, v in rep.branches.items()),
                ))
            elif tag == "MainTV":
                rep = bounds.main_tv_bound(t, sc.triplet1, sc.triplet2, sc.eps)
                rows.append(_row(
                    **common, theorem=tag, value=rep.presentation_value,
                    rigorous=rep.rigorous,
                ))
            elif tag == "LieseTV":
                val = bounds.liese_tv(t, sc.triplet1, sc.triplet2)
                rows.append(_row(
                    **common, theorem=tag, value=min(val, 1.0), rigorous=True,
                ))
    return rows


def _fit_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(np.asarray(xs)), np.log(np.asarray(ys)), 1)[0])


def _run_stable(sc: Scenario) -> List[dict]:
    rows = []
    policy = bounds.ConstantPolicy()
    t, c = sc.t, sc.stable["c"]
    for alpha in sc.stable["alpha"]:
        bound_vals, emp_vals = [], []
        for eps in sc.stable["eps"]:
            # one-sided jumps: the small-jump distance is then driven by the
            # third cumulant and actually attains the eps^{alpha/2} rate that
            # the bound predicts (for symmetric jumps the odd cumulants
            # vanish and the true distance decays faster, like eps^alpha)
            measure = StablePower(c, alpha, cutoff=eps, side="positive")
            sb = math.sqrt(measure.sigma_bar_sq(eps))
            rep = bounds.small_jump_gauss_w(sc.p, t, measure, eps, policy)
            bound_norm = rep.value / sb
            tr1 = LevyTriplet(0.0, 0.0, measure)
            tr2 = LevyTriplet(0.0, sb, ZeroMeasure())
            # substitution level well below eps: the certified substitution
            # budget scales linearly in sim_eps, so eps/32 keeps it at ~3%
            # of the small-jump signal being measured
            sim_eps = eps / 32.0
            a = empirical.sample_increment(
                tr1, t, sc.samples, sc.seed, sim_eps=sim_eps
            ).scaled(1.0 / sb)
            b = empirical.sample_increment(tr2, t, sc.samples, sc.seed).scaled(1.0 / sb)
            emp = empirical.empirical_wp(a, b, sc.p)
            bound_vals.append(bound_norm)
            emp_vals.append(emp.point)
            ok = emp.ci_low - a.error_budget <= bound_norm * (1.0 + sc.slack)
            rows.append(_row(
                scenario_id=sc.id, kind=sc.kind, theorem="SmallJumpW",
                alpha=alpha, t=t, eps=eps, p=sc.p, samples=sc.samples,
                seed=sc.seed, sim_eps=sim_eps, value=bound_norm,
                rigorous=rep.rigorous, branch=rep.branches["active"],
                emp_point=emp.point, emp_ci_low=emp.ci_low,
                emp_ci_high=emp.ci_high, error_budget=a.error_budget,
                **{"pass": ok},
            ))
        slope_b = _fit_slope(sc.stable["eps"], bound_vals)
        slope_e = _fit_slope(sc.stable["eps"], emp_vals)
        target = alpha / 2.0
        rows.append(_row(
            scenario_id=sc.id, kind=sc.kind, theorem="SlopeBound", alpha=alpha,
            t=t, p=sc.p, value=slope_b, extra=target,
            **{"pass": abs(slope_b - target) <= 1e-6},
        ))
        rows.append(_row(
            scenario_id=sc.id, kind=sc.kind, theorem="SlopeEmpirical", alpha=alpha,
            t=t, p=sc.p, samples=sc.samples, seed=sc.seed, value=slope_e,
            extra=target, **{"pass": abs(slope_e - target) <= 0.1},
        ))
    return rows


def _run_jr(sc: Scenario) -> List[dict]:
    seq = fourier.jr_tv_sequence(
        sc.jr["r"], sc.jr["n"], sc.jr["budget"], sc.jr["verify_sup_up_to"]
    )
    rows = []
    products = []
    for n, tv, n_tv, product in seq:
        products.append(product)
        rows.append(_row(
            scenario_id=sc.id, kind=sc.kind, theorem="ToscaniTV", n=n,
            t=1.0 / n, value=tv, rigorous=True, extra=product,
        ))
    decreasing = all(b < a for a, b in zip(products, products[1:]))
    rows.append(_row(
        scenario_id=sc.id, kind=sc.kind, theorem="DecayMonotone",
        value=products[-1] if products else "", rigorous=True,
        **{"pass": decreasing},
    ))
    return rows


def run_scenario(sc: Scenario) -> List[dict]:
    if sc.kind == "pair_certification":
        return _run_pair(sc)
    if sc.kind == "stable_scaling":
        return _run_stable(sc)
    return _run_jr(sc)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_report(rows: List[dict], out_dir: Path, stem: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{stem}.csv"
    with csv_path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: _fmt(v) for k, v in row.items()})
    (out_dir / f"{stem}.json").write_text(
        json.dumps(rows, indent=2, default=float) + "\n"
    )
    return csv_path


def all_pass(rows: List[dict]) -> bool:
    return all(row["pass"] is True for row in rows if row["pass"] != "")


# ---------------------------------------------------------------------------
# Plotting
# ---------------------------------------------------------------------------


def _read_report(path: Path) -> List[dict]:
    with Path(path).open() as fh:
        return list(csv.DictReader(fh))


def plot_report(report: Path, kind: str, out: Optional[Path] = None) -> Path:
    import matplotlib

    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "levybounds"
    rows = _read_report(report)
    out = Path(out) if out is not None else Path(report).with_suffix(f".{kind}.svg")
    fig, ax = plt.subplots(figsize=(6, 4))
    if kind == "scaling":
        cells = [r for r in rows if r["theorem"] == "SmallJumpW"]
        for alpha in sorted({r["alpha"] for r in cells}):
            sub = [r for r in cells if r["alpha"] == alpha]
            eps = [float(r["eps"]) for r in sub]
            ax.loglog(eps, [float(r["value"]) for r in sub], "o-",
                      label=f"bound, alpha={alpha}")
            ax.loglog(eps, [float(r["emp_point"]) for r in sub], "s--",
                      label=f"empirical, alpha={alpha}")
        ax.set_xlabel("eps")
        ax.set_ylabel("normalized W1")
    elif kind == "sandwich":
        cells = [r for r in rows if r["theorem"] == "MainW"]
        ts = [float(r["t"]) for r in cells]
        ax.plot(ts, [float(r["lower"]) for r in cells], "v-", label="lower")
        ax.plot(ts, [float(r["emp_point"]) for r in cells], "o-", label="empirical")
        ax.plot(ts, [float(r["value"]) for r in cells], "^-", label="upper")
        ax.set_xlabel("t")
        ax.set_ylabel("W_p")
    elif kind == "decay":
        cells = [r for r in rows if r["theorem"] == "ToscaniTV"]
        ns = [int(r["n"]) for r in cells]
        ax.loglog(ns, [float(r["extra"]) for r in cells], "o-",
                  label="n-sample TV product bound")
        ax.set_xlabel("n")
        ax.set_ylabel("bound")
    else:
        raise ValueError(f"unknown plot kind {kind!r} (scaling | sandwich | decay)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, metadata={"Date": None})
    plt.close(fig)
    return out


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def list_theorems(file=None) -> None:
    file = file or sys.stdout
    width = max(len(tag) for tag in bounds.BOUND_TAGS)
    for tag in bounds.BOUND_TAGS:
        info = bounds.THEOREM_INFO[tag]
        print(f"{tag:<{width}}  {info['formula']}", file=file)
        print(f"{'':<{width}}  requires: {info['requires']}", file=file)
        print(
            f"{'':<{width}}  constants: {info['constants']}; "
            f"rigorous: {info['rigorous']}",
            file=file,
        )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="levybounds",
        description="Wasserstein/TV bounds between Levy marginals, with "
        "Monte Carlo certification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario file")
    p_run.add_argument("file")
    p_run.add_argument("--out", default="reports")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--samples", type=int, default=None)

    p_plot = sub.add_parser("plot", help="plot a CSV report")
    p_plot.add_argument("report")
    p_plot.add_argument("--kind", required=True,
                        choices=["scaling", "sandwich", "decay"])
    p_plot.add_argument("--out", default=None)

    sub.add_parser("list-theorems", help="print the bound catalogue")

    args = parser.parse_args(argv)

    if args.command == "list-theorems":
        list_theorems()
        return 0

    if args.command == "plot":
        try:
            out = plot_report(Path(args.report), args.kind,
                              Path(args.out) if args.out else None)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(out)
        return 0

    # run
    try:
        sc = load_scenario(args.file)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        sc.seed = args.seed
    if args.samples is not None:
        sc.samples = args.samples
    rows = run_scenario(sc)
    csv_path = write_report(rows, Path(args.out), sc.id)
    ok = all_pass(rows)
    checked = sum(1 for r in rows if r["pass"] != "")
    passed = sum(1 for r in rows if r["pass"] is True)
    print(f"{csv_path}: {passed}/{checked} certification checks passed")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
