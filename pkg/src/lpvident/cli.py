"""Command-line front end: order sweep, engine choice, deterministic reports.

``analyze`` walks the stack order w upward from zero, collecting
input-output-parameter equations until every output is represented (or the
order cap is hit), classifies the exhaustive summary at each covered order,
and stops as soon as the verdict is Global or Local.  ``local`` runs the
one-sided Jacobian rank test on the same equation set, ``iop`` dumps the
intermediate artifacts at one fixed order, and ``verify`` replays the
self-check oracles.  Reports are byte-identical for identical
(model, flags, seed) inputs, so the timings block holds exact operation
counts instead of wall-clock times.

Exit codes: 0 success / determinate verdict; 1 verifier failure or engine
disagreement; 2 model or usage error; 3 Undetermined verdict (budget
exhaustion, empty null-space at the order cap, trial disagreement, or
Jacobian rank below q).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from .classify import (GLOBAL, LOCAL, NON_IDENTIFIABLE, UNDETERMINED,
                       ParamStatus, Verdict, classify, draw_theta_ref,
                       jacobian_local_test)
from .elimination import left_nullspace
from .errors import (LpvIdentError, ModelError, NoParameterDependence,
                     OrderTooLargeForBudget)
from .expr import expr_text
from .iop import extract_summary, form_iop
from .model import parse_model, print_model
from .poly import poly_text
from .stacking import build_stack
from .verify import (backsubstitute_check, discrete_trajectory_check,
                     stack_substitution_check)


@dataclass
class AnalysisConfig:
    max_order: int | None = None     # default: the state count n
    method: str = "groebner"         # groebner | jacobian | both
    mode: str = "numeric"            # numeric | symbolic
    trials: int = 5
    seed: int = 0
    fmt: str = "text"                # text | json
    pair_budget: int = 20000
    degree_budget: int = 60
    size_cap: int = 64

    def validate(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.max_order is not None and self.max_order < 1:
            raise ValueError("max order must be at least 1")
        if min(self.pair_budget, self.degree_budget, self.size_cap) < 1:
            raise ValueError("budgets must be positive")
        if self.method not in ("groebner", "jacobian", "both"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.mode not in ("numeric", "symbolic"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.fmt not in ("text", "json"):
            raise ValueError(f"unknown format {self.fmt!r}")


def _new_counters() -> dict:
    return {"stack_builds": 0, "nullspace_calls": 0, "classification_runs": 0,
            "jacobian_runs": 0, "verifier_checks": 0}


def _sweep(model, config: AnalysisConfig, counters: dict, trace: list):
    """Yield (w, stack, iop, covered-output names) for w = 0..cap."""
    cap = model.n if config.max_order is None else config.max_order
    for w in range(cap + 1):
        stack = build_stack(model, w, config.size_cap)
        counters["stack_builds"] += 1
        ns = left_nullspace(stack.O)
        counters["nullspace_calls"] += 1
        iop = form_iop(stack, ns, model.discrete) if ns.dimension else None
        covered = set()
        if iop is not None:
            for i in range(len(iop.equations)):
                covered |= iop.outputs_in(i)
        trace.append({
            "w": w,
            "rows": stack.rows,
            "cols": stack.cols,
            "rank": ns.rank,
            "nullspace_dim": ns.dimension,
            "equations": [] if iop is None else
                [poly_text(e, discrete=model.discrete) for e in iop.equations],
            "covered_outputs": sorted(covered),
        })
        yield w, stack, iop, covered


def _run_engines(iop, summary, model, config: AnalysisConfig, counters: dict):
    """Classify with the configured engine(s); Groebner is authoritative."""
    params = model.params()
    if config.method == "jacobian":
        v = jacobian_local_test(iop, params, config.trials, config.seed)
        counters["jacobian_runs"] += 1
        return v, None
    v = classify(summary, params, config.mode, config.trials, config.seed,
                 config.pair_budget, config.degree_budget)
    counters["classification_runs"] += 1
    cross = None
    if config.method == "both":
        jv = jacobian_local_test(iop, params, config.trials, config.seed)
        counters["jacobian_runs"] += 1
        rank_q = jv.evidence[0]["max_rank"] == jv.evidence[0]["q"]
        consistent = rank_q if v.model_status in (GLOBAL, LOCAL) else True
        cross = {
            "jacobian_status": jv.model_status,
            "max_rank": jv.evidence[0]["max_rank"],
            "q": jv.evidence[0]["q"],
            "consistent": consistent,
        }
        if not consistent:
            cross["error"] = ("engine disagreement: Groebner verdict "
                              f"{v.model_status} but Jacobian rank "
                              f"{jv.evidence[0]['max_rank']} below q")
    return v, cross


def _trivial_verdict(model, method: str) -> Verdict:
    # a parameter-free summary constrains nothing
    statuses = {name: ParamStatus(NON_IDENTIFIABLE)
                for name in model.param_names}
    ev = [{"note": "exhaustive summary carries no parameter dependence"}]
    return Verdict(NON_IDENTIFIABLE, statuses, method, 0, ev)


def _run_verifier(model, stack, iop, config: AnalysisConfig, counters: dict):
    out = {
        "backsubstitution": backsubstitute_check(model, iop).ok,
        "stack_substitution": stack_substitution_check(model, stack),
        "trajectory": None,
    }
    counters["verifier_checks"] += 2
    if model.discrete:
        theta = draw_theta_ref(model.params(), random.Random(config.seed))
        rep = discrete_trajectory_check(model, iop, theta, steps=12,
                                        seed=config.seed)
        out["trajectory"] = {"ok": rep.ok, "windows": rep.windows,
                             "max_residual": str(rep.max_residual)}
        counters["verifier_checks"] += 1
    return out


# --- report assembly ---

def _model_block(model) -> dict:
    return {
        "domain": model.domain,
        "states": list(model.state_names),
        "inputs": list(model.input_names),
        "outputs": list(model.output_names),
        "params": list(model.param_names),
        "scheduling": list(model.sched_names),
        "n": model.n, "m": model.m, "p": model.p, "q": model.q,
        "warnings": [d.render() for d in model.warnings],
        "source": print_model(model),
    }


def _config_block(command: str, config: AnalysisConfig, model) -> dict:
    return {
        "command": command,
        "max_order": model.n if config.max_order is None else config.max_order,
        "method": config.method,
        "mode": config.mode,
        "trials": config.trials,
        "seed": config.seed,
        "pair_budget": config.pair_budget,
        "degree_budget": config.degree_budget,
        "size_cap": config.size_cap,
    }


def _verdict_block(verdict, achieved, summary_texts, cross, guidance) -> dict:
    block = {
        "model": verdict.model_status,
        "parameters": {name: {"status": st.status, "degree": st.degree}
                       for name, st in verdict.per_param.items()},
        "method": verdict.method,
        "trials": verdict.trials,
        "achieved_at_order": achieved,
        "summary": summary_texts,
        "evidence": verdict.evidence,
    }
    if cross is not None:
        block["cross_check"] = cross
    if guidance:
        block["guidance"] = guidance
    return block


def _timings_block(counters: dict) -> dict:
    out = {"units": "exact operation counts (deterministic)"}
    out.update(sorted(counters.items()))
    return out


def _status_label(entry: dict) -> str:
    if entry["status"] == LOCAL and entry["degree"]:
        return f"Local({entry['degree']})"
    return entry["status"]


def _render_text(report: dict) -> str:
    lines = []
    mb = report["model"]
    lines.append(f"model: {mb['domain']}, n={mb['n']} m={mb['m']} "
                 f"p={mb['p']} q={mb['q']}")
    for warn in mb["warnings"]:
        lines.append(warn)
    for t in report["trace"]:
        lines.append(f"w={t['w']}: stack {t['rows']}x{t['cols']}, "
                     f"rank {t['rank']}, null-space dim {t['nullspace_dim']}")
        for eq in t["equations"]:
            lines.append(f"  psi: {eq}")
        if t.get("notice"):
            lines.append(f"  {t['notice']}")
        for label, rows in (("O", t.get("O")), ("G", t.get("G"))):
            if rows is None:
                continue
            lines.append(f"  {label}:")
            for row in rows:
                lines.append("    [" + ", ".join(row) + "]")
        for orow in t.get("omega", []):
            lines.append("  omega: [" + ", ".join(orow) + "]")
        if t.get("summary") is not None:
            lines.append("  summary: {" + ", ".join(t["summary"]) + "}")
    v = report["verdict"]
    if v is not None:
        if v["summary"] is not None:
            lines.append("exhaustive summary: {" + ", ".join(v["summary"]) + "}")
        lines.append(f"verdict: {v['model']} (method={v['method']}, "
                     f"trials={v['trials']}, order={v['achieved_at_order']})")
        for name in sorted(v["parameters"]):
            lines.append(f"  {name}: {_status_label(v['parameters'][name])}")
        cross = v.get("cross_check")
        if cross:
            lines.append(f"cross-check: jacobian {cross['jacobian_status']}, "
                         f"rank {cross['max_rank']} of q={cross['q']}, "
                         f"consistent={cross['consistent']}")
            if cross.get("error"):
                lines.append(f"cross-check error: {cross['error']}")
        if v.get("guidance"):
            lines.append(f"guidance: {v['guidance']}")
    ver = report["verifier"]
    if ver is not None:
        for name in ("backsubstitution", "stack_substitution"):
            lines.append(f"check {name}: {'pass' if ver[name] else 'FAIL'}")
        if ver["trajectory"] is not None:
            tr = ver["trajectory"]
            lines.append(f"check trajectory: {'pass' if tr['ok'] else 'FAIL'} "
                         f"(windows={tr['windows']}, "
                         f"max residual {tr['max_residual']})")
    tm = report["timings"]
    lines.append("counts: " + ", ".join(
        f"{k}={tm[k]}" for k in sorted(tm) if k != "units"))
    return "\n".join(lines) + "\n"


def _emit(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2,
                          separators=(",", ": ")) + "\n"
    return _render_text(report)


# --- subcommands ---

def run_analyze(model, config: AnalysisConfig) -> tuple:
    counters = _new_counters()
    trace: list = []
    wanted = set(model.output_names)
    verdict = None
    achieved = None
    summary_texts = None
    cross = None
    guidance = None
    deepest = None
    try:
        for w, stack, iop, covered in _sweep(model, config, counters, trace):
            if iop is None or not wanted <= covered:
                continue
            deepest = (stack, iop)
            achieved = w
            try:
                summary = extract_summary(iop)
            except NoParameterDependence:
                verdict = _trivial_verdict(model, config.method)
                summary_texts = []
                continue
            summary_texts = [expr_text(e) for e in summary.elements]
            verdict, cross = _run_engines(iop, summary, model, config,
                                          counters)
            if verdict.model_status in (GLOBAL, LOCAL):
                break
    except OrderTooLargeForBudget as exc:
        guidance = f"{exc}; raise --size-cap or lower --max-order"
    if verdict is None:
        cap = model.n if config.max_order is None else config.max_order
        statuses = {nm: ParamStatus(UNDETERMINED) for nm in model.param_names}
        verdict = Verdict(UNDETERMINED, statuses, config.method, 0, [])
        if guidance is None:
            guidance = (f"no covering equation set up to order {cap}; "
                        "raise --max-order")
    verifier = None
    if deepest is not None:
        verifier = _run_verifier(model, deepest[0], deepest[1], config,
                                 counters)
    report = {
        "model": _model_block(model),
        "config": _config_block("analyze", config, model),
        "trace": trace,
        "verdict": _verdict_block(verdict, achieved, summary_texts, cross,
                                  guidance),
        "verifier": verifier,
        "timings": _timings_block(counters),
    }
    if cross is not None and not cross["consistent"]:
        return report, 1
    if verdict.model_status == UNDETERMINED:
        return report, 3
    code = 0
    if verifier is not None:
        traj = verifier["trajectory"]
        ok = (verifier["backsubstitution"] and verifier["stack_substitution"]
              and (traj is None or traj["ok"]))
        code = 0 if ok else 1
    return report, code


def run_local(model, config: AnalysisConfig) -> tuple:
    counters = _new_counters()
    trace: list = []
    wanted = set(model.output_names)
    verdict = None
    achieved = None
    guidance = None
    try:
        for w, stack, iop, covered in _sweep(model, config, counters, trace):
            if iop is None or not wanted <= covered:
                continue
            achieved = w
            verdict = jacobian_local_test(iop, model.params(), config.trials,
                                          config.seed)
            counters["jacobian_runs"] += 1
            break
    except OrderTooLargeForBudget as exc:
        guidance = f"{exc}; raise --size-cap or lower --max-order"
    if verdict is None:
        cap = model.n if config.max_order is None else config.max_order
        statuses = {nm: ParamStatus(UNDETERMINED) for nm in model.param_names}
        verdict = Verdict(UNDETERMINED, statuses, "jacobian", 0, [])
        if guidance is None:
            guidance = (f"no covering equation set up to order {cap}; "
                        "raise --max-order")
    report = {
        "model": _model_block(model),
        "config": _config_block("local", config, model),
        "trace": trace,
        "verdict": _verdict_block(verdict, achieved, None, None, guidance),
        "verifier": None,
        "timings": _timings_block(counters),
    }
    return report, 0 if verdict.model_status == LOCAL else 3


def run_iop(model, config: AnalysisConfig, w: int) -> tuple:
    counters = _new_counters()
    stack = build_stack(model, w, config.size_cap)
    counters["stack_builds"] += 1
    ns = left_nullspace(stack.O)
    counters["nullspace_calls"] += 1
    def ex(e):
        return expr_text(e, discrete=model.discrete)

    entry = {
        "w": w,
        "rows": stack.rows,
        "cols": stack.cols,
        "rank": ns.rank,
        "nullspace_dim": ns.dimension,
        "O": [[ex(e) for e in row] for row in stack.O],
        "G": [[ex(e) for e in row] for row in stack.G],
        "Y0": [ex(e) for e in stack.Y0],
        "omega": [],
        "equations": [],
        "covered_outputs": [],
        "summary": None,
    }
    if ns.dimension:
        iop = form_iop(stack, ns, model.discrete)
        entry["omega"] = [[ex(e) for e in row] for row in ns.rows]
        entry["equations"] = [poly_text(e, discrete=model.discrete)
                              for e in iop.equations]
        covered = set()
        for i in range(len(iop.equations)):
            covered |= iop.outputs_in(i)
        entry["covered_outputs"] = sorted(covered)
        try:
            summary = extract_summary(iop)
            entry["summary"] = [expr_text(e) for e in summary.elements]
        except NoParameterDependence:
            entry["summary"] = []
            entry["notice"] = "no parameter dependence in the summary"
    else:
        entry["notice"] = "null-space empty at this order"
    report = {
        "model": _model_block(model),
        "config": _config_block("iop", config, model),
        "trace": [entry],
        "verdict": None,
        "verifier": None,
        "timings": _timings_block(counters),
    }
    return report, 0


def run_verify(model, config: AnalysisConfig) -> tuple:
    counters = _new_counters()
    trace: list = []
    wanted = set(model.output_names)
    found = None
    for w, stack, iop, covered in _sweep(model, config, counters, trace):
        if iop is not None and wanted <= covered:
            found = (stack, iop)
            break
    report = {
        "model": _model_block(model),
        "config": _config_block("verify", config, model),
        "trace": trace,
        "verdict": None,
        "verifier": None,
        "timings": _timings_block(counters),
    }
    if found is None:
        cap = model.n if config.max_order is None else config.max_order
        report["verifier"] = {
            "backsubstitution": False,
            "stack_substitution": False,
            "trajectory": None,
            "notice": f"no covering equation set up to order {cap}",
        }
        report["timings"] = _timings_block(counters)
        return report, 1
    verifier = _run_verifier(model, found[0], found[1], config, counters)
    report["verifier"] = verifier
    report["timings"] = _timings_block(counters)
    traj = verifier["trajectory"]
    ok = (verifier["backsubstitution"] and verifier["stack_substitution"]
          and (traj is None or traj["ok"]))
    return report, 0 if ok else 1


# --- argument handling ---

def _add_common(sub, with_engine: bool) -> None:
    sub.add_argument("model", help="model file")
    sub.add_argument("--max-order", type=int, default=None,
                     help="order sweep cap (default: state count)")
    if with_engine:
        sub.add_argument("--method", default="groebner",
                         choices=("groebner", "jacobian", "both"))
        sub.add_argument("--mode", default="numeric",
                         choices=("numeric", "symbolic"))
    sub.add_argument("--trials", type=int, default=5)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--format", default="text", choices=("text", "json"))
    sub.add_argument("--pair-budget", type=int, default=20000)
    sub.add_argument("--degree-budget", type=int, default=60)
    sub.add_argument("--size-cap", type=int, default=64)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lpvident",
        description="Structural identifiability of LPV and quasi-LPV "
                    "state-space models by parity-space elimination.")
    subs = ap.add_subparsers(dest="command", required=True)
    _add_common(subs.add_parser(
        "analyze", help="order sweep, elimination, and classification"),
        with_engine=True)
    _add_common(subs.add_parser(
        "local", help="one-sided Jacobian-rank local test"),
        with_engine=False)
    iop = subs.add_parser("iop", help="dump stack, null-space, equations, "
                                      "and summary at one order")
    _add_common(iop, with_engine=False)
    iop.add_argument("--order", type=int, required=True, help="stack order w")
    _add_common(subs.add_parser(
        "verify", help="back-substitution and trajectory self-checks"),
        with_engine=False)
    return ap


def _config_from(args) -> AnalysisConfig:
    cfg = AnalysisConfig(
        max_order=args.max_order,
        method=getattr(args, "method", "groebner"),
        mode=getattr(args, "mode", "numeric"),
        trials=args.trials,
        seed=args.seed,
        fmt=args.format,
        pair_budget=args.pair_budget,
        degree_budget=args.degree_budget,
        size_cap=args.size_cap,
    )
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.model).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        model = parse_model(text)
        config = _config_from(args)
    except (ModelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "analyze":
            report, code = run_analyze(model, config)
        elif args.command == "local":
            report, code = run_local(model, config)
        elif args.command == "iop":
            if args.order < 1:
                print("error: --order must be at least 1", file=sys.stderr)
                return 2
            report, code = run_iop(model, config, args.order)
        else:
            report, code = run_verify(model, config)
    except LpvIdentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(_emit(report, config.fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
