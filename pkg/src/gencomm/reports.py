"""Run reports for the command-line tools.

Every command returns a report dict with exactly the keys in
:data:`REPORT_FIELDS` and an exit status:

* 0 - success (a violated conjectured bound only raises ``discovery``)
* 1 - a proved bound was violated, or a counterexample failed to reproduce
* 2 - malformed input
"""

import csv
import io as _stdio
import json
import math
import time
from datetime import datetime, timezone

from . import __version__, kernels
from .bounds import CATALOG, DEFAULT_TOL, Status, eval_all, eval_bound
from .commutator import build_K, pairing_check, psd_certificate
from .io import instance_to_dict
from .linalg import frob_norm_sq
from .search import SearchConfig, hill_climb, known_counterexamples, parse_distribution, sample_draw

REPORT_FIELDS = (
    "tool_version",
    "command",
    "args",
    "rng_seed",
    "backend",
    "timestamp",
    "wall_time",
    "ok",
    "discovery",
    "bounds",
    "entries",
    "searches",
    "evaluation",
)
AGGREGATE_FIELDS = (
    "bound_id",
    "status",
    "shape",
    "instances_evaluated",
    "holds_count",
    "violations",
    "max_ratio",
    "max_ratio_instance",
)
VOLATILE_FIELDS = ("timestamp", "wall_time")
MAX_VIOLATION_DUMPS = 20
REPRO_ATOL = 1e-12

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_MALFORMED = 2


def _finite_or_none(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def new_report(command, args, rng_seed=None):
    return {
        "tool_version": __version__,
        "command": command,
        "args": args,
        "rng_seed": rng_seed,
        "backend": kernels.BACKEND,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "wall_time": 0.0,
        "ok": True,
        "discovery": False,
        "bounds": [],
        "entries": [],
        "searches": [],
        "evaluation": None,
    }


class _Aggregate:
    def __init__(self, bound_id, shape):
        self.bound_id = bound_id
        self.status = CATALOG[bound_id].status
        self.shape = list(shape)
        self.evaluated = 0
        self.holds = 0
        self.violations = []
        self.max_ratio = None
        self.max_instance = None

    def add(self, rep, t):
        self.evaluated += 1
        if rep.holds:
            self.holds += 1
        elif len(self.violations) < MAX_VIOLATION_DUMPS:
            dump = instance_to_dict(t)
            dump["report"] = rep.as_dict()
            self.violations.append(dump)
        if rep.ratio is not None and (self.max_ratio is None or rep.ratio > self.max_ratio):
            self.max_ratio, self.max_instance = rep.ratio, t

    def as_dict(self):
        return {
            "bound_id": self.bound_id,
            "status": self.status.value,
            "shape": self.shape,
            "instances_evaluated": self.evaluated,
            "holds_count": self.holds,
            "violations": self.violations,
            "max_ratio": self.max_ratio,
            "max_ratio_instance": None if self.max_instance is None else instance_to_dict(self.max_instance),
        }


def _flag_aggregates(report):
    for agg in report["bounds"]:
        if agg["holds_count"] < agg["instances_evaluated"]:
            if agg["status"] == Status.PROVED.value:
                report["ok"] = False
            elif agg["status"] == Status.CONJECTURED.value:
                report["discovery"] = True


def _finish(report, started):
    report["wall_time"] = round(time.perf_counter() - started, 6)
    return report, (EXIT_OK if report["ok"] else EXIT_VIOLATION)


def cmd_verify(shapes, trials, seed, tol=DEFAULT_TOL, dist="complex_gaussian"):
    """Evaluate every applicable bound on ``trials`` random triples per shape."""
    started = time.perf_counter()
    dist = parse_distribution(dist)
    report = new_report(
        "verify",
        {"shapes": [list(s) for s in shapes], "trials": trials, "tol": [tol.abs_tol, tol.rel_tol], "dist": str(dist)},
        rng_seed=seed,
    )
    for m, n in shapes:
        aggs = {}
        for i in range(trials):
            t = sample_draw(dist, m, n, seed, i)
            reps, _ = eval_all(t, tol)
            for rep in reps:
                if rep.bound_id not in aggs:
                    aggs[rep.bound_id] = _Aggregate(rep.bound_id, (m, n))
                aggs[rep.bound_id].add(rep, t)
        report["bounds"].extend(agg.as_dict() for agg in aggs.values())
    _flag_aggregates(report)
    return _finish(report, started)


def cmd_repro(registry=None):
    """Re-evaluate the exact counterexamples and compare with their expected sides."""
    started = time.perf_counter()
    report = new_report("repro", {})
    for ce in registry if registry is not None else known_counterexamples():
        rep = eval_bound(ce.bound_id, ce.instance)
        lhs_err = abs(rep.lhs - ce.expected_lhs)
        rhs_err = abs(rep.rhs - ce.expected_rhs)
        match = lhs_err <= REPRO_ATOL and rhs_err <= REPRO_ATOL
        report["entries"].append(
            {
                "name": ce.name,
                "bound_id": ce.bound_id,
                "lhs": rep.lhs,
                "rhs": rep.rhs,
                "expected_lhs": ce.expected_lhs,
                "expected_rhs": ce.expected_rhs,
                "lhs_error": lhs_err,
                "rhs_error": rhs_err,
                "holds": rep.holds,
                "match": match,
                "instance": instance_to_dict(ce.instance),
            }
        )
        if not match:
            report["ok"] = False
    return _finish(report, started)


def cmd_search(bound_id, shapes, trials, steps, seed, dist="complex_gaussian", step_size=0.5):
    """Hill-climb the ratio of one bound on each shape."""
    started = time.perf_counter()
    dist = parse_distribution(dist)
    status = CATALOG[bound_id].status
    configs = [SearchConfig(bound_id, s, trials, steps, step_size, seed, dist) for s in shapes]
    report = new_report(
        "search",
        {
            "bound": bound_id,
            "shapes": [list(s) for s in shapes],
            "trials": trials,
            "steps": steps,
            "step_size": step_size,
            "dist": str(dist),
        },
        rng_seed=seed,
    )
    for cfg in configs:
        rec = hill_climb(cfg)
        violation = rec.violation
        report["searches"].append(
            {
                "bound_id": bound_id,
                "status": status.value,
                "shape": list(cfg.shape),
                "best_ratio": _finite_or_none(rec.best_ratio),
                "terminated": rec.terminated.value,
                "iterations": rec.iterations,
                "trace": [[it, _finite_or_none(r)] for it, r in rec.trace],
                "best_instance": instance_to_dict(rec.best_instance),
                "violation": instance_to_dict(rec.best_instance) if violation else None,
            }
        )
        if violation and status is Status.PROVED:
            report["ok"] = False
        elif violation and status is Status.CONJECTURED:
            report["discovery"] = True
    return _finish(report, started)


def cmd_eval(t, tol=DEFAULT_TOL):
    """Full evaluation of one instance: all bounds plus both certificates."""
    started = time.perf_counter()
    report = new_report("eval", {"provenance": t.provenance, "tol": [tol.abs_tol, tol.rel_tol]})
    reps, skipped = eval_all(t, tol)
    for rep in reps:
        agg = _Aggregate(rep.bound_id, t.shape)
        agg.add(rep, t)
        report["bounds"].append(agg.as_dict())
    _flag_aggregates(report)

    cert = psd_certificate(t.a, t.c)
    pairing = pairing_check(t.a, t.c)
    k_sq = frob_norm_sq(build_K(t.a, t.c))
    report["evaluation"] = {
        "instance": instance_to_dict(t),
        "reports": [rep.as_dict() for rep in reps],
        "skipped": skipped,
        "k_frobenius_sq": k_sq,
        "k_is_zero": k_sq == 0.0,
        "certificate": {
            "min_eig": cert.min_eig,
            "max_eig": cert.max_eig,
            "gram_residual": cert.gram_residual,
            "lambda1_kk": cert.lambda1_kk,
            "lambda2_sum": cert.lambda2_sum,
            "lambda2_bound": cert.lambda2_bound,
            "lambda2_checked": cert.lambda2_checked,
            "gram_ok": cert.gram_ok,
            "floor_ok": cert.floor_ok,
            "chain_ok": cert.chain_ok,
            "lambda2_ok": cert.lambda2_ok,
            "ok": cert.ok,
        },
        "pairing": {
            "eigenvalues": [float(w) for w in pairing.eigenvalues],
            "clusters": pairing.clusters,
            "threshold": pairing.threshold,
            "vacuous": pairing.vacuous,
            "ok": pairing.ok,
        },
    }
    if not (cert.ok and pairing.ok):
        report["ok"] = False
    return _finish(report, started)


# -- serialization --------------------------------------------------------------

def dumps(report):
    """Structured form: one JSON document.  Floats use ``repr``, which
    round-trips every double exactly."""
    return json.dumps(report, indent=1, allow_nan=False) + "\n"


def strip_volatile(text):
    """Drop the timestamp and wall-time lines from a structured report."""
    keys = tuple(f'"{k}":' for k in VOLATILE_FIELDS)
    return "".join(line for line in text.splitlines(True) if not line.lstrip().startswith(keys))


TABULAR_COLUMNS = (
    "command", "bound_id", "status", "shape", "instances_evaluated", "holds_count",
    "violations", "max_ratio", "lhs", "rhs", "terminated",
)


def tabular_rows(report):
    cmd = report["command"]
    rows = []
    for agg in report["bounds"]:
        rows.append({
            "command": cmd, "bound_id": agg["bound_id"], "status": agg["status"],
            "shape": "x".join(map(str, agg["shape"])),
            "instances_evaluated": agg["instances_evaluated"], "holds_count": agg["holds_count"],
            "violations": agg["instances_evaluated"] - agg["holds_count"], "max_ratio": agg["max_ratio"],
        })
    for e in report["entries"]:
        shape = e["instance"]["shape"]
        rows.append({
            "command": cmd, "bound_id": e["bound_id"], "status": CATALOG[e["bound_id"]].status.value,
            "shape": "x".join(map(str, shape)), "instances_evaluated": 1, "holds_count": int(e["holds"]),
            "violations": int(not e["holds"]), "lhs": e["lhs"], "rhs": e["rhs"],
        })
    for s in report["searches"]:
        rows.append({
            "command": cmd, "bound_id": s["bound_id"], "status": s["status"],
            "shape": "x".join(map(str, s["shape"])), "max_ratio": s["best_ratio"],
            "terminated": s["terminated"],
        })
    return rows


def dumps_tabular(report):
    buf = _stdio.StringIO()
    writer = csv.DictWriter(buf, fieldnames=TABULAR_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in tabular_rows(report):
        writer.writerow({k: ("" if v is None else (repr(v) if isinstance(v, float) else v)) for k, v in row.items()})
    return buf.getvalue()
