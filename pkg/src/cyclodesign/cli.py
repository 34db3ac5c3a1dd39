"""Command-line front end: ``cyclodesign {weights,designs,sums,invariance,params}``.

Every command builds a report ``{spec, results, discrepancies, timing}``.
Exit status is 0 on success, 1 for usage or configuration errors and 2 when
a mathematical verification fails.  Timing is only filled in with
``--timing`` so that default JSON output is byte-identical across runs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import char_sums as cs
from .code import (
    CodeSpec,
    Regime,
    analytic_distribution_table,
    code_spec,
    default_budget,
    default_threads,
    weight_distribution,
)
from .designs import (
    coverage_on_demand,
    extract_all_blocks,
    reduce_design_level,
    theorem2_bound,
    closed_form_checks,
    theorem5_parameters,
    verify_2design,
)
from .errors import (
    BudgetExceeded,
    CycloDesignError,
    DistributionMismatch,
    FormulaMismatch,
    UnsupportedRegime,
    VerificationError,
    WeightAbsent,
)
from .invariance import (
    affine_invariance_witness,
    build_defining_set,
    verify_affine_action,
    weight_argument_holds,
)
from .util import rng_for

# (p, l, m) -> (length, dimension, minimum distance) as printed with the worked examples
PRINTED_EXAMPLES = {
    (3, 2, 4): (81, 7, 51),
    (3, 3, 6): (729, 10, 477),
    (3, 2, 6): (729, 10, 468),
}


@dataclass
class RunConfig:
    p: int
    l: int
    m: int
    method: str = "both"
    verify_mode: str = "auto"
    samples: int = 100_000
    seed: int = 0
    budget: int | None = None
    fmt: str = "json"
    output: str | None = None
    threads: int | None = None
    timing: bool = False

    def __post_init__(self):
        if self.budget is None:
            self.budget = default_budget()
        if self.threads is None:
            self.threads = default_threads()


class Report:
    def __init__(self, spec: CodeSpec | None, config: RunConfig, command: str):
        self.command = command
        self.spec = _spec_echo(spec, config) if spec is not None else {}
        self.results: dict = {}
        self.discrepancies: list = []
        self.errors: list = []
        self.warnings: list = []
        self.timing: dict = {}
        self.table: list[dict] = []
        self._t0 = time.perf_counter()
        self._record_timing = config.timing

    def lap(self, name: str) -> None:
        if self._record_timing:
            now = time.perf_counter()
            self.timing[name] = round(now - self._t0, 6)
            self._t0 = now

    def warn(self, message: str) -> None:
        self.warnings.append(message)
        print(f"warning: {message}", file=sys.stderr)

    def as_dict(self) -> dict:
        results = dict(self.results)
        if self.errors:
            results["errors"] = self.errors
        if self.warnings:
            results["warnings"] = self.warnings
        return {
            "spec": self.spec,
            "results": results,
            "discrepancies": self.discrepancies,
            "timing": self.timing,
        }

    @property
    def failed(self) -> bool:
        return bool(self.errors)


def _spec_echo(spec: CodeSpec, config: RunConfig) -> dict:
    return {
        "command_seed": config.seed,
        "p": spec.p,
        "l": spec.l,
        "m": spec.m,
        "d": spec.d,
        "regime": spec.regime.value,
        "length": spec.length,
        "dimension": spec.dimension,
        "modulus": [int(c) for c in spec.ctx.modulus],
        "a_domain_size": int(len(spec.a_domain)),
    }


def _error_obj(exc: Exception) -> dict:
    out = {"type": type(exc).__name__, "message": str(exc)}
    if getattr(exc, "witnesses", None):
        out["witnesses"] = exc.witnesses
    if getattr(exc, "findings", None):
        out["findings"] = exc.findings
    return out


def _example_notes(spec: CodeSpec, dist_dimension: int, min_weight: int | None) -> list[dict]:
    printed = PRINTED_EXAMPLES.get((spec.p, spec.l, spec.m))
    if printed is None:
        return []
    notes = []
    n, k, dmin = printed
    if k != dist_dimension:
        notes.append({
            "kind": "printed_dimension",
            "printed": k,
            "computed": dist_dimension,
            "note": f"printed parameters [{n}, {k}, {dmin}] but the weight multiplicities sum to "
                    f"{spec.p}^{dist_dimension}; dimension {dist_dimension} is used",
        })
    if min_weight is not None and dmin != min_weight:
        notes.append({"kind": "printed_min_distance", "printed": dmin, "computed": min_weight})
    return notes


# ---------------------------------------------------------------- commands


def cmd_weights(config: RunConfig) -> Report:
    spec = code_spec(config.p, config.l, config.m)
    rep = Report(spec, config, "weights")
    dists = {}
    methods = ["brute", "analytic"] if config.method == "both" else [config.method]
    if spec.regime is Regime.UNIT_GCD and "analytic" in methods:
        if config.method == "analytic":
            raise UnsupportedRegime("gcd(m, l) = 1: no closed forms; use --method brute")
        rep.warn("gcd(m, l) = 1: closed forms unavailable, analytic method skipped")
        methods = ["brute"]
    for method in methods:
        dists[method] = weight_distribution(spec, method=method, budget=config.budget,
                                            threads=config.threads)
        rep.lap(method)
    if spec.regime is not Regime.UNIT_GCD:
        dists["table"] = analytic_distribution_table(spec)
        rep.lap("table")
    for name, dist in dists.items():
        rep.results[name] = {"distribution": dist.as_list(), "dimension": dist.dimension,
                             "total": dist.total}
    ref_name = "brute" if "brute" in dists else next(iter(dists))
    ref = dists[ref_name]
    for name, dist in dists.items():
        if dist != ref:
            rep.errors.append(_error_obj(DistributionMismatch(
                f"{name} distribution differs from {ref_name}")))
    rep.results["match"] = not rep.errors
    rep.results["enumerator"] = ref.enumerator()
    rep.results["min_weight"] = ref.min_weight
    rep.discrepancies += _example_notes(spec, ref.dimension, ref.min_weight)
    rep.table = ref.as_list()
    return rep


def _design_weights(spec: CodeSpec, config: RunConfig, weight: int | None) -> tuple[list[int], dict]:
    if spec.regime is Regime.UNIT_GCD:
        dist = weight_distribution(spec, "brute", budget=config.budget, threads=config.threads)
    else:
        dist = analytic_distribution_table(spec)
    entries = dist.entries
    if weight is not None:
        if entries.get(weight, 0) == 0:
            raise WeightAbsent(f"no codeword of weight {weight}")
        return [weight], entries
    return [w for w in sorted(entries) if 0 < w < spec.q], entries


def _points_for_pairs(pairs: int) -> int:
    s = 2
    while s * (s - 1) // 2 < pairs:
        s += 1
    return s


def cmd_designs(config: RunConfig, weight: int | None = None, block_dir: str | None = None) -> Report:
    spec = code_spec(config.p, config.l, config.m)
    rep = Report(spec, config, "designs")
    weights, entries = _design_weights(spec, config, weight)
    if weight is None or weight == spec.q:
        rep.discrepancies.append({
            "kind": "degenerate_weight",
            "weight": spec.q,
            "note": "the full point set (constant codewords) is a single block and is not counted as a design",
        })
    if weight == spec.q:
        weights = []
    expected = {}
    if spec.regime is not Regime.UNIT_GCD:
        expected = {c.weight: c.from_counts for c in closed_form_checks(spec)}
    designs = []
    if spec.pair_count <= config.budget:
        blocks = extract_all_blocks(spec, weights, budget=config.budget)
        rep.lap("extract")
        for w in weights:
            bs = blocks[w]
            entry = {"weight": w, "blocks": bs.b, "multiplicity_checked": bs.multiplicity_checked}
            try:
                cert = verify_2design(bs, mode=config.verify_mode, sample_count=config.samples,
                                      seed=config.seed)
                entry.update(cert.as_dict())
                entry["lambda_1"] = int(reduce_design_level(2, bs.v, bs.k, cert.params.lam, 1))
                entry["lambda_0"] = int(reduce_design_level(2, bs.v, bs.k, cert.params.lam, 0))
                if w in expected and expected[w] != cert.params.lam:
                    rep.errors.append({"type": "LambdaMismatch", "weight": w,
                                       "certified": cert.params.lam, "closed_form": expected[w]})
            except VerificationError as exc:
                entry["error"] = _error_obj(exc)
                rep.errors.append(_error_obj(exc))
            if block_dir:
                os.makedirs(block_dir, exist_ok=True)
                path = os.path.join(block_dir, f"blocks_{spec.p}_{spec.l}_{spec.m}_w{w}.txt")
                bs.write(path)
                entry["block_file"] = os.path.basename(path)
            designs.append(entry)
        rep.lap("verify")
    else:
        if spec.regime is Regime.UNIT_GCD:
            raise BudgetExceeded(f"{spec.pair_count} (a, b) pairs exceed budget {config.budget}")
        if config.verify_mode == "full":
            raise BudgetExceeded("full verification needs explicit blocks; spec exceeds the budget")
        if block_dir:
            rep.warn("blocks are not materialized above the enumeration budget; no block files written")
        points = _points_for_pairs(config.samples)
        cov = coverage_on_demand(spec, weights, points=points, seed=config.seed)
        rep.lap("coverage")
        for w in weights:
            c = cov[w]
            vals = np.unique(c.pair_values)
            reps = np.unique(c.replication_values)
            b = entries[w] // (spec.p - 1)
            entry = {"weight": w, "t": 2, "v": spec.q, "k": w, "b": b, "mode": "on-demand",
                     "pairs_checked": c.pairs_checked}
            if len(vals) == 1 and int(vals[0]) == expected.get(w) and len(reps) == 1:
                entry["lambda"] = int(vals[0])
                entry["replication"] = int(reps[0])
            else:
                err = {"type": "NotADesign", "weight": w, "coverage_values": vals[:8].tolist(),
                       "replication_values": reps[:8].tolist(), "closed_form": expected.get(w)}
                entry["error"] = err
                rep.errors.append(err)
            designs.append(entry)
    rep.results["designs"] = designs
    rep.results["theorem2_bound"] = theorem2_bound(min(w for w in entries if w > 0), spec.q, spec.p)
    rep.table = [{k: v for k, v in d.items() if not isinstance(v, dict)} for d in designs]
    return rep


def cmd_sums(config: RunConfig, a: int | None = None, b: int | None = None) -> Report:
    spec = code_spec(config.p, config.l, config.m)
    ctx, l, q = spec.ctx, spec.l, spec.q
    rep = Report(spec, config, "sums")
    for name, val in (("a", a), ("b", b)):
        if val is not None and not 0 <= val < q:
            raise ValueError(f"--{name} must encode a field element in [0, {q})")
    if a is not None or b is not None:
        a_vals = [a] if a is not None else list(range(q))
        b_vals = np.array([b] if b is not None else list(range(q)), dtype=np.int64)
        mode = "given"
    elif q * q <= config.budget:
        a_vals, b_vals, mode = list(range(q)), np.arange(q, dtype=np.int64), "exhaustive"
    else:
        rng = rng_for(config.seed, "weil-sums")
        a_vals = sorted(set(int(x) for x in rng.integers(0, q, size=max(1, config.samples // q))))
        b_vals, mode = np.arange(q, dtype=np.int64), "sampled"
    checked = mismatched = 0
    values = []
    for av in a_vals:
        brute = cs.weil_sums_bruteforce_batch(ctx, l, av, b_vals)
        closed = cs.weil_sums_closed_batch(ctx, l, av, b_vals)
        bad = np.any(brute != closed, axis=1)
        checked += len(b_vals)
        mismatched += int(bad.sum())
        for i in np.nonzero(bad)[0][:5]:
            rep.errors.append({"type": "SumMismatch", "a": av, "b": int(b_vals[i]),
                               "brute": brute[i].tolist(), "closed": closed[i].tolist()})
        if mode == "given":
            for i, bv in enumerate(b_vals):
                values.append({"a": av, "b": int(bv), "brute": brute[i].tolist(),
                               "closed": closed[i].tolist()})
    rep.lap("sums")
    rep.results.update({"mode": mode, "checked": checked, "mismatched": mismatched,
                        "all_equal": mismatched == 0})
    if values:
        rep.results["values"] = values
        rep.table = [{"a": v["a"], "b": v["b"], "brute": " ".join(map(str, v["brute"])),
                      "closed": " ".join(map(str, v["closed"]))} for v in values]
    else:
        rep.table = [{"mode": mode, "checked": checked, "mismatched": mismatched}]
    return rep


def cmd_invariance(config: RunConfig) -> Report:
    spec = code_spec(config.p, config.l, config.m)
    rep = Report(spec, config, "invariance")
    ds = build_defining_set(spec)
    witness = affine_invariance_witness(ds, spec.p, spec.m)
    rep.results["defining_set"] = {"n": ds.n, "residues": list(ds.residues), "includes_zero": ds.includes_zero}
    rep.results["affine_invariant"] = witness is None
    rep.results["weight_argument"] = weight_argument_holds(ds, spec.p, spec.m)
    if witness is not None:
        rep.errors.append({"type": "NotAffineInvariant", "member": witness[0], "missing_descendant": witness[1]})
    rep.lap("defining_set")
    if spec.q <= 3**6:
        side = max(1, math.isqrt(config.samples - 1) + 1)
        action = verify_affine_action(spec, sample_count=side, seed=config.seed, codewords=side)
        rep.results["group_action"] = action.as_dict()
        if not action.ok:
            rep.errors.append({"type": "ActionFailure", "failed": action.failed,
                               "witnesses": action.witnesses})
        rep.lap("group_action")
    else:
        rep.warn("group-action verification is limited to q <= 3^6; skipped")
    rep.table = [{"affine_invariant": rep.results["affine_invariant"],
                  "weight_argument": rep.results["weight_argument"],
                  "action_failed": rep.results.get("group_action", {}).get("failed")}]
    return rep


def cmd_params(config: RunConfig) -> Report:
    spec = code_spec(config.p, config.l, config.m)
    rep = Report(spec, config, "params")
    checks = closed_form_checks(spec)
    rows = []
    for c in checks:
        row = {"weight": c.weight, "b": c.b, "lambda": c.from_counts, "printed_lambda": str(c.printed),
               "agrees": c.agrees,
               "lambda_1": str(reduce_design_level(2, spec.q, c.weight, c.from_counts, 1)),
               "lambda_0": str(reduce_design_level(2, spec.q, c.weight, c.from_counts, 0))}
        rows.append(row)
    try:
        theorem5_parameters(spec)
    except FormulaMismatch as exc:
        rep.errors.append(_error_obj(exc))
    table = analytic_distribution_table(spec)
    rep.results["designs"] = rows
    rep.results["theorem2_bound"] = theorem2_bound(table.min_weight, spec.q, spec.p)
    rep.results["distribution"] = table.as_list()
    rep.table = rows
    return rep


# ---------------------------------------------------------------- output


def render(rep: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep.as_dict(), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        keys: list[str] = []
        for row in rep.table:
            keys += [k for k in row if k not in keys]
        writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rep.table)
        return buf.getvalue()
    lines = [f"{rep.command}: " + ", ".join(f"{k}={v}" for k, v in rep.spec.items()
                                            if k in ("p", "l", "m", "d", "regime", "length", "dimension"))]
    for row in rep.table:
        lines.append("  " + "  ".join(f"{k}={v}" for k, v in row.items()))
    for key in ("enumerator", "match", "all_equal", "theorem2_bound"):
        if key in rep.results:
            lines.append(f"  {key}: {rep.results[key]}")
    for note in rep.discrepancies:
        lines.append(f"  note: {note.get('note', note)}")
    for err in rep.errors:
        lines.append(f"  FAIL: {err}")
    for name, secs in rep.timing.items():
        lines.append(f"  time {name}: {secs:.3f}s")
    return "\n".join(lines) + "\n"


def _emit(rep: Report, config: RunConfig) -> None:
    text = render(rep, config.fmt)
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="odd prime characteristic")
    common.add_argument("--l", type=int, required=True, help="exponent parameter, 1 <= l <= m-1")
    common.add_argument("--m", type=int, required=True, help="extension degree")
    common.add_argument("--method", choices=["both", "brute", "analytic"], default="both")
    common.add_argument("--verify", dest="verify_mode", choices=["auto", "full", "sampled"], default="auto")
    common.add_argument("--samples", type=int, default=100_000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None,
                        help="max (a, b) pairs to enumerate (default 3^18 or $CYCLODESIGN_BUDGET)")
    common.add_argument("--format", dest="fmt", choices=["json", "csv", "text"], default="json")
    common.add_argument("--output", default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--timing", action="store_true", help="record wall-clock timing in the report")

    parser = argparse.ArgumentParser(prog="cyclodesign", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("weights", parents=[common], help="weight distribution (brute and/or closed form)")
    d = sub.add_parser("designs", parents=[common], help="extract supports and verify 2-designs")
    d.add_argument("--weight", type=int, default=None)
    d.add_argument("--block-dir", default=None)
    s = sub.add_parser("sums", parents=[common], help="brute vs closed-form Weil sums")
    s.add_argument("--a", type=int, default=None, help="field element as an integer (base-p digits)")
    s.add_argument("--b", type=int, default=None, help="field element as an integer (base-p digits)")
    sub.add_parser("invariance", parents=[common], help="defining set and affine invariance")
    sub.add_parser("params", parents=[common], help="closed-form design parameters")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    keys = {f for f in RunConfig.__dataclass_fields__}
    try:
        config = RunConfig(**{k: v for k, v in vars(args).items() if k in keys})
        if config.samples < 1:
            raise ValueError("--samples must be positive")
        if args.command == "weights":
            rep = cmd_weights(config)
        elif args.command == "designs":
            rep = cmd_designs(config, weight=args.weight, block_dir=args.block_dir)
        elif args.command == "sums":
            rep = cmd_sums(config, a=args.a, b=args.b)
        elif args.command == "invariance":
            rep = cmd_invariance(config)
        else:
            rep = cmd_params(config)
    except VerificationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (CycloDesignError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    _emit(rep, config)
    return 2 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
