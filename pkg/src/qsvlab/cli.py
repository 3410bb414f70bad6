"""Command-line front end.

Four subcommands: ``verify`` runs the oracle battery, ``tradeoff`` sweeps
round counts for a named attack, ``variable-round`` does the same for
protocols with a probabilistic round count, and ``crossover`` tabulates
where the i.i.d. attack overtakes the naive one. Reports go to stdout as a
table and, with ``--out``, to CSV or JSON; identical config and seed give
byte-identical artifacts.

Settings resolve as: command-line flag, then config-file key, then the
``QSVLAB_SEED`` environment variable (seed only), then built-in defaults.
The config file is flat ``key = value`` text; ``#`` starts a comment.
"""

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .attacks import iid_composable_attack, iid_standalone_attack, naive_attack
from .bounds import composable_bound, standalone_bound, variable_round_bounds
from .kernels import PureState
from .oracle import DEFAULT_SEED, OracleConfig, available_checks, haar_random_pure, run_checks
from .protocol import (
    HonestSource,
    canonical_protocol,
    canonical_variable_protocol,
    truncated_geometric_rounds,
    uniform_rounds,
)
from .security import crossover_scan, evaluate_composable, evaluate_standalone
from .states import TargetState

CSV_VERSION_LINE = "# qsvlab report schema v1"
CSV_HEADER = "N,eps_h,eps_d,eps_sum,bound_loose,bound_tight,slack,attack,alpha,definition"

ATTACK_NAMES = ("naive", "iid-standalone", "iid-composable", "honest")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class ReportRow:
    n: float
    eps_h: float
    eps_d: float
    eps_sum: float
    bound_loose: float
    bound_tight: float
    slack: float
    attack: str
    alpha: float | None
    definition: str
    wall_time: float  # seconds; never serialized, artifacts must be reproducible

    def csv_line(self) -> str:
        alpha = "" if self.alpha is None else repr(self.alpha)
        n = repr(self.n) if isinstance(self.n, float) and not self.n.is_integer() else str(int(self.n))
        return ",".join(
            [
                n,
                repr(self.eps_h),
                repr(self.eps_d),
                repr(self.eps_sum),
                repr(self.bound_loose),
                repr(self.bound_tight),
                repr(self.slack),
                self.attack,
                alpha,
                self.definition,
            ]
        )

    def as_dict(self) -> dict:
        return {
            "N": self.n,
            "eps_h": self.eps_h,
            "eps_d": self.eps_d,
            "eps_sum": self.eps_sum,
            "bound_loose": self.bound_loose,
            "bound_tight": self.bound_tight,
            "slack": self.slack,
            "attack": self.attack,
            "alpha": self.alpha,
            "definition": self.definition,
        }


def load_config(path: str) -> dict[str, str]:
    """Parse a flat key = value config file, reporting the offending line."""
    entries: dict[str, str] = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise UsageError(f"{path}:{lineno}: empty key")
        entries[key] = value.strip()
    return entries


def _setting(args, config, key, default, cast):
    flag = getattr(args, key.replace("-", "_"), None)
    if flag is not None:
        return flag
    if key in config:
        try:
            return cast(config[key])
        except ValueError as exc:
            raise UsageError(f"config key {key}: {exc}") from exc
    return default


def _resolve_seed(args, config) -> int:
    env_default = DEFAULT_SEED
    env = os.environ.get("QSVLAB_SEED")
    if env is not None:
        try:
            env_default = int(env)
        except ValueError as exc:
            raise UsageError(f"QSVLAB_SEED must be an integer, got {env!r}") from exc
    return _setting(args, config, "seed", env_default, int)


def build_target(spec: str, dim: int, seed: int) -> TargetState:
    """Build the target state named by a spec string.

    ``pure-random`` draws a seeded Haar-random pure state, ``basis:k`` a
    computational basis state, and ``mixed:w1,w2,...`` a diagonal mixed
    state with the given spectrum on the first basis vectors.
    """
    if spec == "pure-random":
        rng = np.random.default_rng([seed, 101])
        return TargetState.from_pure(haar_random_pure(dim, rng))
    if spec.startswith("basis:"):
        index = int(spec.split(":", 1)[1])
        if not 0 <= index < dim:
            raise UsageError(f"basis index {index} outside dimension {dim}")
        return TargetState.from_pure(PureState.basis_state(dim, index))
    if spec.startswith("mixed:"):
        weights = [float(w) for w in spec.split(":", 1)[1].split(",") if w]
        if len(weights) > dim:
            raise UsageError(f"spectrum has {len(weights)} entries but dimension is {dim}")
        if any(w <= 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-9:
            raise UsageError("spectrum entries must be positive and sum to 1")
        vectors = [PureState.basis_state(dim, i) for i in range(len(weights))]
        return TargetState.from_spectrum(weights, vectors)
    raise UsageError(f"unknown target spec {spec!r}")


def _attack_recipe(name, protocol, target, n, alpha, ell):
    if name == "honest":
        return HonestSource(), None
    if name == "naive":
        return naive_attack(protocol, ell), None
    if name == "iid-standalone":
        recipe = iid_standalone_attack(target, n, alpha if alpha is not None else 4.0 / 9.0)
        return recipe, recipe.params["alpha"]
    if name == "iid-composable":
        recipe = iid_composable_attack(target, n, alpha if alpha is not None else 0.5)
        return recipe, recipe.params["alpha"]
    raise UsageError(f"unknown attack {name!r}; choose from {', '.join(ATTACK_NAMES)}")


def _row_bounds(attack: str, definition: str, n: float, eta1: float) -> tuple[float, float]:
    # The naive attack carries its exact canonical value: past 16 rounds it
    # legitimately undercuts the i.i.d. composable floor, which would make
    # a definitional bound column unsatisfiable.
    if attack == "naive":
        exact = 1.0 / (n + 1.0)
        return exact, exact
    if attack == "honest":
        return 0.0, 0.0
    if definition == "standalone":
        return standalone_bound(n)
    value = composable_bound(n, eta1)
    return value, value


def _evaluate_row(target, n, attack_name, alpha, ell, definition) -> ReportRow:
    start = time.perf_counter()
    protocol = canonical_protocol(target, n)
    attack, used_alpha = _attack_recipe(attack_name, protocol, target, n, alpha, ell)
    if definition == "standalone":
        report = evaluate_standalone(protocol, attack)
    else:
        report = evaluate_composable(protocol, attack)
    loose, tight = _row_bounds(attack_name, definition, n, target.top_eigenvalue)
    eps_sum = report.eps_h + report.eps_d
    return ReportRow(
        n=float(n),
        eps_h=report.eps_h,
        eps_d=report.eps_d,
        eps_sum=eps_sum,
        bound_loose=loose,
        bound_tight=tight,
        slack=eps_sum - tight,
        attack=attack_name,
        alpha=used_alpha,
        definition=definition,
        wall_time=time.perf_counter() - start,
    )


def write_rows(rows, out: str | None, fmt: str):
    if out is None:
        return
    path = Path(out)
    if fmt == "csv":
        lines = [CSV_VERSION_LINE, CSV_HEADER]
        lines.extend(row.csv_line() for row in rows)
        path.write_text("\n".join(lines) + "\n")
    else:
        payload = [row.as_dict() for row in rows]
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _print_rows(rows):
    print(f"{'N':>8}  {'eps_h':>12}  {'eps_d':>12}  {'eps_sum':>12}  {'bound':>12}  {'slack':>12}  attack/definition")
    for row in rows:
        n = f"{row.n:g}"
        print(
            f"{n:>8}  {row.eps_h:12.6e}  {row.eps_d:12.6e}  {row.eps_sum:12.6e}  "
            f"{row.bound_tight:12.6e}  {row.slack:12.6e}  {row.attack}/{row.definition}"
        )


def _definitions(value: str) -> list[str]:
    if value == "both":
        return ["standalone", "composable"]
    if value in ("standalone", "composable"):
        return [value]
    raise UsageError(f"unknown definition {value!r}")


def cmd_verify(args, config) -> int:
    seed = _resolve_seed(args, config)
    oracle_config = OracleConfig(
        seed=seed,
        sample_count=_setting(args, config, "samples", 200, int),
        grid_points=_setting(args, config, "grid_points", 10_000, int),
        tolerance=_setting(args, config, "tolerance", 1e-9, float),
        grid_tolerance=_setting(args, config, "grid_tolerance", 1e-6, float),
    )
    names = args.check or (
        [c.strip() for c in config["checks"].split(",")] if "checks" in config else None
    )
    known = set(available_checks())
    if names:
        unknown = [n for n in names if n not in known]
        if unknown:
            raise UsageError(f"unknown check name(s): {', '.join(unknown)}")
    results = run_checks(oracle_config, names)
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"[{status}] {res.check_name}: worst violation {res.worst_violation:.3e} (tol {res.tolerance:g})")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed (seed {seed})")
    if args.out:
        payload = {
            "schema": "qsvlab-checks-v1",
            "seed": seed,
            "results": [
                {
                    "check_name": r.check_name,
                    "passed": r.passed,
                    "worst_violation": r.worst_violation,
                    "witness": r.witness,
                    "tolerance": r.tolerance,
                }
                for r in results
            ],
        }
        Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0 if not failed else 1


def _n_values(args, config) -> list[int]:
    n_min = _setting(args, config, "n_min", 1, int)
    n_max = _setting(args, config, "n_max", 32, int)
    if not 1 <= n_min <= n_max:
        raise UsageError(f"need 1 <= n-min <= n-max, got ({n_min}, {n_max})")
    return list(range(n_min, n_max + 1))


def _sweep(jobs, worker, items):
    if jobs == 1:
        return [worker(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, items))


def cmd_tradeoff(args, config) -> int:
    seed = _resolve_seed(args, config)
    dim = _setting(args, config, "dim", 2, int)
    target = build_target(_setting(args, config, "target", "pure-random", str), dim, seed)
    attack = _setting(args, config, "attack", "iid-composable", str)
    if attack not in ATTACK_NAMES:
        raise UsageError(f"unknown attack {attack!r}; choose from {', '.join(ATTACK_NAMES)}")
    alpha = _setting(args, config, "alpha", None, float)
    ell = _setting(args, config, "ell", None, int)
    definitions = _definitions(_setting(args, config, "definition", "both", str))
    jobs = _setting(args, config, "jobs", os.cpu_count() or 1, int)
    points = [(n, d) for n in _n_values(args, config) for d in definitions]
    rows = _sweep(jobs, lambda nd: _evaluate_row(target, nd[0], attack, alpha, ell, nd[1]), points)
    rows.sort(key=lambda r: (r.n, r.definition))
    _print_rows(rows)
    write_rows(rows, args.out, _setting(args, config, "format", "csv", str))
    return 0


def cmd_crossover(args, config) -> int:
    seed = _resolve_seed(args, config)
    dim = _setting(args, config, "dim", 2, int)
    target = build_target(_setting(args, config, "target", "pure-random", str), dim, seed)
    n_values = _n_values(args, config)
    jobs = _setting(args, config, "jobs", os.cpu_count() or 1, int)
    scan = _sweep(jobs, lambda n: crossover_scan([n], target)[0], n_values)
    scan.sort(key=lambda r: r.n_verify)
    print(f"{'N':>6}  {'naive sum':>12}  {'iid sum':>12}  iid exceeds")
    rows = []
    for entry in scan:
        print(
            f"{entry.n_verify:>6}  {entry.naive_sum:12.6e}  {entry.iid_sum:12.6e}  "
            f"{'YES' if entry.iid_exceeds else 'no'}"
        )
        for attack_name, eps_sum in (("naive", entry.naive_sum), ("iid-composable", entry.iid_sum)):
            loose, tight = _row_bounds(attack_name, "composable", entry.n_verify, target.top_eigenvalue)
            rows.append(
                ReportRow(
                    n=float(entry.n_verify),
                    eps_h=0.0,
                    eps_d=eps_sum,
                    eps_sum=eps_sum,
                    bound_loose=loose,
                    bound_tight=tight,
                    slack=eps_sum - tight,
                    attack=attack_name,
                    alpha=0.5 if attack_name == "iid-composable" else None,
                    definition="composable",
                    wall_time=0.0,
                )
            )
    write_rows(rows, args.out, _setting(args, config, "format", "csv", str))
    return 0


def _round_distribution(family: str, expected: float, args, config):
    if family == "point-mass":
        n = int(round(expected))
        dist = np.zeros(n + 1)
        dist[n] = 1.0
        return dist, 0.0
    if family == "truncated-geometric":
        q = _setting(args, config, "q", 1.0 / (expected + 1.0), float)
        n_cap = _setting(args, config, "n_cap", max(8, int(math.ceil(12 * expected))), int)
        return truncated_geometric_rounds(q, n_cap)
    if family == "uniform":
        width = min(5, int(expected) - 1) if expected > 1 else 0
        lo = _setting(args, config, "lo", int(expected) - width, int)
        hi = _setting(args, config, "hi", int(expected) + width, int)
        return uniform_rounds(lo, hi), 0.0
    raise UsageError(f"unknown round distribution {family!r}")


def cmd_variable_round(args, config) -> int:
    seed = _resolve_seed(args, config)
    dim = _setting(args, config, "dim", 2, int)
    target = build_target(_setting(args, config, "target", "pure-random", str), dim, seed)
    family = _setting(args, config, "round_dist", "truncated-geometric", str)
    expected_raw = _setting(args, config, "expected", "5,10,20", str)
    expected_values = [float(x) for x in str(expected_raw).split(",") if x]
    alpha = _setting(args, config, "alpha", None, float)
    definitions = _definitions(_setting(args, config, "definition", "both", str))
    rows = []
    for expected in expected_values:
        dist, lost = _round_distribution(family, expected, args, config)
        protocol = canonical_variable_protocol(target, dist, lost)
        realized = protocol.expected_rounds
        loose, tight_composable = variable_round_bounds(realized, target.top_eigenvalue)
        for definition in definitions:
            start = time.perf_counter()
            if definition == "standalone":
                recipe = iid_standalone_attack(target, realized, alpha if alpha is not None else 4.0 / 9.0)
                report = evaluate_standalone(protocol, recipe)
                bounds_pair = (loose, loose)
            else:
                recipe = iid_composable_attack(target, realized, alpha if alpha is not None else 0.5)
                report = evaluate_composable(protocol, recipe)
                bounds_pair = (tight_composable, tight_composable)
            rows.append(
                ReportRow(
                    n=realized,
                    eps_h=report.eps_h,
                    eps_d=report.eps_d,
                    eps_sum=report.eps_sum,
                    bound_loose=bounds_pair[0],
                    bound_tight=bounds_pair[1],
                    slack=report.eps_sum - bounds_pair[1],
                    attack=recipe.kind,
                    alpha=recipe.params["alpha"],
                    definition=definition,
                    wall_time=time.perf_counter() - start,
                )
            )
        if lost > 0:
            print(f"# expected {expected:g}: realized E[n] = {realized!r}, truncated mass {lost:.3e}")
    rows.sort(key=lambda r: (r.n, r.definition))
    _print_rows(rows)
    write_rows(rows, args.out, _setting(args, config, "format", "csv", str))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsvlab",
        description="Cut-and-choose quantum state verification: experiments, attacks, and checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key = value config file; flags win")
        p.add_argument("--seed", type=int, help="random seed (env QSVLAB_SEED overrides the default)")
        p.add_argument("--out", help="artifact path (CSV or JSON)")
        p.add_argument("--format", choices=["csv", "json"], help="artifact format (default csv)")
        p.add_argument("--jobs", type=int, help="worker threads for sweeps")
        p.add_argument("--n-min", type=int, help="smallest verification-round count")
        p.add_argument("--n-max", type=int, help="largest verification-round count")
        p.add_argument("--alpha", type=float, help="attack tuning parameter override")
        p.add_argument("--definition", choices=["standalone", "composable", "both"])
        p.add_argument("--dim", type=int, help="target dimension")
        p.add_argument("--target", help="pure-random | basis:K | mixed:W1,W2,...")

    verify = sub.add_parser("verify", help="run the oracle battery")
    common(verify)
    verify.add_argument("--check", action="append", help="run only this check (repeatable)")
    verify.add_argument("--tolerance", type=float, help="algebraic tolerance")
    verify.add_argument("--grid-points", dest="grid_points", type=int)
    verify.add_argument("--samples", type=int, help="sample count per sweep")
    verify.set_defaults(func=cmd_verify)

    tradeoff = sub.add_parser("tradeoff", help="error sums vs round count for one attack")
    common(tradeoff)
    tradeoff.add_argument("--attack", choices=list(ATTACK_NAMES))
    tradeoff.add_argument("--ell", type=int, help="naive-attack output round override")
    tradeoff.set_defaults(func=cmd_tradeoff)

    crossover = sub.add_parser("crossover", help="naive vs i.i.d. composable error sums")
    common(crossover)
    crossover.set_defaults(func=cmd_crossover)

    variable = sub.add_parser("variable-round", help="probabilistic round-count experiments")
    common(variable)
    variable.add_argument(
        "--round-dist",
        dest="round_dist",
        choices=["point-mass", "truncated-geometric", "uniform"],
    )
    variable.add_argument("--expected", help="comma list of expected round counts")
    variable.add_argument("--q", type=float, help="geometric parameter override")
    variable.add_argument("--n-cap", dest="n_cap", type=int, help="round-count truncation")
    variable.add_argument("--lo", type=int, help="uniform family lower end")
    variable.add_argument("--hi", type=int, help="uniform family upper end")
    variable.set_defaults(func=cmd_variable_round)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config) if args.config else {}
        return args.func(args, config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
