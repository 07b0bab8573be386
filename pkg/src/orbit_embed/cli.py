"""Batch front end: configs, signal I/O, verification runs, golden fixtures.

One run is one process. All randomness flows through the config's master
seed, so identical configs produce byte-identical reports (the run summary
carries the only timestamp). Exit codes: 0 success, 1 a verification suite
failed, 2 usage or config error, 3 malformed input data.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import analysis, oracles
from .action import make_cyclic_action, make_translation_action
from .embed import Pipeline, embed, make_pipeline, operator_norm
from .errors import DataError, OrbitEmbedError
from .invariants import separating_set_to_json

SUITE_ORDER = ("invariance", "separation", "lipschitz", "nonparallel",
               "sup_norm", "sweep", "prime")

DEFAULT_SUITE_PARAMS = {
    "invariance": {"samples": 1000},
    "separation": {"samples": 1000, "delta": 0.1},
    "lipschitz": {"samples": 10000},
    "nonparallel": {"samples": 1000, "delta": 0.1},
    "sup_norm": {"samples": 10000},
    "sweep": {"epsilons": [1e-1, 3e-2, 1e-2, 3e-3, 1e-3], "witness": None},
    "prime": {"p": 5, "samples": 200},
}

# Suites run by `verify` when the config does not select any.
DEFAULT_SUITES = ("invariance", "separation", "lipschitz", "nonparallel", "sup_norm")

BUILTIN_FIXTURES = {
    "minus_identity_c2": {"action": {"m": 2, "weights": [1, 1]},
                          "reducer": {"kind": "identity", "seed": 0}},
    "z12_c5": {"action": {"m": 12, "weights": [6, 3, 4, 2, 2]},
               "reducer": {"kind": "gaussian", "seed": 42}},
    "translation_c8": {"action": {"form": "translation", "n": 8},
                       "reducer": {"kind": "gaussian", "seed": 42}},
}


class ConfigError(OrbitEmbedError):
    """The run configuration is malformed; the message names the field."""


@dataclass(frozen=True)
class RunConfig:
    action: dict
    target_dim: int | str
    reducer_kind: str
    reducer_seed: int
    suites: dict
    seed: int
    out: str
    signals: dict | None = None

    def to_dict(self) -> dict:
        doc = {
            "action": dict(self.action),
            "target_dim": self.target_dim,
            "reducer": {"kind": self.reducer_kind, "seed": self.reducer_seed},
            "suites": {name: dict(params) for name, params in self.suites.items()},
            "seed": self.seed,
            "out": self.out,
        }
        if self.signals is not None:
            doc["signals"] = dict(self.signals)
        return doc


def _expect(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise ConfigError(f"config field {path!r}: {message}")


def config_from_dict(doc: dict) -> RunConfig:
    """Validate and normalize a raw config document."""
    _expect(isinstance(doc, dict), "<root>", "must be a JSON object")
    known = {"action", "target_dim", "reducer", "suites", "seed", "out", "signals"}
    for key in doc:
        _expect(key in known, key, f"unknown key (valid: {sorted(known)})")

    raw_action = doc.get("action")
    _expect(isinstance(raw_action, dict), "action", "must be an object")
    if raw_action.get("form") == "translation":
        n = raw_action.get("n")
        _expect(isinstance(n, int) and n >= 1, "action.n", "must be a positive integer")
        action = {"form": "translation", "n": n}
    else:
        m = raw_action.get("m")
        _expect(isinstance(m, int) and m >= 1, "action.m", "must be a positive integer")
        weights = raw_action.get("weights")
        _expect(isinstance(weights, list) and weights
                and all(isinstance(w, int) for w in weights),
                "action.weights", "must be a nonempty list of integers")
        action = {"m": m, "weights": list(weights)}

    target_dim = doc.get("target_dim", "auto")
    _expect(target_dim == "auto" or (isinstance(target_dim, int) and target_dim >= 1),
            "target_dim", 'must be "auto" or a positive integer')

    reducer = doc.get("reducer", {})
    _expect(isinstance(reducer, dict), "reducer", "must be an object")
    kind = reducer.get("kind", "auto")
    _expect(kind in ("auto", "gaussian", "identity"), "reducer.kind",
            'must be one of "auto", "gaussian", "identity"')
    reducer_seed = reducer.get("seed", 0)
    _expect(isinstance(reducer_seed, int) and reducer_seed >= 0,
            "reducer.seed", "must be a nonnegative integer")

    raw_suites = doc.get("suites", {name: {} for name in DEFAULT_SUITES})
    _expect(isinstance(raw_suites, dict), "suites", "must be an object")
    suites = {}
    for name in raw_suites:
        _expect(name in SUITE_ORDER, f"suites.{name}",
                f"unknown suite (valid: {list(SUITE_ORDER)})")
    for name in SUITE_ORDER:
        if name not in raw_suites:
            continue
        params = raw_suites[name]
        _expect(isinstance(params, dict), f"suites.{name}", "must be an object")
        merged = dict(DEFAULT_SUITE_PARAMS[name])
        for key, value in params.items():
            _expect(key in merged, f"suites.{name}.{key}",
                    f"unknown parameter (valid: {sorted(merged)})")
            merged[key] = value
        suites[name] = merged

    seed = doc.get("seed", 0)
    _expect(isinstance(seed, int) and seed >= 0, "seed", "must be a nonnegative integer")
    out = doc.get("out", "reports")
    _expect(isinstance(out, str) and out, "out", "must be a nonempty string")

    signals = doc.get("signals")
    if signals is not None:
        _expect(isinstance(signals, dict), "signals", "must be an object")
        _expect(isinstance(signals.get("path"), str), "signals.path", "must be a string")
        fmt = signals.get("format", "json")
        _expect(fmt in ("json", "csv"), "signals.format", 'must be "json" or "csv"')
        signals = {"path": signals["path"], "format": fmt}

    return RunConfig(action=action, target_dim=target_dim, reducer_kind=kind,
                     reducer_seed=reducer_seed, suites=suites, seed=seed,
                     out=out, signals=signals)


def load_config(path: str) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config {path!r} is not valid JSON: line {exc.lineno} "
            f"column {exc.colno}: {exc.msg}") from exc
    return config_from_dict(doc)


def build_pipeline(config: RunConfig) -> Pipeline:
    if config.action.get("form") == "translation":
        action = make_translation_action(config.action["n"])
    else:
        action = make_cyclic_action(config.action["m"], config.action["weights"])
    kind = None if config.reducer_kind == "auto" else config.reducer_kind
    return make_pipeline(action, seed=config.reducer_seed,
                         target_dim=config.target_dim, reducer_kind=kind)


# --- signal I/O ----------------------------------------------------------------

def load_signals(path: str, fmt: str = "json") -> list[np.ndarray]:
    """Read complex signals from a JSON or CSV file.

    JSON: an array of signals, each an array of [re, im] pairs. CSV: header
    ``signal_id,index,re,im`` with rows grouped by signal id; each signal's
    indices must cover 0..len-1. Parsing is locale-independent.
    """
    if fmt not in ("json", "csv"):
        raise DataError(f"unknown signal format {fmt!r}")
    text = Path(path).read_text()
    if not text.strip():
        warnings.warn(f"signal file {path!r} is empty")
        return []
    if fmt == "json":
        signals = _signals_from_json(text, path)
    else:
        signals = _signals_from_csv(text, path)
    if not signals:
        warnings.warn(f"signal file {path!r} contains no signals")
    for idx, sig in enumerate(signals):
        if not np.all(np.isfinite(sig.real)) or not np.all(np.isfinite(sig.imag)):
            raise DataError(f"signal {idx} contains non-finite values")
    return signals


def _signals_from_json(text: str, path: str) -> list[np.ndarray]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, list):
        raise DataError(f"{path}: top level must be an array of signals")
    signals = []
    for idx, row in enumerate(doc):
        if not isinstance(row, list) or not all(
                isinstance(pair, list) and len(pair) == 2 for pair in row):
            raise DataError(f"{path}: signal {idx} must be an array of [re, im] pairs")
        signals.append(np.array([complex(re, im) for re, im in row],
                                dtype=np.complex128))
    return signals


def _signals_from_csv(text: str, path: str) -> list[np.ndarray]:
    reader = csv.reader(text.splitlines())
    try:
        header = next(reader)
    except StopIteration:
        return []
    if [h.strip() for h in header] != ["signal_id", "index", "re", "im"]:
        raise DataError(f"{path}: CSV header must be signal_id,index,re,im")
    groups: dict[str, dict[int, complex]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise DataError(f"{path}: line {lineno}: expected 4 fields, got {len(row)}")
        sid = row[0]
        try:
            index = int(row[1])
            value = complex(float(row[2]), float(row[3]))
        except ValueError as exc:
            raise DataError(f"{path}: line {lineno}: {exc}") from exc
        entries = groups.setdefault(sid, {})
        if index in entries:
            raise DataError(f"{path}: signal {sid!r} repeats index {index}")
        entries[index] = value
    signals = []
    for sid, entries in groups.items():
        if sorted(entries) != list(range(len(entries))):
            raise DataError(f"{path}: signal {sid!r} has ragged indices "
                            f"(expected 0..{len(entries) - 1})")
        signals.append(np.array([entries[i] for i in range(len(entries))],
                                dtype=np.complex128))
    return signals


def save_signals(path: str, signals, fmt: str = "json") -> None:
    """Write signals in a form :func:`load_signals` reads back bit-exactly."""
    if fmt == "json":
        doc = [[[float(v.real), float(v.imag)] for v in np.asarray(sig)]
               for sig in signals]
        Path(path).write_text(json.dumps(doc, indent=2) + "\n")
    elif fmt == "csv":
        lines = ["signal_id,index,re,im"]
        for sid, sig in enumerate(signals):
            for index, v in enumerate(np.asarray(sig)):
                lines.append(f"{sid},{index},{float(v.real)!r},{float(v.imag)!r}")
        Path(path).write_text("\n".join(lines) + "\n")
    else:
        raise DataError(f"unknown signal format {fmt!r}")


def _write_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# --- subcommands ----------------------------------------------------------------

def _run_suite(name: str, config: RunConfig, pipeline: Pipeline):
    params = config.suites[name]
    seed = config.seed
    if name == "invariance":
        return analysis.check_invariance(pipeline, params["samples"], seed)
    if name == "separation":
        return analysis.separation_margin(pipeline, params["samples"],
                                          params["delta"], seed)
    if name == "lipschitz":
        return analysis.empirical_lipschitz(pipeline, params["samples"], seed)
    if name == "nonparallel":
        return analysis.nonparallel_falsification(pipeline, params["samples"],
                                                  params["delta"], seed)
    if name == "sup_norm":
        return analysis.sup_norm_check(pipeline.sset, params["samples"], seed)
    if name == "sweep":
        witness = params.get("witness")
        return analysis.lower_lipschitz_sweep(
            pipeline, params["epsilons"],
            witness=None if witness is None else tuple(witness))
    if name == "prime":
        return analysis.prime_case_report(params["p"], params["samples"], seed)
    raise ConfigError(f"config field 'suites.{name}': unknown suite")


def cmd_verify(config: RunConfig) -> int:
    pipeline = build_pipeline(config)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    results = {}
    for name in SUITE_ORDER:
        if name not in config.suites:
            continue
        result = _run_suite(name, config, pipeline)
        doc = result.to_json_dict()
        _write_json(out / f"{name}.json", doc)
        results[name] = bool(doc["pass"])
        print(f"{name}: {'pass' if doc['pass'] else 'FAIL'}")
    overall = all(results.values()) and bool(results)
    _write_json(out / "summary.json", {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "pass": overall,
        "suites": results,
        "config": config.to_dict(),
    })
    return 0 if overall else 1


def cmd_monomials(config: RunConfig, to_stdout: bool = False) -> int:
    pipeline = build_pipeline(config)
    doc = separating_set_to_json(pipeline.sset)
    if to_stdout:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "monomials.json", doc)
        print(f"wrote {out / 'monomials.json'} ({len(doc['monomials'])} monomials)")
    return 0


def cmd_embed(config: RunConfig, signals_path: str | None, fmt: str | None) -> int:
    if signals_path is None:
        if config.signals is None:
            raise ConfigError("config field 'signals': required by the embed "
                              "subcommand (or pass --signals)")
        signals_path = config.signals["path"]
        fmt = fmt or config.signals["format"]
    fmt = fmt or "json"
    signals = load_signals(signals_path, fmt)
    pipeline = build_pipeline(config)
    embedded = []
    for idx, sig in enumerate(signals):
        if sig.shape[0] != pipeline.action.n:
            raise DataError(f"signal {idx} has length {sig.shape[0]}, expected "
                            f"{pipeline.action.n}")
        embedded.append(embed(pipeline, sig))
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    target = out / f"embeddings.{fmt}"
    save_signals(str(target), embedded, fmt)
    print(f"embedded {len(embedded)} signals -> {target}")
    return 0


def cmd_sweep(config: RunConfig) -> int:
    pipeline = build_pipeline(config)
    params = config.suites.get("sweep", DEFAULT_SUITE_PARAMS["sweep"])
    witness = params.get("witness")
    result = analysis.lower_lipschitz_sweep(
        pipeline, params["epsilons"],
        witness=None if witness is None else tuple(witness))
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "sweep.json", result.to_json_dict())
    lines = ["epsilon,quotient_distance,embedding_gap,ratio"]
    for eps, d, gap, ratio in result.rows():
        lines.append(f"{eps!r},{d!r},{gap!r},{ratio!r}")
    (out / "sweep.csv").write_text("\n".join(lines) + "\n")
    print(f"sweep slope {result.slope:.4f} "
          f"({'pass' if result.passed else 'FAIL'}) -> {out / 'sweep.csv'}")
    return 0 if result.passed else 1


def golden_fixture_values(seed: int = 7) -> dict:
    """Recompute every pinned value from independent oracles.

    Operator norms come from a dense SVD (checked against power iteration),
    gradients from central finite differences, orbit facts from exhaustive
    enumeration. Separation margins are recorded per fixture for regression
    comparison; no a-priori value is asserted for them.
    """
    doc = {}
    for name, spec in BUILTIN_FIXTURES.items():
        config = config_from_dict({**spec, "seed": seed})
        pipeline = build_pipeline(config)
        svd_norm = oracles.svd_operator_norm(pipeline.reducer.entries)
        power_norm = operator_norm(pipeline.reducer)
        margin_report = analysis.separation_margin(pipeline, 1000, 0.1, seed)
        grad_err = 0.0
        for i in range(20):
            rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
            z = rng.standard_normal(pipeline.diag.n) + 1j * rng.standard_normal(pipeline.diag.n)
            z /= np.linalg.norm(z)
            grad_err = max(grad_err, oracles.gradient_discrepancy(pipeline.sset, z))
        doc[name] = {
            "target_dim": pipeline.target_dim,
            "monomial_count": pipeline.sset.size,
            "operator_norm_power_iteration": power_norm,
            "operator_norm_svd_oracle": svd_norm,
            "operator_norm_disagreement": abs(power_norm - svd_norm),
            "separation_margin": margin_report.statistic,
            "same_orbit_leakage": margin_report.extra["same_orbit_leakage"],
            "gradient_fd_max_error": grad_err,
        }
    x, y = analysis.prime_collision_pair(5)
    modulation = make_cyclic_action(5, range(5))
    doc["prime_case_p5"] = {
        "collision_map_gap": float(np.linalg.norm(
            analysis.prime_fourier_map(5, x) - analysis.prime_fourier_map(5, y))),
        "collision_orbit_distance": oracles.exhaustive_orbit_distance(modulation, x, y),
        "collision_same_orbit": oracles.same_orbit(modulation, x, y),
    }
    return doc


def cmd_fixtures(config: RunConfig) -> int:
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    doc = golden_fixture_values(seed=config.seed)
    _write_json(out / "golden.json", doc)
    print(f"wrote {out / 'golden.json'}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="orbit-embed",
        description="Complete, stable embeddings of signals modulo cyclic group actions")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
            ("monomials", "emit the separating monomial set as JSON"),
            ("embed", "read signals and write their embeddings"),
            ("verify", "run verification suites and write reports"),
            ("sweep", "run the lower-Lipschitz degeneration sweep"),
            ("fixtures", "regenerate golden fixture values via oracles")]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--seed", type=int, default=None, help="override the master seed")
        p.add_argument("--out", default=None, help="override the output directory")
        if name == "monomials":
            p.add_argument("--stdout", action="store_true",
                           help="print to stdout instead of writing a file")
        if name == "embed":
            p.add_argument("--signals", default=None, help="signal file path")
            p.add_argument("--format", default=None, choices=["json", "csv"],
                           help="signal file format")
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config)
        if args.seed is not None:
            config = replace(config, seed=args.seed)
        if args.out is not None:
            config = replace(config, out=args.out)
        if args.command == "verify":
            return cmd_verify(config)
        if args.command == "monomials":
            return cmd_monomials(config, to_stdout=args.stdout)
        if args.command == "embed":
            return cmd_embed(config, args.signals, args.format)
        if args.command == "sweep":
            return cmd_sweep(config)
        if args.command == "fixtures":
            return cmd_fixtures(config)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OrbitEmbedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
