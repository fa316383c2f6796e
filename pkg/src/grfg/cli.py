"""Command line: ``grfg run`` reconstructs a feature space, ``grfg eval``
re-scores a saved provenance file."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, load_config
from .data import DataError, load_csv
from .engine import evaluate_features, features_from_names, run_grfg, run_rdg, write_checkpoint
from .expr import ExprSyntaxError, UnknownColumnError, read_provenance, write_provenance

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _common(p):
    p.add_argument("--data", required=True, help="CSV file with a header row")
    p.add_argument("--target", required=True, help="name of the target column")
    p.add_argument("--task", required=True, choices=["classification", "regression"])
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="grfg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    run = sub.add_parser("run", help="reconstruct the feature space")
    _common(run)
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--policy", choices=["grfg", "rdg"], default="grfg")
    ev = sub.add_parser("eval", help="re-evaluate a provenance file")
    _common(ev)
    ev.add_argument("--provenance", required=True)
    return parser


def write_features_csv(path, table, names, target_name: str) -> None:
    feats = features_from_names(table, names)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f.name for f in feats] + [target_name])
        cols = np.column_stack([f.values for f in feats] + [table.y])
        for row in cols:
            w.writerow([f"{v:.17g}" for v in row])


def cmd_run(args) -> int:
    cfg = load_config(args.config, seed=args.seed)
    table = load_csv(args.data, args.target, args.task)
    report = run_grfg(table, cfg) if args.policy == "grfg" else run_rdg(table, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json(), encoding="utf-8")
    write_features_csv(out / "features.csv", table, report.best_features, args.target)
    write_provenance(out / "provenance.tsv", [f.expr for f in features_from_names(table, report.best_features)])
    if args.policy == "grfg":
        write_checkpoint(out / "checkpoint.bin", report)
    print(json.dumps({"best_score": report.best_score, "out": str(out)}))
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = load_config(args.config, seed=args.seed)
    table = load_csv(args.data, args.target, args.task)
    rows = read_provenance(args.provenance)
    names = [expr for _, expr in rows]
    score = evaluate_features(table, names, cfg)
    print(json.dumps({"score": score, "n_features": len(names) or table.original_arity}))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = cmd_run if args.command == "run" else cmd_eval
    try:
        return handler(args)
    except (ConfigError, DataError, ExprSyntaxError, UnknownColumnError, OSError, ValueError) as exc:
        print(f"grfg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"grfg: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
