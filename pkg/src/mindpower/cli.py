"""Command-line entry points.

Subcommands:

* ``validate``     check a dataset file and report what it contains
* ``toy-dataset``  write the bundled ten-example dataset (plus optional
                   self-scoring output files)
* ``evaluate``     score a JSONL outputs file against a dataset and write
                   TSV + JSON reports
* ``reward``       run the streaming reward service on stdio or TCP

Exit codes: 0 on success, 2 on any validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import load_config
from .dataset import (
    ModelOutput,
    load_dataset,
    load_outputs,
    make_toy_dataset,
    write_dataset,
    write_outputs,
)
from .errors import MindPowerError, UnknownExampleError
from .extract import make_extractor
from .judge import judge_from_env
from .metrics import TokenOverlapSimilarity, aggregate
from .pipeline import evaluate_output
from .service import RewardService, TcpRewardServer, serve_stdio


def _cmd_validate(args: argparse.Namespace) -> int:
    examples = load_dataset(args.dataset)
    by_task: dict[str, int] = {}
    for example in examples:
        by_task[example.task.value] = by_task.get(example.task.value, 0) + 1
    print(f"{args.dataset}: {len(examples)} examples valid")
    for task, count in sorted(by_task.items()):
        print(f"  {task}: {count}")
    return 0


def _cmd_toy_dataset(args: argparse.Namespace) -> int:
    examples = make_toy_dataset()
    write_dataset(examples, args.out)
    print(f"wrote {len(examples)} examples to {args.out}")
    if args.self_outputs:
        outputs = [
            ModelOutput(example_id=e.id, raw=e.reference_trace_text())
            for e in examples
        ]
        write_outputs(outputs, args.self_outputs)
        print(f"wrote evaluation self-outputs to {args.self_outputs}")
    if args.reward_outputs:
        outputs = [
            ModelOutput(example_id=e.id, raw=e.atoms_trace_text()) for e in examples
        ]
        write_outputs(outputs, args.reward_outputs)
        print(f"wrote reward self-outputs to {args.reward_outputs}")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    examples = {e.id: e for e in load_dataset(args.dataset)}
    outputs = load_outputs(args.outputs)
    extractor = make_extractor(cfg.extractor, cfg.aliases)
    judge = judge_from_env()
    similarity = TokenOverlapSimilarity()

    rows = []
    for output in outputs:
        example = examples.get(output.example_id)
        if example is None:
            raise UnknownExampleError(output.example_id)
        rows.append(
            evaluate_output(
                example,
                output.raw,
                cfg,
                extractor,
                similarity_b=similarity,
                similarity_s=similarity,
                judge=judge,
            )
        )

    report = aggregate(rows)
    tsv_path = Path(f"{args.report}.tsv")
    json_path = Path(f"{args.report}.json")
    tsv_path.write_text(report.to_tsv(), encoding="utf-8")
    json_path.write_text(
        json.dumps(report.to_json_obj(), sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    print(f"scored {len(rows)} outputs; report at {tsv_path} and {json_path}")
    for column in report.columns:
        if report.means:
            print(f"  {column}: {report.means[column]:.2f}")
    return 0


def _cmd_reward(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    examples = load_dataset(args.dataset)
    extractor = make_extractor(cfg.extractor, cfg.aliases)
    service = RewardService.from_dataset(examples, cfg, extractor)
    if args.transport == "stdio":
        serve_stdio(service)
        return 0
    with TcpRewardServer((args.host, args.port), service) as server:
        host, port = server.server_address[:2]
        # announce the bound port (may differ from --port 0) before serving
        print(f"serving on {host}:{port}", file=sys.stderr, flush=True)
        server.serve_forever()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mindpower",
        description="Score six-layer reasoning traces: rewards, advantages, "
        "and benchmark metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a dataset file")
    p.add_argument("--dataset", required=True)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("toy-dataset", help="write the bundled toy dataset")
    p.add_argument("--out", default="toy_dataset.jsonl")
    p.add_argument("--self-outputs", default=None,
                   help="also write outputs that evaluate to a perfect score")
    p.add_argument("--reward-outputs", default=None,
                   help="also write outputs that earn the maximum reward")
    p.set_defaults(func=_cmd_toy_dataset)

    p = sub.add_parser("evaluate", help="score model outputs against a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--outputs", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--report", default="report",
                   help="report path prefix (writes PREFIX.tsv and PREFIX.json)")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("reward", help="run the streaming reward service")
    p.add_argument("--dataset", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--transport", choices=("stdio", "tcp"), default="stdio")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=0)
    p.set_defaults(func=_cmd_reward)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MindPowerError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
