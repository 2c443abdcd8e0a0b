"""Benchmark command line: `dyngraph <task> --train P --dev P [--gen] ...`."""

from __future__ import annotations

import argparse
import math
import sys
import time

from ..errors import ConfigError, DyncoreError
from .gen import generate
from .tasks import RUNNERS, TASKS, TaskConfig

_GEN_VOCAB_KEY = {
    "rnnlm": "vocab",
    "pairclass": "vocab",
    "treelstm": "vocab",
    "tagger": "stems",
    "tagger-char": "stems",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyngraph",
        description="Train and evaluate the benchmark tasks on a per-example dynamic graph engine.",
    )
    sub = parser.add_subparsers(dest="task", required=True)
    for task in TASKS:
        p = sub.add_parser(task, help=f"run the {task} task")
        p.add_argument("--train", required=True, help="training data path")
        p.add_argument("--dev", required=True, help="dev data path")
        p.add_argument("--gen", action="store_true", help="synthesize train/dev files first (uses --seed)")
        p.add_argument("--gen-sentences", type=int, default=None, help="synthetic corpus size")
        p.add_argument("--gen-vocab", type=int, default=None, help="synthetic vocabulary size")
        p.add_argument("--epochs", type=int, default=5)
        p.add_argument("--batch-size", type=int, default=1)
        p.add_argument("--trainer", choices=("sgd", "momentum", "adagrad", "adam"), default="adam")
        p.add_argument("--lr", type=float, default=None, help="default depends on the trainer")
        p.add_argument("--sparse", choices=("on", "off"), default=None, help="sparse lookup updates (default on)")
        p.add_argument("--workers", type=int, default=1, help="training contexts; 1 = serial path")
        p.add_argument("--mem", default="128", help="pool MiB: total, or fwd,bwd,param")
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--save", default=None, help="write model parameters after training")
        p.add_argument("--load", default=None, help="load model parameters before training")
        p.add_argument("--threshold", type=float, default=None, help="earlystop decision threshold")
        p.add_argument("--unk-threshold", type=int, default=1, help="tokens below this frequency become UNK")
        p.add_argument("--init-zero", action="store_true", help="zero initialization (analytic checks)")
    return parser


def main(argv=None) -> int:
    t0 = time.perf_counter()
    args = build_parser().parse_args(argv)
    try:
        if args.gen:
            sizes = {}
            if args.gen_sentences is not None:
                sizes["sentences"] = args.gen_sentences
            if args.gen_vocab is not None and args.task in _GEN_VOCAB_KEY:
                sizes[_GEN_VOCAB_KEY[args.task]] = args.gen_vocab
            generate(args.task, args.seed, args.train, args.dev, **sizes)

        sparse = args.sparse != "off"
        if args.workers > 1:
            if args.sparse == "on":
                raise ConfigError("sparse updates are undefined across workers; use --sparse off")
            if args.sparse is None and sparse:
                print("note: sparse updates disabled under --workers > 1", file=sys.stderr)
            sparse = False

        cfg = TaskConfig.for_task(
            args.task,
            args.train,
            args.dev,
            epochs=args.epochs,
            batch_size=args.batch_size,
            trainer=args.trainer,
            lr=args.lr,
            sparse=sparse,
            workers=args.workers,
            mem=args.mem,
            seed=args.seed,
            save=args.save,
            load=args.load,
            threshold=math.inf if args.threshold is None else args.threshold,
            unk_threshold=args.unk_threshold,
            init_zero=args.init_zero,
            t0=t0,
        )
        RUNNERS[args.task](cfg, out=sys.stdout)
        return 0
    except (DyncoreError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
