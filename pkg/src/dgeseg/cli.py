"""Command-line front end: ``dgeseg segment | synth | eval | eval-clusters``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import io
from .boundary import segment_embedding
from .core import Hyperparams
from .dge import run_dge
from .metrics import clustering_accuracy, nmi, prf_report
from .synth import SynthConfig, gen_markov_gaussian

log = logging.getLogger("dgeseg")

# flag name -> (Hyperparams field, type)
_PARAM_FLAGS = {
    "M": ("M", int), "L": ("L", int), "h": ("h", float), "lhat": ("lhat", float),
    "ltilde": ("ltilde", float), "d": ("d", int), "K": ("K", int), "alpha": ("alpha", float),
    "p": ("p", int), "eta": ("eta", float), "mu": ("mu", float), "nc": ("n_clusters", int),
    "gd-iters": ("gd_iters", int), "window": ("window", int), "z": ("z", float),
    "min-sep": ("min_sep", int), "seed": ("seed", int),
}


def _tolerances(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _set_threads(n: int | None) -> None:
    # the loss kernel is single-threaded; only BLAS/LAPACK pools need a cap
    if n is None:
        return
    from threadpoolctl import threadpool_limits

    threadpool_limits(n)


def _params_from_args(args) -> Hyperparams:
    values = {}
    for flag, (name, _) in _PARAM_FLAGS.items():
        v = getattr(args, flag.replace("-", "_"))
        if v is not None:
            values[name] = v
    return Hyperparams(**values)


def _prf_rows(report) -> list[dict]:
    return [
        {"tau": r.tolerance, "precision": r.precision, "recall": r.recall, "f_score": r.f_score,
         "matched": r.matched}
        for r in report
    ]


def cmd_segment(args) -> int:
    params = _params_from_args(args)
    timings = {}
    t0 = time.perf_counter()
    X = io.load_features(args.features, args.format)
    timings["load"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    Y, G, history = run_dge(X, params, preprocess=not args.no_preprocess, init=args.init)
    timings["dge"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    boundaries = segment_embedding(Y, params)
    timings["detect"] = time.perf_counter() - t0
    io.save_boundaries(boundaries, args.out_boundaries)

    gt = io.load_boundaries(args.gt) if args.gt else None
    if args.diagnostics:
        iterations = []
        for state in history:
            entry = {"i": state.i, "loss": state.loss_history}
            if gt is not None:
                entry["prf"] = _prf_rows(prf_report(segment_embedding(state.embedding, params), gt,
                                                    args.tolerances))
            iterations.append(entry)
        diag = {
            "hyperparams": params.to_dict(),
            "ltilde_value": params.ltilde_value,
            "n_frames": int(X.shape[0]),
            "n_features": int(X.shape[1]),
            "preprocess": not args.no_preprocess,
            "init": args.init,
            "boundaries": [int(b) for b in boundaries],
            "iterations": iterations,
        }
        if gt is not None:
            diag["final_prf"] = _prf_rows(prf_report(boundaries, gt, args.tolerances))
        if args.timings:
            diag["timings"] = timings
        with open(args.diagnostics, "w") as fh:
            json.dump(diag, fh, indent=1, sort_keys=True)
            fh.write("\n")
    if args.heatmap:
        io.dump_graph_heatmap(G, args.heatmap, args.heatmap_threshold)
    print(f"{len(boundaries)} boundaries written to {args.out_boundaries}")
    return 0


def cmd_synth(args) -> int:
    config = SynthConfig(N=args.n, sigma=args.sigma, hazard=args.hazard, seed=args.seed)
    X, labels, boundaries = gen_markov_gaussian(config)
    if args.out_features.endswith(".csv"):
        io.write_features_csv(X, args.out_features)
    else:
        io.write_features_binary(X, args.out_features)
    io.save_boundaries(boundaries, args.out_gt)
    if args.out_labels:
        io.save_labels(labels, args.out_labels)
    print(f"{config.N} frames, {len(boundaries)} boundaries")
    return 0


def format_prf_table(report) -> str:
    lines = ["tau  precision  recall  f_score"]
    lines += [f"{r.tolerance:>3}  {r.precision:9.4f}  {r.recall:6.4f}  {r.f_score:7.4f}" for r in report]
    return "\n".join(lines)


def cmd_eval(args) -> int:
    pred = io.load_boundaries(args.pred)
    gt = io.load_boundaries(args.gt)
    print(format_prf_table(prf_report(pred, gt, args.tolerances)))
    return 0


def cmd_eval_clusters(args) -> int:
    pred = io.load_labels(args.pred)
    gt = io.load_labels(args.gt)
    print(f"ACC {clustering_accuracy(pred, gt):.4f}")
    print(f"NMI {nmi(pred, gt):.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dgeseg", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    seg = sub.add_parser("segment", help="learn a representation and detect event boundaries")
    seg.add_argument("--features", required=True)
    seg.add_argument("--format", choices=["csv", "binary"], default=None)
    seg.add_argument("--out-boundaries", required=True)
    seg.add_argument("--gt")
    seg.add_argument("--diagnostics")
    seg.add_argument("--timings", action="store_true", help="add wall-clock timings to diagnostics")
    seg.add_argument("--heatmap")
    seg.add_argument("--heatmap-threshold", type=float, default=0.7)
    seg.add_argument("--tolerances", type=_tolerances, default=[1, 2, 3, 4, 5])
    seg.add_argument("--no-preprocess", action="store_true",
                     help="skip normalization and non-local means")
    seg.add_argument("--init", choices=["fit", "pca", "raw"], default="fit")
    seg.add_argument("--threads", type=int, default=None)
    for flag, (_, typ) in _PARAM_FLAGS.items():
        seg.add_argument(f"--{flag}", type=typ, default=None)
    seg.set_defaults(func=cmd_segment)

    syn = sub.add_parser("synth", help="generate a Markov-switching Gaussian sequence")
    syn.add_argument("--out-features", required=True)
    syn.add_argument("--out-gt", required=True)
    syn.add_argument("--out-labels")
    syn.add_argument("--n", type=int, default=350)
    syn.add_argument("--sigma", type=float, default=3.7)
    syn.add_argument("--lambda", dest="hazard", type=float, default=SynthConfig.hazard)
    syn.add_argument("--seed", type=int, default=0)
    syn.set_defaults(func=cmd_synth)

    ev = sub.add_parser("eval", help="precision/recall/F-score of boundaries")
    ev.add_argument("--pred", required=True)
    ev.add_argument("--gt", required=True)
    ev.add_argument("--tolerances", type=_tolerances, default=[1, 2, 3, 4, 5])
    ev.set_defaults(func=cmd_eval)

    evc = sub.add_parser("eval-clusters", help="clustering accuracy and NMI")
    evc.add_argument("--pred", required=True)
    evc.add_argument("--gt", required=True)
    evc.set_defaults(func=cmd_eval_clusters)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "segment":
        _set_threads(args.threads)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
