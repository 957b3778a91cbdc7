"""Command-line front end.

Subcommands: ``gen`` (synthetic mixtures), ``cumulants``, ``ica``,
``parafac``, ``sylvester``, ``rank1``, ``tables``, ``score``.  Exit status is
0 on success, 1 on usage errors, and 2 on numerical failures, which also
print a machine-readable ``{"error": ..., "message": ...}`` object on
stderr.  All randomness is seeded via ``--seed``, so runs are reproducible
byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io as tio
from .core import SymTensor
from .cumulants import cumulant_tensor
from .jacobi import ContrastSpec, ica, stationarity_residual
from .parafac import ALSConfig, als
from .rank1 import best_rank1, omega_criteria
from .simulate import DISTRIBUTIONS, MIXINGS, ExperimentConfig, gen, score
from .sylvester import cand_binary
from .tables import (
    GENERIC_RANK,
    ORBITS,
    generic_rank,
    manifold_dim,
    orbit_representative,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="tensorbss", description=__doc__)
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    parser.add_argument("--verbose", action="store_true")
    parser.add_argument("--json-indent", type=int, default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic mixture and its manifest")
    p.add_argument("--sources", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--dist", choices=DISTRIBUTIONS, default="uniform")
    p.add_argument("--mixing", choices=MIXINGS, default="orthogonal")
    p.add_argument("--mixing-file", help="JSON matrix, required for --mixing given")
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--out", required=True, help="samples CSV path")
    p.add_argument("--manifest", required=True, help="ground-truth JSON path")

    p = sub.add_parser("cumulants", help="estimate a cumulant tensor from samples")
    p.add_argument("--order", type=int, choices=(1, 2, 3, 4), required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("ica", help="orthogonal ICA by pair sweeps")
    p.add_argument("--order", type=int, choices=(3, 4), default=4)
    p.add_argument("--alpha", type=int, choices=(1, 2), default=2)
    p.add_argument("--strategy", choices=("cyclic", "greedy"), default="cyclic")
    p.add_argument("--max-sweeps", type=int, default=None)
    p.add_argument("--update", choices=("tensor", "data"), default="tensor")
    p.add_argument("--sources", type=int, default=None,
                   help="expected source count; refused when above the observation dimension")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("parafac", help="trilinear decomposition by ALS")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--max-iters", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--init", choices=("svd", "random"), default="svd")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("sylvester", help="decompose a binary quantic into powers")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("rank1", help="best rank-1 approximation of a symmetric tensor")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--init", choices=("hosvd", "random"), default="hosvd")
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--out", required=True)

    p = sub.add_parser("tables", help="reference ranks and orbit representatives")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--orbits", action="store_true")

    p = sub.add_parser("score", help="separation metrics against a manifest")
    p.add_argument("--result", required=True, help="JSON with a 'separator' field")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", default=None)

    return parser


def _emit(obj, args, path=None):
    text = json.dumps(obj, indent=args.json_indent)
    if path is None:
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")
        if args.verbose:
            print(f"wrote {path}", file=sys.stderr)


def _cmd_gen(args) -> int:
    mixing_matrix = None
    if args.mixing == "given":
        if not args.mixing_file:
            raise UsageError("--mixing given requires --mixing-file")
        mixing_matrix = np.asarray(tio.load_json(args.mixing_file), dtype=float)
    config = ExperimentConfig(
        nsources=args.sources,
        nsamples=args.samples,
        distribution=args.dist,
        mixing=args.mixing,
        noise_variance=args.noise,
        seed=args.seed,
        mixing_matrix=mixing_matrix,
    )
    samples, manifest = gen(config)
    tio.save_samples(args.out, samples)
    tio.save_json(manifest, args.manifest, indent=args.json_indent)
    if args.verbose:
        print(f"wrote {args.out} and {args.manifest}", file=sys.stderr)
    return 0


def _cmd_cumulants(args) -> int:
    samples, _ = tio.load_samples(args.infile)
    c = cumulant_tensor(samples, args.order)
    _emit(tio.tensor_to_obj(c), args, args.out)
    return 0


def _cmd_ica(args) -> int:
    samples, _ = tio.load_samples(args.infile)
    n = samples.shape[1]
    if args.sources is not None and args.sources > n:
        raise UsageError(
            f"{args.sources} sources on {n} observations is underdetermined; "
            "orthogonal ICA does not apply -- see the 'sylvester' subcommand "
            "for canonical decompositions beyond the dimension"
        )
    spec = ContrastSpec(alpha=args.alpha, order=args.order)
    whitener, res = ica(
        samples, spec, strategy=args.strategy, max_sweeps=args.max_sweeps,
        update=args.update,
    )
    separator = res.Q.T @ whitener.T
    out = {
        "Q": res.Q.tolist(),
        "whitener": whitener.T.tolist(),
        "separator": separator.tolist(),
        "contrast_trace": res.trace,
        "stationarity_residual": stationarity_residual(res.Z, spec.order),
        "sweeps": res.sweeps,
        "rotations": res.rotations,
        "low_confidence": res.low_confidence,
    }
    _emit(out, args, args.out)
    return 0


def _cmd_parafac(args) -> int:
    t = tio.tensor_from_obj(tio.load_json(args.infile))
    cfg = ALSConfig(
        rank=args.rank, max_iters=args.max_iters, rel_tol=args.tol,
        init=args.init, seed=args.seed,
    )
    factors, history = als(t, cfg)
    out = tio.factors_to_obj(factors)
    out["fit_history"] = history
    _emit(out, args, args.out)
    return 0


def _cmd_sylvester(args) -> int:
    q = tio.quantic_from_obj(tio.load_json(args.infile))
    dec = cand_binary(q)
    _emit(tio.decomposition_to_obj(dec), args, args.out)
    return 0


def _cmd_rank1(args) -> int:
    t = tio.tensor_from_obj(tio.load_json(args.infile))
    if not isinstance(t, SymTensor):
        t = SymTensor.from_dense(t)
    approx = best_rank1(t, init=args.init, restarts=args.restarts, seed=args.seed)
    o0, odm1, od = omega_criteria(t, approx.w, approx.sigma)
    out = {
        "w": approx.w.tolist(),
        "sigma": approx.sigma,
        "iterations": approx.iterations,
        "converged": approx.converged,
        "restarts": approx.restarts,
        "approximation_error": o0,
        "stationarity_residual": odm1,
        "contraction": od,
    }
    _emit(out, args, args.out)
    return 0


def _cmd_tables(args) -> int:
    if args.orbits:
        out = {
            f"{label} ({nvars} vars)": {
                "rank": ORBITS[(label, nvars)].rank,
                "generic": ORBITS[(label, nvars)].generic,
                "tensor": tio.tensor_to_obj(orbit_representative(label, nvars)),
            }
            for (label, nvars) in sorted(ORBITS)
        }
        _emit(out, args)
        return 0
    if args.d is not None and args.n is not None:
        out = {
            "d": args.d,
            "n": args.n,
            "generic_rank": generic_rank(args.d, args.n),
            "manifold_dim": manifold_dim(args.d, args.n),
        }
        _emit(out, args)
        return 0
    rows = [
        {"d": d, "n": n, "generic_rank": w, "manifold_dim": manifold_dim(d, n)}
        for (d, n), w in sorted(GENERIC_RANK.items())
    ]
    _emit(rows, args)
    return 0


def _cmd_score(args) -> int:
    result = tio.load_json(args.result)
    manifest = tio.load_json(args.manifest)
    separator = np.asarray(result["separator"], dtype=float)
    mixing = np.asarray(manifest["mixing"], dtype=float)
    metrics = score(separator, mixing)
    _emit(metrics, args, args.out)
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "cumulants": _cmd_cumulants,
    "ica": _cmd_ica,
    "parafac": _cmd_parafac,
    "sylvester": _cmd_sylvester,
    "rank1": _cmd_rank1,
    "tables": _cmd_tables,
    "score": _cmd_score,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, np.linalg.LinAlgError) as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(payload), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
