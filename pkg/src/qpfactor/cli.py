"""Command-line front end: generate fixtures, factorize signals, join and
check phases, summarize reports. Outputs are byte-deterministic for a fixed
config and seed."""

import argparse
import json
import math
import sys

import numpy as np

from ._validation import is_prime
from .circular import load_phase_csv, save_phase_csv
from .errors import InvalidArgumentError, QpfactorError, SignalIOError
from .factorize import factorize_signal, injectivity_windows
from .persistence import save_barcode_csv, save_cocycle_csv
from .signal import (
    SampledSignal,
    gen_arctan_circle,
    gen_chirp_recip,
    gen_constant,
    gen_modulated_periodic,
    load_signal,
    save_signal,
)
from .universality import join

GENERATORS = ("modulated", "chirp", "arctan", "constant")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):  # before int: bool subclasses int
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return None if math.isinf(v) or math.isnan(v) else v
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _write_json(payload, path):
    text = json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"
    with open(path, "w") as fh:
        fh.write(text)


def _prime_arg(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"prime must be an integer, got {text!r}")
    if not is_prime(value):
        raise argparse.ArgumentTypeError(f"prime must be a prime number, got {value}")
    return value


def _offsets_arg(text):
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"offsets must be comma-separated reals, got {text!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qpfactor",
        description="Quasiperiodic factorization of sampled signals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a synthetic signal CSV")
    p_gen.add_argument("--kind", choices=GENERATORS, required=True)
    p_gen.add_argument("--samples", type=int, default=600)
    p_gen.add_argument("--start", type=float, default=0.0)
    p_gen.add_argument("--end", type=float, default=6.0)
    p_gen.add_argument("--value", type=float, default=0.0,
                       help="constant generator level")
    p_gen.add_argument("--noise", type=float, default=0.0,
                       help="additive Gaussian noise sigma")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)

    p_fac = sub.add_parser("factorize", help="factorize a signal CSV")
    p_fac.add_argument("--in", dest="infile", required=True)
    p_fac.add_argument("--out", required=True, help="factorization report JSON")
    p_fac.add_argument("--phase-csv", help="write x,theta rows")
    p_fac.add_argument("--barcode-csv", help="write dim,birth,death rows")
    p_fac.add_argument("--bins-csv", help="write the U model bins")
    p_fac.add_argument("--cocycle-csv", help="write the lifted cocycle edges")
    p_fac.add_argument("--config", help="JSON file with parameter defaults")
    p_fac.add_argument("--offsets", type=_offsets_arg,
                       help="comma-separated delay offsets")
    p_fac.add_argument("--landmarks", type=int, dest="n_landmarks")
    p_fac.add_argument("--rmax", type=float)
    p_fac.add_argument("--prime", type=_prime_arg)
    p_fac.add_argument("--bins", type=int, dest="n_bins")
    p_fac.add_argument("--ratio", type=float, dest="persistence_ratio")
    p_fac.add_argument("--const-tol", type=float, dest="const_tol_scale")
    p_fac.add_argument("--cocycle-index", type=int)

    p_join = sub.add_parser("join", help="join two phase CSVs")
    p_join.add_argument("--in-a", dest="infile_a", required=True)
    p_join.add_argument("--in-b", dest="infile_b", required=True)
    p_join.add_argument("--bins", type=int, default=60)
    p_join.add_argument("--link-tol", type=float)
    p_join.add_argument("--out", required=True)

    p_check = sub.add_parser("check", help="window injectivity of a phase CSV")
    p_check.add_argument("--in", dest="infile", required=True)
    p_check.add_argument("--period", type=float, required=True)
    p_check.add_argument("--tol-phase", type=float)
    p_check.add_argument("--tol-domain", type=float)
    p_check.add_argument("--out", help="optional JSON report path")

    p_rep = sub.add_parser("report", help="summarize a factorization JSON")
    p_rep.add_argument("--in", dest="infile", required=True)

    return parser


FACTORIZE_PARAMS = (
    "offsets", "n_landmarks", "rmax", "prime", "n_bins",
    "persistence_ratio", "const_tol_scale", "cocycle_index",
)


def _load_config_file(path, parser):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SignalIOError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidArgumentError(f"config {path} must hold a JSON object")
    unknown = set(data) - set(FACTORIZE_PARAMS)
    if unknown:
        parser.error(f"unknown config keys: {sorted(unknown)}")
    if "prime" in data and not is_prime(data["prime"]):
        parser.error(f"prime must be a prime number, got {data['prime']!r}")
    return data


def cmd_generate(args):
    n, a, b = args.samples, args.start, args.end
    if args.kind == "modulated":
        signal = gen_modulated_periodic(n, a, b)
    elif args.kind == "chirp":
        signal = gen_chirp_recip(n, a, b)
    elif args.kind == "arctan":
        signal = gen_arctan_circle(n, a, b)
    else:
        signal = gen_constant(n, a, b, args.value)
    if args.noise > 0.0:
        rng = np.random.default_rng(args.seed)
        noisy = signal.values + rng.normal(0.0, args.noise, signal.values.shape)
        if signal.codomain_kind == "circle":
            noisy %= 1.0
        signal = SampledSignal(signal.domain, noisy, signal.codomain_kind)
    save_signal(signal, args.out)
    return 0


def cmd_factorize(args, parser):
    params = {}
    if args.config:
        params.update(_load_config_file(args.config, parser))
    for key in FACTORIZE_PARAMS:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    signal = load_signal(args.infile)
    fac = factorize_signal(signal, **params)
    _write_json(fac.to_dict(), args.out)
    if args.phase_csv:
        save_phase_csv(fac.domain, fac.theta, args.phase_csv)
    if args.barcode_csv or args.cocycle_csv:
        # rerun the cheap front of the pipeline only when exports need it
        from scipy.spatial.distance import pdist, squareform

        from .embedding import delay_embed, maxmin_landmarks
        from .persistence import compute_persistence, ranked_h1, rips_filtration

        if fac.phase_class == "Point":
            parser.error("a constant signal has no barcode to export")
        offsets = fac.config["offsets"]
        cloud = delay_embed(signal, offsets)
        landmarks = maxmin_landmarks(
            cloud, min(fac.config["n_landmarks"], cloud.n_points)
        )
        D = squareform(pdist(cloud.points[landmarks]))
        filt = rips_filtration(D, fac.config["rmax"], maxdim=2)
        barcode = compute_persistence(filt, fac.config["prime"])
        if args.barcode_csv:
            save_barcode_csv(barcode, args.barcode_csv)
        if args.cocycle_csv:
            ranked = ranked_h1(barcode)
            if not ranked:
                parser.error("no H1 bar; nothing to export to --cocycle-csv")
            save_cocycle_csv(
                ranked[fac.config["cocycle_index"]].representative,
                args.cocycle_csv,
            )
    if args.bins_csv:
        if fac.u_model is None:
            parser.error("this phase class has no U model to export")
        bins = fac.u_model.bins
        with open(args.bins_csv, "w") as fh:
            cols = ",".join(f"v{i + 1}" for i in range(bins.shape[1]))
            fh.write(f"bin,center,{cols}\n")
            for b, row in enumerate(bins):
                center = (b + 0.5) / bins.shape[0]
                vals = ",".join("%.17g" % v for v in row)
                fh.write("%d,%.17g,%s\n" % (b, center, vals))
    return 0


def cmd_join(args):
    xa, ta = load_phase_csv(args.infile_a)
    xb, tb = load_phase_csv(args.infile_b)
    if xa.shape != xb.shape or np.max(np.abs(xa - xb)) > 1e-9 * (1 + np.max(np.abs(xa))):
        raise InvalidArgumentError("phase files must share the same sample grid")
    link_tol = args.link_tol if args.link_tol is not None else 1e-9
    part = join(ta, tb, n_bins=args.bins, link_tol=link_tol)
    payload = {
        "class_count": part.n_classes,
        "winding_estimate": part.winding_estimate,
        "cycle_rank": part.cycle_rank,
        "bins": {
            "requested": args.bins,
            "clusters_a": part.n_clusters[0],
            "clusters_b": part.n_clusters[1],
        },
        "witness_pairs": [list(p) for p in part.witness_pairs],
        "config_echo": {
            "n_bins": args.bins,
            "link_tol": link_tol,
        },
    }
    _write_json(payload, args.out)
    return 0


def cmd_check(args):
    x, theta = load_phase_csv(args.infile)
    report = injectivity_windows(
        theta, x, args.period,
        tol_phase=args.tol_phase, tol_domain=args.tol_domain,
    )
    payload = {
        "passed": report.passed,
        "n_witnesses": report.n_witnesses,
        "witnesses": [list(p) for p in report.witnesses[:10]],
        "period": report.period,
        "tol_phase": report.tol_phase,
        "tol_domain": report.tol_domain,
    }
    if args.out:
        _write_json(payload, args.out)
    verdict = "pass" if report.passed else f"fail ({report.n_witnesses} witnesses)"
    print(f"injectivity at period {report.period:g}: {verdict}")
    return 0


def cmd_report(args):
    try:
        with open(args.infile) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SignalIOError(f"cannot read report {args.infile}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(f"{args.infile} is not valid JSON: {exc}") from exc
    lines = [
        f"phase class:    {data.get('phase_class')}",
        f"winding:        {data.get('winding')}",
        f"period:         {data.get('period_estimate')}",
        f"residual rms:   {data.get('residual_rms')}",
        f"residual sup:   {data.get('residual_sup')}",
        f"samples kept:   {data.get('n_samples_retained')}",
    ]
    for note in data.get("notes", []):
        lines.append(f"note:           {note}")
    print("\n".join(lines))
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "factorize":
            return cmd_factorize(args, parser)
        if args.command == "join":
            return cmd_join(args)
        if args.command == "check":
            return cmd_check(args)
        if args.command == "report":
            return cmd_report(args)
        parser.error(f"unknown command {args.command!r}")
    except QpfactorError as exc:
        print(f"{exc.name}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
