"""Batch experiment driver: reproducible runs over every library module
with JSON/CSV reports.

Every report embeds the parsed configuration, the master seed, and a
git-style blob hash of the canonical configuration plus any input file
bytes, so identical invocations produce byte-identical output.  Module
randomness is derived from the master seed by hashing it together with
the subcommand name, giving each subcommand an independent stream.

Exit codes: 0 on success, 2 when a quantitative condition or a
precondition fails (the report is still written), 1 on internal errors.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys

import numpy as np

from .complexes import (PointCloud, build_cech_ambient, build_cech_restricted,
                        build_rips)
from .conditions import (ReconstructionInput, check_cech_theorem,
                         check_rips_theorem)
from .constants import (RatioProblem, comparison_constants, max_ratio,
                        ratio_curve)
from .homology import betti_of_field, betti_simplicial
from .inequalities import LEMMAS, PreconditionError, run_monte_carlo
from .sampling import (ab_model, covering_probability_sim, hausdorff_distance,
                       sample_with_noise)
from .shapes import (Circle, Segment, Semicircle, Sphere, SquareBoundary,
                     double_offset_field, estimate_mu_reach, offset_field)

SHAPES = {
    "circle": Circle,
    "sphere": Sphere,
    "semicircle": Semicircle,
    "square": SquareBoundary,
    "segment": Segment,
}

# short command-line codes for the registered inequality checks
LEMMA_ALIASES = {
    "a1": "barycenter-identity",
    "a2": "segment-projection",
    "federer": "projection-inner-product",
    "a4": "cross-projection",
    "a5": "projection-shift",
    "a6": "center-projection",
    "d3": "simplex-representatives",
}


def _make_shape(name, param):
    if name not in SHAPES:
        raise ValueError(f"unknown shape {name!r}; choose from "
                         f"{sorted(SHAPES)}")
    cls = SHAPES[name]
    return cls() if param is None else cls(param)


def _derived_seed(master, label):
    """Per-subcommand stream seed: master seed hashed with the label."""
    digest = hashlib.sha1(f"{label}:{master}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    return obj


def _canonical_json(obj):
    return json.dumps(_jsonable(obj), sort_keys=True,
                      separators=(",", ":"), allow_nan=False)


def _git_blob_hash(data):
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def _config_dict(args):
    # the output destination is not part of the computation, so identical
    # runs written to different paths still compare byte-identical
    return {k: v for k, v in sorted(vars(args).items())
            if k not in ("func", "out")}


def _input_hash(config, file_paths):
    payload = _canonical_json(config).encode()
    for path in file_paths:
        with open(path, "rb") as fh:
            payload += fh.read()
    return _git_blob_hash(payload)


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


def _read_points_file(path, radii_inline=False):
    """Point file: one point per line, whitespace-separated floats,
    '#' comments; with radii_inline the trailing column is the radius."""
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            try:
                rows.append([float(tok) for tok in body.split()])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed point line")
    if not rows:
        raise ValueError(f"{path}: no points")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError(f"{path}: inconsistent column count")
    data = np.array(rows, dtype=float)
    if radii_inline:
        if width < 2:
            raise ValueError(f"{path}: need coordinates plus a radius column")
        return data[:, :-1], data[:, -1]
    return data, None


def _read_radii_file(path):
    values = []
    with open(path) as fh:
        for line in fh:
            body = line.split("#", 1)[0].strip()
            if body:
                values.extend(float(tok) for tok in body.split())
    if not values:
        raise ValueError(f"{path}: no radii")
    return np.array(values, dtype=float)


def _resolve_radii(args, n):
    if getattr(args, "radii_file", None):
        radii = _read_radii_file(args.radii_file)
        if len(radii) != n:
            raise ValueError(f"radii file holds {len(radii)} values for "
                             f"{n} points")
        return radii
    if getattr(args, "radius", None) is not None:
        if args.radius <= 0:
            raise ValueError("radius must be positive")
        return np.full(n, float(args.radius))
    raise ValueError("a radius is required (--radius or --radii-file)")


def _input_files(args):
    files = []
    for key in ("points_file", "radii_file"):
        path = getattr(args, key, None)
        if path:
            files.append(path)
    return files


def _betti_match(computed, expected):
    width = max(len(computed), len(expected))
    pad = lambda b: list(b) + [0] * (width - len(b))
    return pad(computed) == pad(expected)


# ---------------------------------------------------------------------------
# subcommands


def cmd_reconstruct(args):
    shape = _make_shape(args.shape, args.shape_param)
    tau = float(shape.reach())
    rng = np.random.default_rng(_derived_seed(args.seed, "reconstruct"))
    points = sample_with_noise(shape, args.n, args.eps, rng)
    radii = _resolve_radii(args, args.n)
    cloud = PointCloud(points, radii)
    _, eps_observed, delta = hausdorff_distance(points, shape)
    inp = ReconstructionInput(tau=tau, dim=cloud.dim, eps=args.eps,
                              delta=delta, r_min=float(radii.min()),
                              r_max=float(radii.max()))
    if args.complex == "cech":
        conditions = check_cech_theorem(inp)
    else:
        conditions = check_rips_theorem(inp)
    expected = list(shape.known_betti())
    max_dim = args.max_dim if args.max_dim is not None else len(expected)
    if args.complex == "cech":
        cx = build_cech_ambient(cloud, max_dim)
    else:
        cx = build_rips(cloud, max_dim)
    # Betti numbers above len(expected)-1 are truncation artifacts of the
    # max_dim cap, so the comparison stops there
    betti = list(betti_simplicial(cx, up_to=len(expected) - 1))
    payload = {
        "tau": tau, "ambient_dim": cloud.dim, "eps_observed": eps_observed,
        "delta": delta, "r_min": inp.r_min, "r_max": inp.r_max,
        "conditions_report": conditions.as_dict(),
        "betti_computed": betti, "betti_expected": expected,
        "match": _betti_match(betti, expected),
    }
    rows = [("condition", iq["label"], iq["lhs"], iq["rhs"], iq["ok"])
            for iq in payload["conditions_report"]["inequalities"]]
    width = max(len(betti), len(expected))
    for k in range(width):
        b = betti[k] if k < len(betti) else 0
        e = expected[k] if k < len(expected) else 0
        rows.append(("betti", k, b, e, b == e))
    code = 0 if conditions.all_satisfied else 2
    return code, payload, _csv_text(("kind", "label", "lhs", "rhs", "ok"),
                                    rows)


def cmd_constants(args):
    regime = ("noisy-asymptotic" if args.regime == "noisy" else args.regime)
    if args.kind == "comparison":
        payload = {"values": comparison_constants(),
                   "convention": "closed-form", "curve_csv_path": None}
        rows = [(k, v) for k, v in sorted(payload["values"].items())]
        return 0, payload, _csv_text(("name", "value"), rows)
    dim = math.inf if args.dimension in (None, "inf") else int(args.dimension)
    problem = RatioProblem(args.kind, regime, dim=dim)
    value = max_ratio(problem, tol=args.tol)
    convention = ("limiting dimension" if dim == math.inf
                  else f"dimension {int(dim)}")
    curve_rows = []
    curve_path = None
    if args.curve_points:
        grid = np.linspace(args.tol, 0.5, args.curve_points)
        for point in ratio_curve(problem, grid):
            curve_rows.append((point.rho, point.feasible, point.best_slack,
                               point.scan_argmax))
        if args.curve_out:
            curve_path = args.curve_out
            with open(curve_path, "w") as fh:
                fh.write(_csv_text(
                    ("rho", "feasible", "best_slack", "scan_argmax"),
                    curve_rows))
    payload = {
        "problem": {"complex_kind": problem.complex_kind,
                    "regime": problem.regime,
                    "dim": None if dim == math.inf else int(dim),
                    "scan_grid": problem.scan_grid,
                    "noisy_covering_only": problem.noisy_covering_only},
        "value": float(value), "infeasible": bool(value.infeasible),
        "convention": convention, "curve_csv_path": curve_path,
    }
    csv_body = _csv_text(("rho", "feasible", "best_slack", "scan_argmax"),
                         curve_rows) if curve_rows else _csv_text(
        ("name", "value"), [(f"{args.kind}-{regime}", float(value))])
    return 0, payload, csv_body


def cmd_covering_sim(args):
    shape = _make_shape(args.shape, args.shape_param)
    model = ab_model(shape)
    radii = _resolve_radii(args, args.n)
    report = covering_probability_sim(
        model, args.n, radii, args.trials,
        seed=_derived_seed(args.seed, "covering-sim"))
    payload = {
        "empirical": report.empirical, "bound": report.bound,
        "n": report.n, "trials": report.trials, "r_min": report.r_min,
        "reference_n": report.reference_n,
        "grid_spacing": report.grid_spacing,
        "model": {"a": model.a, "b": model.b, "eps0": model.eps0},
    }
    rows = [(t, int(c), report.r_min, report.n)
            for t, c in enumerate(report.covered)]
    return 0, payload, _csv_text(("trial", "covered", "r_min", "n"), rows)


def cmd_verify_inequalities(args):
    lemma = LEMMA_ALIASES.get(args.lemma, args.lemma)
    if lemma not in LEMMAS:
        raise ValueError(f"unknown lemma {args.lemma!r}; choose from "
                         f"{sorted(LEMMAS)} or aliases "
                         f"{sorted(LEMMA_ALIASES)}")
    kinds = ["circle", "sphere"] if args.shape == "both" else [args.shape]
    runs = []
    for kind in kinds:
        shape = _make_shape(kind, args.shape_param)
        seed = _derived_seed(args.seed, f"verify-inequalities:{lemma}:{kind}")
        runs.append(run_monte_carlo(lemma, shape, args.cases, seed=seed)
                    .as_dict())
    payload = {
        "lemma": lemma,
        "cases": sum(r["cases"] for r in runs),
        "violations": sum(r["violations"] for r in runs),
        "worst_margin": min(r["worst_margin"] for r in runs),
        "logged_violations": sum(r["logged_violations"] for r in runs),
        "runs": runs,
    }
    rows = [(r["lemma"], r["shape"], r["cases"], r["violations"],
             r["worst_margin"]) for r in runs]
    code = 0 if payload["violations"] == 0 else 2
    return code, payload, _csv_text(
        ("lemma", "shape", "cases", "violations", "worst_margin"), rows)


def cmd_offsets(args):
    shape = _make_shape(args.shape, args.shape_param)
    expected = list(shape.known_betti())
    mu_hat = None
    censored = None
    s_value = None
    peeling_ok = True
    if args.s is None:
        field = offset_field(shape, args.r, resolution=args.resolution)
        mode = "offset"
    else:
        mu_hat_val = estimate_mu_reach(shape, args.mu,
                                       resolution=args.mu_resolution)
        mu_hat = float(mu_hat_val)
        censored = bool(mu_hat_val.censored)
        s_value = mu_hat * args.r if args.s == "auto-mu" else float(args.s)
        s_bound = mu_hat * args.r
        peeling_ok = s_value <= s_bound + 1e-9
        field = double_offset_field(shape, args.r, s_value,
                                    resolution=args.resolution)
        mode = "double-offset"
    betti = list(betti_of_field(field, up_to=len(expected) - 1))
    payload = {
        "mode": mode, "r": args.r, "s": s_value, "mu": args.mu,
        "mu_hat": mu_hat, "mu_censored": censored,
        "peeling_ok": peeling_ok, "resolution": args.resolution,
        "betti_computed": betti, "betti_expected": expected,
        "match": _betti_match(betti, expected),
    }
    rows = [(k, betti[k] if k < len(betti) else 0,
             expected[k] if k < len(expected) else 0)
            for k in range(max(len(betti), len(expected)))]
    code = 0 if peeling_ok else 2
    return code, payload, _csv_text(("dim", "computed", "expected"), rows)


def _load_cloud(args):
    if args.points_file:
        points, inline = _read_points_file(args.points_file,
                                           args.radii_inline)
        radii = inline if inline is not None else _resolve_radii(
            args, len(points))
        shape = (_make_shape(args.shape, args.shape_param)
                 if args.shape else None)
        return PointCloud(points, radii), shape
    if not args.shape:
        raise ValueError("either --points-file or --shape is required")
    shape = _make_shape(args.shape, args.shape_param)
    rng = np.random.default_rng(_derived_seed(args.seed, "cloud"))
    points = sample_with_noise(shape, args.n, args.eps, rng)
    return PointCloud(points, _resolve_radii(args, args.n)), shape


def _build_complex(args, cloud, shape):
    if args.complex == "rips":
        return build_rips(cloud, args.max_dim)
    if args.complex == "restricted-cech":
        if shape is None:
            raise ValueError("restricted-cech needs --shape")
        return build_cech_restricted(cloud, shape, args.max_dim)
    return build_cech_ambient(cloud, args.max_dim)


def cmd_complex(args):
    cloud, shape = _load_cloud(args)
    cx = _build_complex(args, cloud, shape)
    payload = {
        "n_points": cloud.n, "ambient_dim": cloud.dim,
        "complex": args.complex, "max_dim": cx.max_dim,
        "counts": cx.counts(),
        "euler_characteristic": cx.euler_characteristic(),
        "simplices": [list(s) for s in cx.simplices],
    }
    rows = [(len(s) - 1, " ".join(str(v) for v in s)) for s in cx.simplices]
    return 0, payload, _csv_text(("dim", "vertices"), rows)


def cmd_betti(args):
    cloud, shape = _load_cloud(args)
    cx = _build_complex(args, cloud, shape)
    betti = list(betti_simplicial(cx))
    payload = {
        "n_points": cloud.n, "complex": args.complex,
        "max_dim": cx.max_dim, "counts": cx.counts(), "betti": betti,
        "euler_characteristic": cx.euler_characteristic(),
    }
    rows = [(k, b) for k, b in enumerate(betti)]
    return 0, payload, _csv_text(("dim", "betti"), rows)


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(sub, shape_default=None, shape_required=False):
    if shape_required:
        sub.add_argument("--shape", required=True, choices=sorted(SHAPES))
    else:
        sub.add_argument("--shape", default=shape_default,
                         choices=sorted(SHAPES))
    sub.add_argument("--shape-param", type=float, default=None,
                     help="radius / side / length override")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=None, help="write the report here "
                     "instead of stdout")
    sub.add_argument("--format", choices=("json", "csv"), default="json")


def _add_radii(sub):
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--radius", type=float, default=None)
    group.add_argument("--radii-file", default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="reconcheck",
        description="reconstruction checks: complexes, conditions, "
                    "constants, coverings, and inequality audits")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("reconstruct", help="sample, check conditions, "
                        "and compare Betti numbers against the shape")
    _add_common(p, shape_required=True)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--complex", choices=("cech", "rips"), default="cech")
    _add_radii(p)
    p.add_argument("--max-dim", type=int, default=None)
    p.set_defaults(func=cmd_reconstruct)

    p = subs.add_parser("constants", help="extremal ratio constants")
    p.add_argument("--kind", choices=("cech", "rips", "comparison"),
                   required=True)
    p.add_argument("--regime",
                   choices=("general", "noisy", "noisy-asymptotic"),
                   default="general")
    p.add_argument("--dimension", default="inf",
                   help="positive integer or 'inf' (default)")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--curve-points", type=int, default=0)
    p.add_argument("--curve-out", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_constants)

    p = subs.add_parser("covering-sim", help="covering probability trials")
    _add_common(p, shape_default="circle")
    p.add_argument("--n", type=int, default=1000)
    _add_radii(p)
    p.add_argument("--trials", type=int, default=500)
    p.set_defaults(func=cmd_covering_sim)

    p = subs.add_parser("verify-inequalities",
                        help="Monte Carlo audit of one inequality")
    p.add_argument("--lemma", required=True,
                   help=f"one of {sorted(LEMMAS)} (short aliases "
                        f"{sorted(LEMMA_ALIASES)} accepted)")
    p.add_argument("--shape", choices=("circle", "sphere", "both"),
                   default="both")
    p.add_argument("--shape-param", type=float, default=None)
    p.add_argument("--cases", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_verify_inequalities)

    p = subs.add_parser("offsets", help="offset / double-offset Betti "
                        "comparison on an occupancy grid")
    _add_common(p, shape_required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--s", default=None,
                   help="peeling radius, or 'auto-mu' for mu_hat * r")
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--resolution", type=int, default=256)
    p.add_argument("--mu-resolution", type=int, default=256)
    p.set_defaults(func=cmd_offsets)

    for name, func in (("complex", cmd_complex), ("betti", cmd_betti)):
        p = subs.add_parser(name, help=f"build a complex and report "
                            f"{'its simplices' if name == 'complex' else 'Betti numbers'}")
        _add_common(p)
        p.add_argument("--points-file", default=None)
        p.add_argument("--radii-inline", action="store_true",
                       help="trailing column of the points file is the "
                            "per-point radius")
        p.add_argument("--n", type=int, default=100)
        p.add_argument("--eps", type=float, default=0.0)
        _add_radii(p)
        p.add_argument("--complex", dest="complex",
                       choices=("cech", "rips", "restricted-cech"),
                       default="cech")
        p.add_argument("--max-dim", type=int, default=2)
        p.set_defaults(func=func)

    return parser


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code, payload, csv_text = args.func(args)
        config = _config_dict(args)
        report = {"subcommand": args.subcommand, "config": config,
                  "input_hash": _input_hash(config, _input_files(args))}
        report.update(payload)
        text = csv_text if args.format == "csv" else (
            _canonical_json(report) + "\n")
    except (ValueError, PreconditionError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
