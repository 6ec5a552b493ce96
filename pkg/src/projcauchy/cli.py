"""Command-line interface.

Exit status: 0 success, 1 usage error, 2 domain or geometry error,
3 verification failure.
"""

import argparse
import hashlib
import json
import re
import sys

import numpy as np

from projcauchy import __version__, rng
from projcauchy.cauchy_distributions import (
    LSCParams,
    cauchy_elliptic_pdf,
    cauchy_std_pdf,
    integrate_cauchy_elliptic,
    integrate_cauchy_std,
    simulate_cauchy_elliptic,
    simulate_cauchy_std,
)
from projcauchy.errors import BudgetExceededError, ProjCauchyError
from projcauchy.polygons import PlanePolygon
from projcauchy.spherical_polygon import SphericalPolygon, solid_angle_polygon
from projcauchy.student_extension import integrate_student_mc, student_pdf
from projcauchy.verification_oracles import (
    chi_square_gof,
    quadrature_integrate,
    triangle_bins,
)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3

DEFAULT_VERIFY_POLYGON = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
INTEGRAL_TOL = 1e-8
GOF_ALPHA = 1e-3
MC_SIGMAS = 4.0

# flags whose values are comma lists that may start with a minus sign
_LIST_FLAGS = ("--point", "--lsc")
_NUMBER_LIST = re.compile(r"^-[0-9.]")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(x):
    """Shortest round-trip decimal."""
    return repr(float(x))


def _parse_point(text):
    try:
        values = [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse point {text!r}; expected x1,x2") from None
    if len(values) != 2:
        raise UsageError(f"expected a point x1,x2, got {text!r}")
    return np.array(values)


def _parse_u64(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {value}")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid count {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"count must be >= 1, got {value}")
    return value


def load_polygon_file(path):
    """Read a polygon document: ``{"vertices": [[x1, x2], ...], "lsc": {...}?}``."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read polygon file {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"polygon file {path!r} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise UsageError(f"polygon file {path!r} must be an object with a 'vertices' key")
    verts = doc["vertices"]
    if (
        not isinstance(verts, list)
        or len(verts) < 3
        or not all(isinstance(v, list) and len(v) == 2 and all(_is_number(c) for c in v) for v in verts)
    ):
        raise UsageError("'vertices' must be a list of at least 3 [x1, x2] number pairs")
    lsc = None
    if "lsc" in doc:
        spec = doc["lsc"]
        keys = ("a1", "a2", "b1", "b2", "rho")
        if not isinstance(spec, dict) or set(spec) != set(keys) or not all(_is_number(spec[k]) for k in keys):
            raise UsageError("'lsc' must be an object with numeric keys a1, a2, b1, b2, rho")
        lsc = LSCParams(*(float(spec[k]) for k in keys))
    unknown = set(doc) - {"vertices", "lsc"}
    if unknown:
        raise UsageError(f"unknown keys in polygon file: {sorted(unknown)}")
    return PlanePolygon(np.array(verts, dtype=float)), lsc


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _resolve_polygon(args):
    poly, file_lsc = load_polygon_file(args.poly)
    lsc = LSCParams.parse(args.lsc) if args.lsc is not None else file_lsc
    return poly, lsc


def _emit(args, doc, lines):
    if args.json:
        sys.stdout.write(json.dumps(doc) + "\n")
    else:
        sys.stdout.write("".join(line + "\n" for line in lines))


def cmd_pdf(args):
    if args.nu is not None and args.lsc is not None:
        raise UsageError("--nu and --lsc are mutually exclusive")
    x = _parse_point(args.point)
    if args.nu is not None:
        value, family = student_pdf(x, args.nu), "student"
    elif args.lsc is not None:
        value, family = cauchy_elliptic_pdf(x, LSCParams.parse(args.lsc)), "lsc"
    else:
        value, family = cauchy_std_pdf(x), "std"
    _emit(args, {"value": value, "density": family}, [fmt(value)])
    return EXIT_OK


def cmd_integrate(args):
    poly, lsc = _resolve_polygon(args)
    if args.nu is not None:
        if lsc is not None:
            raise UsageError("--nu cannot be combined with LSC parameters")
        if args.samples is None or args.seed is None:
            raise UsageError("the Student path needs --samples and --seed")
        est = integrate_student_mc(poly, args.nu, args.samples, args.seed, workers=args.workers)
        doc = {"value": est.value, "method": "mc", "standard_error": est.std_error, "samples": est.n}
        lines = [f"value {fmt(est.value)}", "method mc", f"standard_error {fmt(est.std_error)}"]
    else:
        value = integrate_cauchy_std(poly) if lsc is None else integrate_cauchy_elliptic(poly, lsc)
        doc = {"value": value, "method": "solid-angle"}
        lines = [f"value {fmt(value)}", "method solid-angle"]
    _emit(args, doc, lines)
    return EXIT_OK


def _draw(poly, lsc, n, seed):
    u = rng.uniform_pairs(seed, n)
    return simulate_cauchy_std(poly, u) if lsc is None else simulate_cauchy_elliptic(poly, lsc, u)


def cmd_sample(args):
    poly, lsc = _resolve_polygon(args)
    pts = _draw(poly, lsc, args.samples, args.seed)
    if args.json:
        text = json.dumps({"samples": [[float(a), float(b)] for a, b in pts]}) + "\n"
    else:
        text = "".join(f"{fmt(a)},{fmt(b)}\n" for a, b in pts)
    sys.stdout.write(text)
    if args.manifest:
        manifest = {
            "command": "sample",
            "arguments": args.argv,
            "seed": args.seed,
            "samples": args.samples,
            "version": __version__,
            "outputs_sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
        }
        with open(args.manifest, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_solid_angle(args):
    poly, _ = load_polygon_file(args.poly)
    omega = solid_angle_polygon(SphericalPolygon.from_plane(poly))
    integral = omega / (2.0 * np.pi)
    _emit(args, {"solid_angle": omega, "integral": integral}, [f"solid_angle {fmt(omega)}", f"integral {fmt(integral)}"])
    return EXIT_OK


def _read_samples(path):
    fh = sys.stdin if path == "-" else open(path, encoding="utf-8")
    try:
        rows = [line.split(",") for line in fh if line.strip()]
    finally:
        if fh is not sys.stdin:
            fh.close()
    try:
        return np.array([[float(a), float(b)] for a, b in rows])
    except ValueError:
        raise UsageError("sample input must contain rows of the form x1,x2") from None


def _check_integral(poly, lsc):
    if lsc is None:
        analytic, density = integrate_cauchy_std(poly), cauchy_std_pdf
    else:
        analytic, density = integrate_cauchy_elliptic(poly, lsc), lambda x: cauchy_elliptic_pdf(x, lsc)
    try:
        quad = quadrature_integrate(density, poly, tol=INTEGRAL_TOL / 10).value
    except BudgetExceededError as exc:
        quad = exc.best.value
    diff = abs(analytic - quad)
    return {
        "name": "integral",
        "passed": bool(diff <= INTEGRAL_TOL),
        "analytic": analytic,
        "quadrature": quad,
        "abs_diff": diff,
        "tolerance": INTEGRAL_TOL,
    }


def _check_gof(poly, lsc, samples, tamper):
    bins = triangle_bins(poly, levels=2)
    if lsc is None:
        masses = [integrate_cauchy_std(b) for b in bins]
    else:
        masses = [integrate_cauchy_elliptic(b, lsc) for b in bins]
    masses = np.array(masses)
    if tamper:
        # swap the heaviest and lightest bins
        i, j = int(np.argmax(masses)), int(np.argmin(masses))
        masses[[i, j]] = masses[[j, i]]
    report = chi_square_gof(samples, bins, masses)
    return {
        "name": "sampler_gof",
        "passed": bool(report.p_value > GOF_ALPHA),
        "statistic": report.statistic,
        "dof": report.dof,
        "p_value": report.p_value,
        "alpha": GOF_ALPHA,
        "samples": int(len(samples)),
    }


def _check_student(poly, nu, n, seed, workers):
    est = integrate_student_mc(poly, nu, n, seed, workers=workers)
    try:
        quad = quadrature_integrate(lambda x: student_pdf(x, nu), poly, tol=1e-10).value
    except BudgetExceededError as exc:
        quad = exc.best.value
    diff = abs(est.value - quad)
    return {
        "name": "student_mc",
        "passed": bool(diff <= MC_SIGMAS * est.std_error + 1e-12),
        "mc": est.value,
        "standard_error": est.std_error,
        "quadrature": quad,
        "abs_diff": diff,
        "sigmas": MC_SIGMAS,
    }


def cmd_verify(args):
    if args.nu is not None and args.lsc is not None:
        raise UsageError("--nu and --lsc are mutually exclusive")
    if args.poly is None:
        poly, file_lsc = PlanePolygon(DEFAULT_VERIFY_POLYGON), None
    else:
        poly, file_lsc = load_polygon_file(args.poly)
    lsc = LSCParams.parse(args.lsc) if args.lsc is not None else file_lsc
    if args.nu is not None and lsc is not None:
        raise UsageError("--nu cannot be combined with LSC parameters")

    samples = _read_samples(args.input) if args.input else _draw(poly, lsc, args.samples, args.seed)
    checks = [_check_integral(poly, lsc), _check_gof(poly, lsc, samples, args.tamper_masses)]
    if args.nu is not None:
        checks.append(_check_student(poly, args.nu, args.samples, args.seed, args.workers))
    passed = all(c["passed"] for c in checks)

    lines = []
    for c in checks:
        detail = " ".join(f"{k}={fmt(v) if isinstance(v, float) else v}" for k, v in c.items() if k not in ("name", "passed"))
        lines.append(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']} {detail}")
    lines.append("OVERALL " + ("PASS" if passed else "FAIL"))
    _emit(args, {"checks": checks, "passed": passed}, lines)
    return EXIT_OK if passed else EXIT_VERIFY


def build_parser():
    parser = _Parser(prog="projcauchy", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(p):
        p.add_argument("--json", action="store_true", help="emit one JSON object instead of plain lines")

    p = sub.add_parser("pdf", help="evaluate a density at a point")
    p.add_argument("--point", required=True, help="x1,x2")
    p.add_argument("--lsc", help="a1,a2,b1,b2,rho")
    p.add_argument("--nu", type=_positive_int, help="Student degrees of freedom")
    common(p)
    p.set_defaults(func=cmd_pdf)

    p = sub.add_parser("integrate", help="probability mass inside a polygon")
    p.add_argument("--poly", required=True)
    p.add_argument("--lsc", help="a1,a2,b1,b2,rho (overrides the file)")
    p.add_argument("--nu", type=_positive_int)
    p.add_argument("--samples", type=_positive_int)
    p.add_argument("--seed", type=_parse_u64)
    p.add_argument("--workers", type=_positive_int, default=1)
    common(p)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("sample", help="draw truncated variates inside a convex polygon")
    p.add_argument("--poly", required=True)
    p.add_argument("--samples", type=_positive_int, required=True)
    p.add_argument("--seed", type=_parse_u64, required=True)
    p.add_argument("--lsc", help="a1,a2,b1,b2,rho (overrides the file)")
    p.add_argument("--manifest", help="write a run manifest to this path")
    common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("solid-angle", help="solid angle subtended by a polygon")
    p.add_argument("--poly", required=True)
    common(p)
    p.set_defaults(func=cmd_solid_angle)

    p = sub.add_parser("verify", help="check the analytic routes against brute-force oracles")
    p.add_argument("--poly", help="polygon file (default: triangle (0,0),(1,0),(0,1))")
    p.add_argument("--samples", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_parse_u64, default=42)
    p.add_argument("--lsc", help="a1,a2,b1,b2,rho")
    p.add_argument("--nu", type=_positive_int)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--input", help="read samples (x1,x2 rows) from a file, '-' for stdin")
    p.add_argument("--tamper-masses", action="store_true", help=argparse.SUPPRESS)
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def _glue_negative_lists(argv):
    """Turn ``--lsc -1.9,...`` into ``--lsc=-1.9,...`` so argparse does not read a flag."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in _LIST_FLAGS and i + 1 < len(argv) and _NUMBER_LIST.match(argv[i + 1]):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_glue_negative_lists(argv))
        args.argv = argv
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProjCauchyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
