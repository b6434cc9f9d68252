"""Command-line front end: jets, root search, certification, dispersion, decay.

Subcommands
    jet         even trace coefficients of a word, as canonical JSON
    solve       random search -> stochastic descent -> Newton, root file out
    certify     Newton-Kantorovich certificate for a root file
    dispersion  theta(xi) grid CSV plus flatness sidecar JSON
    decay       oscillatory amplitudes vs n, CSV plus power-law fit JSON

Exit codes: 0 success, 1 mathematical failure (non-convergence or uncertified),
2 invalid input, 3 internal accuracy/consistency failure.  All reals are
emitted as full-precision decimal strings; JSON keys are sorted; CSV uses LF
line endings.  Output files are written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

from .certify import certify, gradient_diagnostics, real_to_str
from .dispersion import (
    BumpProfile,
    amplitude_prediction,
    decay_fit,
    default_bump_halfwidth,
    default_flatness_tol,
    flatness_order,
    oscillatory_amplitude,
    theta_grid,
    theta_jet,
)
from .errors import (
    BranchDegeneracyError,
    InternalConsistencyError,
    QuadratureAccuracyError,
    SlowdispError,
)
from .monodromy import Word, trace_jet, word_jet
from .precision import DOUBLE, Precision
from .reference import ROOT_DECIMALS, reference_root
from .solver import (
    SearchConfig,
    ValidityConstraints,
    newton_refine,
    residual_norm,
    search_pipeline,
    symmetry_orbit,
)

EXIT_OK = 0
EXIT_MATH_FAILURE = 1
EXIT_INVALID_INPUT = 2
EXIT_INTERNAL = 3

SOLVE_SUCCESS_NORM = 1e-12
POLISH_THRESHOLD = 1e-8  # residual norm below which a root is Newton-polished

# published diagnostics the --compare-paper table checks against
REPORTED_DIAGNOSTICS = {
    "grad_norm_a2": 3.75,
    "grad_norm_a4": 10.33,
    "grad_norm_a6": 19.14,
    "grad_norm_a8": 41.82,
    "normalized_det": 0.413,
    "dh_norm": 43.96,
    "dh_inv_norm": 0.35,
    "residual_norm": 5.2e-15,
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# -- I/O helpers ----------------------------------------------------------------


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(c) for c in row))
    return "\n".join(lines) + "\n"


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config {path}: {exc}", EXIT_INVALID_INPUT)
    if not isinstance(cfg, dict):
        raise CliError("config must be a JSON object", EXIT_INVALID_INPUT)
    return cfg


def resolve_word(args, cfg: dict, p: Precision) -> Word:
    """Word from --word alias/inline JSON, or from the config's word entry."""
    spec = getattr(args, "word", None) or cfg.get("word", "paper-root")
    if spec == "paper-root":
        durations = tuple(p.real(d) for d in ROOT_DECIMALS)
        return Word.alternating4(durations)
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError:
            raise CliError(
                f"--word must be 'paper-root' or JSON with signs/durations, got {spec!r}",
                EXIT_INVALID_INPUT,
            )
    if not isinstance(spec, dict) or "signs" not in spec or "durations" not in spec:
        raise CliError("word must contain 'signs' and 'durations'", EXIT_INVALID_INPUT)
    signs = tuple(int(s) for s in spec["signs"])
    durations = tuple(p.real(str(d)) for d in spec["durations"])
    if len(signs) != len(durations):
        raise CliError("signs and durations must have the same length", EXIT_INVALID_INPUT)
    if any(s not in (-1, 1) for s in signs):
        raise CliError("signs must be +-1", EXIT_INVALID_INPUT)
    if any(float(d) <= 0 for d in durations):
        raise CliError("durations must be positive", EXIT_INVALID_INPUT)
    return Word(signs=signs, durations=durations)


def resolve_root(args, p: Precision):
    """Root durations from --root (file or the 'paper-root' alias)."""
    spec = getattr(args, "root", None) or "paper-root"
    if spec == "paper-root":
        return reference_root(p)
    try:
        with open(spec) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read root file {spec}: {exc}", EXIT_INVALID_INPUT)
    point = data.get("point")
    if not isinstance(point, list) or len(point) != 4:
        raise CliError("root file must contain a 4-entry 'point' list", EXIT_INVALID_INPUT)
    return tuple(p.real(str(t)) for t in point)


def resolve_precision(args, cfg: dict) -> Precision:
    bits = getattr(args, "precision_bits", None)
    if bits is None:
        bits = cfg.get("precision_bits", 53)
    bits = int(bits)
    if bits < 24:
        raise CliError("precision-bits must be >= 24", EXIT_INVALID_INPUT)
    return Precision(mantissa_bits=bits)


def emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        atomic_write(out, text)
    else:
        sys.stdout.write(text)


def polished_root(point, p: Precision):
    """Newton-polish a near-root so flatness classification sees the true jet.

    An approximate root carries residual-scale low-order derivatives; deep
    refinement pushes them below the classification tolerance.
    """
    if residual_norm([float(t) for t in point]) > POLISH_THRESHOLD:
        return point
    work = p if p.mantissa_bits >= 256 else Precision(mantissa_bits=256)
    with work.active():
        start = tuple(work.real(real_to_str(t, p)) for t in point)
        refined, _ = newton_refine(start, work, tol=1e-45, max_iter=25)
    return refined


# -- subcommands ------------------------------------------------------------------


def cmd_jet(args) -> int:
    cfg = load_config(args.config)
    p = resolve_precision(args, cfg)
    order = args.order if args.order is not None else int(cfg.get("order", 12))
    if order < 2 or order % 2 != 0:
        raise CliError("order must be an even integer >= 2", EXIT_INVALID_INPUT)
    word = resolve_word(args, cfg, p)
    tj = trace_jet(word_jet(word, order, p))
    raw = tj.raw_jet
    payload = {
        "a": [real_to_str(c.real, p) for c in raw.coeffs[0::2]],
        "odd_residual_max": real_to_str(raw.max_odd(), p),
        "precision_bits": p.mantissa_bits,
    }
    emit(args, canonical_json(payload))
    if args.compare_paper:
        sys.stdout.write(compare_paper_table(p))
    return EXIT_OK


def compare_paper_table(p: Precision) -> str:
    diag = gradient_diagnostics(reference_root(p), p)
    lines = [f"{'quantity':<16}{'computed':>16}{'reported':>12}{'rel.dev':>12}"]
    for key, reported in REPORTED_DIAGNOSTICS.items():
        computed = float(diag[key])
        rel = abs(computed - reported) / abs(reported)
        lines.append(f"{key:<16}{computed:>16.6g}{reported:>12.4g}{rel:>12.2e}")
    return "\n".join(lines) + "\n"


def cmd_solve(args) -> int:
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.get("seed")
    if seed is None:
        raise CliError("solve requires --seed (or a seed in the config)", EXIT_INVALID_INPUT)
    validity = ValidityConstraints(**cfg.get("validity", {}))
    search_keys = ("samples", "domain", "eta0", "shrink_factor", "stall_threshold")
    overrides = {k: cfg[k] for k in search_keys if k in cfg}
    if "domain" in overrides:
        overrides["domain"] = tuple(overrides["domain"])
    p = Precision(mantissa_bits=max(256, resolve_precision(args, cfg).mantissa_bits))

    if args.init == "paper-root":
        with p.active():
            refined, history = newton_refine(reference_root(p), p, tol=1e-30, max_iter=10)
        point = refined
        norm = float(history[-1])
        log = {
            "init": "paper-root",
            "newton_refine": {"residual_norms": [float(h) for h in history]},
            "seed": int(seed),
        }
    else:
        result = search_pipeline(
            int(seed), SearchConfig(seed=int(seed), **overrides), validity, refine_precision=p
        )
        point, norm, log = result.point, result.norm, result.stage_log

    payload = {
        "point": [real_to_str(t, p) for t in point],
        "residual_norm": real_to_str(norm, DOUBLE),
        "orbit": [[real_to_str(t, p) for t in el] for el in symmetry_orbit(point)],
        "seed": int(seed),
        "stage_log": log,
    }
    emit(args, canonical_json(payload))
    return EXIT_OK if norm <= SOLVE_SUCCESS_NORM else EXIT_MATH_FAILURE


def cmd_certify(args) -> int:
    cfg = load_config(args.config)
    p = Precision(mantissa_bits=max(256, resolve_precision(args, cfg).mantissa_bits))
    if not (0 < args.radius <= 0.5):
        raise CliError("radius must lie in (0, 0.5]", EXIT_INVALID_INPUT)
    root = resolve_root(args, p)
    cert = certify(root, args.radius, strategy=args.strategy, p=p)
    emit(args, cert.to_canonical_json(p))
    if args.compare_paper:
        sys.stdout.write(compare_paper_table(p))
    return EXIT_OK if cert.verdict else EXIT_MATH_FAILURE


def cmd_dispersion(args) -> int:
    cfg = load_config(args.config)
    p = Precision(mantissa_bits=max(256, resolve_precision(args, cfg).mantissa_bits))
    root = polished_root(resolve_root(args, p), p)
    word = Word.alternating4(root)
    tj = trace_jet(word_jet(word, args.order or 12, p))
    th = theta_jet(tj, p)
    k, deriv = flatness_order(th, default_flatness_tol(p))
    with p.active():
        sidecar = {
            "theta0": real_to_str(th.coeffs[0].real, p),
            "k": k,
            "theta_k0": real_to_str(deriv, p),
            "s0": real_to_str(-th.coeffs[1].real, p),
        }
    grid = theta_grid(word, args.xi_max, args.grid, DOUBLE)
    rows = [
        (real_to_str(float(x), DOUBLE), real_to_str(float(t), DOUBLE), real_to_str(float(f), DOUBLE))
        for x, t, f in grid
    ]
    emit(args, csv_text(("xi", "theta", "F"), rows))
    sidecar_path = (args.out or "dispersion") + ".meta.json" if args.out else None
    if sidecar_path:
        atomic_write(sidecar_path, canonical_json(sidecar))
    else:
        sys.stdout.write(canonical_json(sidecar))
    return EXIT_OK


def cmd_decay(args) -> int:
    cfg = load_config(args.config)
    p = Precision(mantissa_bits=max(256, resolve_precision(args, cfg).mantissa_bits))
    n_list = sorted({int(round(float(n))) for n in args.n_list.split(",")})
    if len(n_list) < 5:
        raise CliError("--n-list needs at least 5 increasing values", EXIT_INVALID_INPUT)
    root = polished_root(resolve_root(args, p), p)
    word = Word.alternating4([float(t) for t in root])  # double path for quadrature
    tj = trace_jet(word_jet(Word.alternating4(root), 12, p))
    th = theta_jet(tj, p)
    k, deriv = flatness_order(th, default_flatness_tol(p))
    theta0 = float(th.coeffs[0].real)
    theta_k0 = float(deriv)
    b = args.bump_width if args.bump_width is not None else default_bump_halfwidth(word, k, theta_k0)
    bump = BumpProfile(half_width=b)
    rows = []
    samples = []
    for n in n_list:
        ip, im = oscillatory_amplitude(word, bump, n)
        pred = amplitude_prediction(k, theta_k0, bump, n, theta0)
        rows.append((n, real_to_str(abs(ip), DOUBLE), real_to_str(abs(im), DOUBLE), real_to_str(pred, DOUBLE)))
        samples.append((n, abs(ip)))
    fit = decay_fit(samples)
    emit(args, csv_text(("n", "amplitude_plus", "amplitude_minus", "prediction"), rows))
    fit_payload = canonical_json(
        {
            "slope": real_to_str(fit.slope, DOUBLE),
            "intercept": real_to_str(fit.intercept, DOUBLE),
            "r2": real_to_str(fit.r_squared, DOUBLE),
            "k": k,
            "bump_half_width": real_to_str(b, DOUBLE),
        }
    )
    if args.out:
        atomic_write(args.out + ".fit.json", fit_payload)
    else:
        sys.stdout.write(fit_payload)
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slowdisp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--precision-bits", type=int, dest="precision_bits")
        sp.add_argument("--out", help="output file (stdout if omitted)")
        sp.add_argument("--threads", type=int, default=1, help="parallelism bound (>=1)")

    sp = sub.add_parser("jet", help="even trace coefficients of a word")
    common(sp)
    sp.add_argument("--word", help="'paper-root' or JSON {signs, durations}")
    sp.add_argument("--order", type=int)
    sp.add_argument("--compare-paper", action="store_true", dest="compare_paper")
    sp.set_defaults(func=cmd_jet)

    sp = sub.add_parser("solve", help="search for a flat word")
    common(sp)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--init", help="'paper-root' to skip search and Newton-refine directly")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("certify", help="certificate for a root file")
    common(sp)
    sp.add_argument("--root", help="root JSON file or 'paper-root'")
    sp.add_argument("--radius", type=float, required=True)
    sp.add_argument("--strategy", choices=("analytic", "sampled"), default="analytic")
    sp.add_argument("--compare-paper", action="store_true", dest="compare_paper")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("dispersion", help="theta grid and flatness classification")
    common(sp)
    sp.add_argument("--root", help="root JSON file or 'paper-root'")
    sp.add_argument("--order", type=int)
    sp.add_argument("--xi-max", type=float, default=0.5, dest="xi_max")
    sp.add_argument("--grid", type=int, default=101)
    sp.set_defaults(func=cmd_dispersion)

    sp = sub.add_parser("decay", help="amplitude decay vs period count")
    common(sp)
    sp.add_argument("--root", help="root JSON file or 'paper-root'")
    sp.add_argument("--n-list", default="1000,3162,10000,31623,100000", dest="n_list")
    sp.add_argument("--bump-width", type=float, dest="bump_width")
    sp.set_defaults(func=cmd_decay)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_INVALID_INPUT
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except (InternalConsistencyError, BranchDegeneracyError, QuadratureAccuracyError) as exc:
        print(f"internal accuracy failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except SlowdispError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_MATH_FAILURE


if __name__ == "__main__":
    sys.exit(main())
