"""Roots of the flatness residual H = (a2, a4, a6, a8).

Three stages, matching how the construction was actually found: uniform
random sampling over [0, 2pi]^4 with validity filtering, stochastic descent
with a shrinking step amplitude, and Newton refinement at high precision.
The search stages run in hardware doubles; refinement should run at >= 256
bits since the interesting residuals sit at the edge of double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import ConditioningError, NoCandidateError, NonConvergenceError
from .monodromy import Word, trace_jet, word_jet, word_t_jacobian_jet
from .precision import DOUBLE, QUAD256, Precision

RESIDUAL_ORDER = 8  # jets need coefficients through xi^8 only
ETA_MIN = 1e-12
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class ValidityConstraints:
    """Keeps samples away from the degenerate strata t -> 0 and F(0) = +-1."""

    min_duration: float = 0.3
    min_abs_alt_sum: float = 0.1

    def __post_init__(self):
        if self.min_duration <= 0 or self.min_abs_alt_sum <= 0:
            raise ValueError("validity constraints must be positive")

    def is_valid(self, point) -> bool:
        t1, t2, t3, t4 = point
        if min(point) < self.min_duration:
            return False
        return abs(t1 - t2 + t3 - t4) >= self.min_abs_alt_sum


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    samples: int = 1000
    domain: tuple[float, float] = (0.0, 2 * math.pi)
    eta0: float = 0.5
    shrink_factor: float = 0.5
    stall_threshold: int = 200

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not self.domain[0] < self.domain[1]:
            raise ValueError("domain must be an increasing interval")
        if not 0 < self.eta0 < 1:
            raise ValueError("eta0 must lie in (0, 1)")
        if not 0 < self.shrink_factor < 1:
            raise ValueError("shrink_factor must lie in (0, 1)")
        if self.stall_threshold < 1:
            raise ValueError("stall_threshold must be >= 1")


@dataclass(frozen=True)
class FlatnessResidual:
    """H(point) together with its exact Jacobian d a_{2i} / d t_j."""

    point: tuple
    residual: tuple
    jacobian: tuple  # 4 rows, row i = gradient of a_{2(i+1)}
    norm: object

    def gradient(self, i: int) -> tuple:
        """Gradient of a_{2(i+1)} over the four durations."""
        return self.jacobian[i]


def _alternating_word(point) -> Word:
    return Word.alternating4(tuple(point))


def residual_norm(point, p: Precision = DOUBLE):
    """||H(point)|| without the Jacobian (fast path for the search stages)."""
    tj = trace_jet(word_jet(_alternating_word(point), RESIDUAL_ORDER, p))
    with p.active():
        return p.sqrt(sum(tj.even_coefficients[k] ** 2 for k in (1, 2, 3, 4)))


def residual(point, p: Precision = DOUBLE) -> FlatnessResidual:
    """H(point) and its Jacobian from generator-insertion derivatives."""
    point = tuple(point)
    if any(not t > 0 for t in point):
        raise ValueError("durations must be positive")
    word = _alternating_word(point)
    with p.active():
        tj = trace_jet(word_jet(word, RESIDUAL_ORDER, p))
        res = tuple(tj.even_coefficients[k] for k in (1, 2, 3, 4))
        deriv_jets = word_t_jacobian_jet(word, RESIDUAL_ORDER, p)
        half_traces = [dj.half_trace_jet() for dj in deriv_jets]
        jac = tuple(
            tuple(half_traces[j].coeffs[2 * i].real for j in range(4)) for i in (1, 2, 3, 4)
        )
        nrm = linalg.vector_norm(res, p)
    return FlatnessResidual(point=point, residual=res, jacobian=jac, norm=nrm)


_FFT_POINTS = 64
_FFT_RADIUS = 0.4
_FFT_NODES = _FFT_RADIUS * np.exp(2j * np.pi * np.arange(_FFT_POINTS) / _FFT_POINTS)
_FFT_SCALE = _FFT_RADIUS ** np.array([2, 4, 6, 8])


def _fast_residual_norm(point) -> float:
    """Double-precision ||H|| via trace samples on a complex circle.

    F is analytic for |xi| < 1, so its Taylor coefficients come out of an
    M-point DFT on |xi| = 0.4 with aliasing error ~ |a_{k+M}| 0.4^M, far below
    the 1e-10 scale the search stages care about.  Used only inside
    random_search / stochastic_descent; residual() stays on the jet path.
    """
    xi = _FFT_NODES
    om = np.sqrt(1.0 + xi * xi)
    u11 = np.ones_like(xi)
    u12 = np.zeros_like(xi)
    u21 = np.zeros_like(xi)
    u22 = np.ones_like(xi)
    for sign, t in zip((1.0, -1.0, 1.0, -1.0), point):
        c = np.cos(om * t)
        s = np.sin(om * t) / om
        a11 = c + 1j * s * xi
        a22 = c - 1j * s * xi
        aoff = 1j * sign * s
        n11 = a11 * u11 + aoff * u21
        n12 = a11 * u12 + aoff * u22
        n21 = aoff * u11 + a22 * u21
        n22 = aoff * u12 + a22 * u22
        u11, u12, u21, u22 = n11, n12, n21, n22
    f = 0.5 * (u11 + u22)
    coeffs = np.fft.fft(f) / _FFT_POINTS
    h = coeffs[[2, 4, 6, 8]].real / _FFT_SCALE
    return float(np.sqrt(np.sum(h * h)))


def random_search(cfg: SearchConfig, v: ValidityConstraints, p: Precision = DOUBLE):
    """Best valid point among cfg.samples uniform draws; deterministic in seed.

    Returns (point, norm).  Raises NoCandidateError if no draw is valid.
    """
    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    lo, hi = cfg.domain
    evaluate = _fast_residual_norm if p.is_double else lambda pt: float(residual_norm(pt, p))
    best_point, best_norm = None, None
    for _ in range(cfg.samples):
        cand = rng.uniform(lo, hi, size=4)
        if not v.is_valid(cand):
            continue
        nrm = evaluate(tuple(cand))
        if best_norm is None or nrm < best_norm:
            best_point, best_norm = tuple(cand), nrm
    if best_point is None:
        raise NoCandidateError(f"no valid sample among {cfg.samples} draws (seed {cfg.seed})")
    return best_point, best_norm


def stochastic_descent(
    start,
    cfg: SearchConfig,
    v: ValidityConstraints,
    p: Precision = DOUBLE,
    target_norm: float | None = None,
):
    """Random perturbation descent with strict-decrease acceptance.

    The step amplitude eta halves after stall_threshold consecutive
    rejections and the loop stops once eta < 1e-12 (or the optional
    target_norm is reached).  Returns (point, norm, accepted_norms).
    """
    if not v.is_valid(start):
        raise ValueError("start point violates validity constraints")
    rng = np.random.Generator(np.random.Philox(key=cfg.seed).jumped(1))
    evaluate = _fast_residual_norm if p.is_double else lambda pt: float(residual_norm(pt, p))
    x = np.asarray(start, dtype=float)
    fx = evaluate(tuple(x))
    eta = cfg.eta0
    stall = 0
    accepted = [fx]
    while eta >= ETA_MIN:
        if target_norm is not None and fx <= target_norm:
            break
        gamma = rng.uniform(-eta, eta, size=4)
        cand = x + gamma
        ok = v.is_valid(cand)
        if ok:
            fc = evaluate(tuple(cand))
            if fc < fx:
                x, fx = cand, fc
                accepted.append(fx)
                stall = 0
                continue
        stall += 1
        if stall >= cfg.stall_threshold:
            eta *= cfg.shrink_factor
            stall = 0
    return tuple(x), fx, accepted


def newton_refine(start, p: Precision = QUAD256, tol=1e-30, max_iter: int = 20):
    """Newton iteration on H; returns (point, residual_norms).

    Raises ConditioningError if the Jacobian condition number exceeds 1e12
    and NonConvergenceError if max_iter steps do not reach tol.
    """
    with p.active():
        x = [p.real(t) for t in start]
        history = []
        for _ in range(max_iter):
            if any(not t > 0 for t in x):
                raise NonConvergenceError("Newton iterate left the positive-duration domain")
            fr = residual(tuple(x), p)
            history.append(fr.norm)
            if linalg.condition_number(fr.jacobian, p) > MAX_CONDITION:
                raise ConditioningError("Jacobian condition number exceeds 1e12")
            if fr.norm <= p.real(tol):
                return tuple(x), history
            step = linalg.solve(fr.jacobian, fr.residual, p)
            x = [xi - si for xi, si in zip(x, step)]
        if any(not t > 0 for t in x):
            raise NonConvergenceError("Newton iterate left the positive-duration domain")
        fr = residual(tuple(x), p)
        history.append(fr.norm)
        if fr.norm <= p.real(tol):
            return tuple(x), history
    raise NonConvergenceError(
        f"Newton did not reach tol={tol} in {max_iter} iterations (last ||H||={float(history[-1]):.3e})"
    )


def symmetry_orbit(point):
    """The 4 cyclic shifts of (t1..t4) and their reversals, 8 points total."""
    t = tuple(point)
    out = []
    for s in range(4):
        shift = t[s:] + t[:s]
        out.append(shift)
    for s in range(4):
        shift = t[s:] + t[:s]
        out.append(tuple(reversed(shift)))
    return out


@dataclass
class PipelineResult:
    point: tuple
    norm: float
    stage_log: dict = field(default_factory=dict)
    converged: bool = False


def search_pipeline(
    seed: int,
    cfg: SearchConfig | None = None,
    v: ValidityConstraints | None = None,
    refine_precision: Precision = QUAD256,
    newton_tol=1e-30,
    descent_target: float = 1e-10,
) -> PipelineResult:
    """random_search -> stochastic_descent -> newton_refine, with a stage log."""
    cfg = cfg if cfg is not None else SearchConfig(seed=seed)
    if cfg.seed != seed:
        cfg = SearchConfig(
            seed=seed,
            samples=cfg.samples,
            domain=cfg.domain,
            eta0=cfg.eta0,
            shrink_factor=cfg.shrink_factor,
            stall_threshold=cfg.stall_threshold,
        )
    v = v if v is not None else ValidityConstraints()
    log: dict = {"seed": seed}
    start, start_norm = random_search(cfg, v)
    log["random_search"] = {"point": list(start), "norm": start_norm}
    mid, mid_norm, accepted = stochastic_descent(start, cfg, v, target_norm=descent_target)
    log["stochastic_descent"] = {
        "point": list(mid),
        "norm": mid_norm,
        "accepted_steps": len(accepted) - 1,
    }
    try:
        refined, history = newton_refine(mid, refine_precision, tol=newton_tol)
        final_norm = float(history[-1])
        log["newton_refine"] = {
            "point": [float(t) for t in refined],
            "residual_norms": [float(h) for h in history],
        }
        return PipelineResult(point=refined, norm=final_norm, stage_log=log, converged=True)
    except (ConditioningError, NonConvergenceError) as exc:
        log["newton_refine"] = {"error": str(exc)}
        return PipelineResult(point=mid, norm=mid_norm, stage_log=log, converged=False)
