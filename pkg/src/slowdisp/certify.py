"""Newton-Kantorovich certification of an approximate root.

Checks, at an approximate root x0 of H = (a2, a4, a6, a8):

  1. alpha := bound on ||DH(x0)^-1 H(x0)|| is small (<= alpha_max),
  2. a Lipschitz parameter omega_bar for DH on the ball B(x0, r) is valid,
  3. alpha * omega_bar <= 1/2,
  4. omega_bar^-1 (1 - sqrt(1 - 2 alpha omega_bar)) <= r.

All four holding (with the analytic Lipschitz bound) guarantees Newton's
method started in B(x0, r) converges to an actual root, i.e. the root
exists.  Comparisons use outward rounding: each left-hand side is inflated
by (1 + 1e-10) before comparing, which is orders of magnitude cruder than
the working precision but still far inside the margins involved.

The analytic Lipschitz bound omega_bar = 1e8 * r holds for r <= 0.5 and is
specific to alternating four-letter words; the sampled bound is an
empirical diagnostic and never yields a rigorous verdict.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from mpmath import mp

from . import linalg, solver
from .errors import ConditioningError
from .precision import DOUBLE, QUAD256, Precision

OUTWARD = 1e-10  # relative inflation applied to every certified comparison
ALPHA_MAX = 1e-13
LIPSCHITZ_SLOPE = 1e8
LIPSCHITZ_MAX_RADIUS = 0.5


def real_to_str(x, p: Precision) -> str:
    """Full-precision decimal string for a real scalar."""
    if p.is_double:
        return repr(float(x))
    with p.active():
        digits = int(p.mantissa_bits * 0.30103) + 3
        return mp.nstr(mp.mpf(x), digits, strip_zeros=False)


def compute_alpha(x0, p: Precision = QUAD256):
    """Upper bound on ||DH(x0)^-1 H(x0)|| via the product of norms.

    Outward-rounds both factors; always >= the directly solved value.
    """
    fr = solver.residual(tuple(x0), p)
    with p.active():
        inv_norm = linalg.inverse_spectral_norm(fr.jacobian, p)
        return inv_norm * (1 + p.real(OUTWARD)) * fr.norm * (1 + p.real(OUTWARD))


def lipschitz_bound_analytic(r) -> float:
    """omega_bar = 1e8 * r, valid for ball radii r <= 0.5."""
    if not 0 < r <= LIPSCHITZ_MAX_RADIUS:
        raise ValueError(f"analytic Lipschitz bound requires 0 < r <= {LIPSCHITZ_MAX_RADIUS}, got {r}")
    return LIPSCHITZ_SLOPE * r


def lipschitz_bound_sampled(x0, r, n_pairs: int = 200, seed: int = 0, p: Precision = DOUBLE):
    """Empirical max of ||DH(x) - DH(y)|| / ||x - y|| over pairs in B(x0, r).

    Diagnostic only; never feeds a rigorous verdict.
    """
    if n_pairs < 100:
        raise ValueError("n_pairs must be >= 100")
    rng = np.random.Generator(np.random.Philox(key=seed))
    center = np.asarray([float(t) for t in x0])
    worst = 0.0
    for _ in range(n_pairs):
        pair = []
        while len(pair) < 2:
            d = rng.uniform(-r, r, size=4)
            if np.linalg.norm(d) <= r:
                pair.append(center + d)
        x, y = pair
        sep = float(np.linalg.norm(x - y))
        if sep == 0.0:
            continue
        jx = np.asarray(solver.residual(tuple(x), p).jacobian, dtype=float)
        jy = np.asarray(solver.residual(tuple(y), p).jacobian, dtype=float)
        ratio = float(np.linalg.norm(jx - jy, 2)) / sep
        worst = max(worst, ratio)
    return worst


@dataclass(frozen=True)
class Certificate:
    x0: tuple
    alpha: object
    omega_bar: object
    radius: object
    conditions: dict  # alpha_bound, lipschitz_valid, product, radius
    strategy: str
    precision_bits: int
    verdict: bool

    def to_dict(self, p: Precision) -> dict:
        return {
            "x0": [real_to_str(t, p) for t in self.x0],
            "alpha": real_to_str(self.alpha, p),
            "omega_bar": real_to_str(self.omega_bar, p),
            "radius": real_to_str(self.radius, p),
            "conditions": dict(sorted(self.conditions.items())),
            "strategy": self.strategy,
            "precision_bits": self.precision_bits,
            "verdict": self.verdict,
        }

    def to_canonical_json(self, p: Precision) -> str:
        return json.dumps(self.to_dict(p), sort_keys=True, indent=2) + "\n"


def certify(
    x0,
    r,
    strategy: str = "analytic",
    p: Precision = QUAD256,
    alpha_max: float = ALPHA_MAX,
    lipschitz_pairs: int = 200,
    lipschitz_seed: int = 0,
) -> Certificate:
    """Evaluate the four certificate conditions at x0 with ball radius r."""
    if strategy not in ("analytic", "sampled"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "analytic":
        omega_bar = lipschitz_bound_analytic(r)  # raises outside (0, 0.5]
        lipschitz_valid = True
    else:
        omega_bar = lipschitz_bound_sampled(x0, r, n_pairs=lipschitz_pairs, seed=lipschitz_seed)
        lipschitz_valid = False  # empirical, not a proof
    alpha = compute_alpha(x0, p)
    with p.active():
        a = p.real(alpha)
        w = p.real(omega_bar)
        out = 1 + p.real(OUTWARD)
        alpha_bound = a * out <= p.real(alpha_max)
        product = a * w * out <= p.real(0.5)
        if 2 * a * w <= 1:
            newton_radius = (1 - p.sqrt(1 - 2 * a * w)) / w
            radius_ok = bool(newton_radius * out <= p.real(r))
        else:
            radius_ok = False
    conditions = {
        "alpha_bound": bool(alpha_bound),
        "lipschitz_valid": lipschitz_valid,
        "product": bool(product),
        "radius": radius_ok,
    }
    verdict = all(conditions.values()) and strategy == "analytic"
    return Certificate(
        x0=tuple(x0),
        alpha=alpha,
        omega_bar=omega_bar,
        radius=r,
        conditions=conditions,
        strategy=strategy,
        precision_bits=p.mantissa_bits,
        verdict=verdict,
    )


def radius_flip_boundary(x0, p: Precision = QUAD256, lo=1e-16, hi=LIPSCHITZ_MAX_RADIUS):
    """Smallest radius in [lo, hi] where the radius condition holds (bisection).

    The feasible set of the radius condition is an interval ending at the
    Lipschitz domain edge; this reports its left boundary.
    """

    def ok(r):
        return certify(x0, r, "analytic", p).conditions["radius"]

    if not ok(hi):
        return None
    if ok(lo):
        return lo
    with p.active():
        a, b = p.real(lo), p.real(hi)
        for _ in range(200):
            mid = p.sqrt(a * b)
            if ok(mid):
                b = mid
            else:
                a = mid
        return b


def gradient_diagnostics(x0, p: Precision = QUAD256) -> dict:
    """Gradient norms, normalized-gradient determinant, ||DH||, ||DH^-1||."""
    fr = solver.residual(tuple(x0), p)
    with p.active():
        grads = [fr.gradient(i) for i in range(4)]
        norms = [linalg.vector_norm(g, p) for g in grads]
        if any(n == 0 for n in norms):
            raise ConditioningError("zero gradient in diagnostics")
        # normalized gradients as columns
        cols = [[grads[i][j] / norms[i] for i in range(4)] for j in range(4)]
        return {
            "grad_norm_a2": norms[0],
            "grad_norm_a4": norms[1],
            "grad_norm_a6": norms[2],
            "grad_norm_a8": norms[3],
            "normalized_det": linalg.determinant(cols, p),
            "dh_norm": linalg.spectral_norm(fr.jacobian, p),
            "dh_inv_norm": linalg.inverse_spectral_norm(fr.jacobian, p),
            "residual_norm": fr.norm,
        }
