"""Floquet angle, flatness order, and dispersive decay diagnostics.

From a word this module extracts the angle theta(xi) with eigenvalues
exp(+-i theta) of the monodromy matrix, its jet about xi = 0 (via series
inversion of cos about theta(0)), the flatness order k (smallest j >= 2 with
theta^(j)(0) != 0), pointwise theta grids with branch continuity, direct
oscillatory-integral amplitudes, the stationary-phase leading-order
prediction, and power-law decay fits: the amplitude of band-limited data
after n periods scales like n^(-1/k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BranchDegeneracyError,
    DegenerateSpectrumError,
    IndeterminateOrderError,
    InternalConsistencyError,
    QuadratureAccuracyError,
)
from .jets import TruncatedJet, jet_mul, jet_reciprocal, jet_sqrt
from .monodromy import TraceJet, UnitaryMatrix2, Word, trace_jet, word_at, word_jet
from .precision import DOUBLE, QUAD256, Precision

DEFAULT_ORDER = 12
BUMP_HALFWIDTH_CAP = 0.2


def default_flatness_tol(p: Precision) -> float:
    return 1e-15 if p.is_double else 1e-40


# -- the angle jet ------------------------------------------------------------


def theta_jet(tj: TraceJet, p: Precision) -> TruncatedJet:
    """Jet of theta = arccos(F) about xi = 0, theta(0) in (0, pi).

    Valid only when |a0| < 1 (distinct eigenvalues); computed through
    theta' = -F' / sqrt(1 - F^2) and termwise integration, which keeps the
    inversion exact to the jet order.
    """
    f = tj.raw_jet
    a0 = tj.a0
    with p.active():
        if abs(a0) >= 1 - 10 * p.abs_tol:
            raise BranchDegeneracyError(f"|F(0)| = {float(abs(a0)):.6g} too close to 1")
        one = TruncatedJet.constant(1, f.order, p)
        g = one + (-jet_mul(f, f))  # 1 - F^2, constant term sin^2(theta0) > 0
        s = jet_sqrt(g)
        dtheta = jet_mul(-f.derivative(), jet_reciprocal(s))
        theta0 = p.acos(p.real(a0))
        return dtheta.antiderivative(theta0)


def flatness_order(theta: TruncatedJet, tol: float):
    """Smallest j >= 2 with |theta^(j)(0)| > tol, and that derivative's value."""
    if theta.order < 4:
        raise IndeterminateOrderError("jet order too small to classify flatness")
    p = theta.precision
    with p.active():
        fact = p.real(2)
        for j in range(2, theta.order - 1):
            if j > 2:
                fact = fact * j
            deriv = theta.coeffs[j].real * fact
            if abs(deriv) > tol:
                return j, deriv
    raise IndeterminateOrderError(
        f"all derivatives through order {theta.order - 2} are below tol={tol}; jet too short"
    )


# -- pointwise angle -----------------------------------------------------------


def trace_values(word: Word, xi: np.ndarray) -> np.ndarray:
    """Vectorized F(xi) = half-trace of the word, double precision."""
    xi = np.asarray(xi, dtype=float)
    om = np.sqrt(1.0 + xi * xi)
    u11 = np.ones(xi.shape, dtype=np.complex128)
    u12 = np.zeros(xi.shape, dtype=np.complex128)
    u21 = np.zeros(xi.shape, dtype=np.complex128)
    u22 = np.ones(xi.shape, dtype=np.complex128)
    for sign, t in zip(word.signs, word.durations):
        t = float(t)
        c = np.cos(om * t)
        s = np.sin(om * t) / om
        a11 = c + 1j * s * xi
        a22 = c - 1j * s * xi
        aoff = 1j * sign * s
        u11, u12, u21, u22 = (
            a11 * u11 + aoff * u21,
            a11 * u12 + aoff * u22,
            aoff * u11 + a22 * u21,
            aoff * u12 + a22 * u22,
        )
    f = 0.5 * (u11 + u22)
    return f.real


def theta_grid(word: Word, xi_max: float, n_points: int, p: Precision = DOUBLE):
    """(xi, theta, F) samples on [-xi_max, xi_max], branch unwrapped from xi=0.

    Runs at the backend of p; high precision matters when resolving
    |theta(xi) - theta(0)| at the 1e-30 scale near a flat root.
    """
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    with p.active():
        xs = [p.real(-xi_max) + p.real(2 * xi_max) * i / (n_points - 1) for i in range(n_points)]
        f_of = lambda x: word_at(word, x, p).half_trace().real
        theta0 = _acos_checked(f_of(p.real(0)), p)
        # unwrap outward from the center for each half of the grid
        order = sorted(range(n_points), key=lambda i: (abs(float(xs[i])), float(xs[i])))
        theta_vals = [None] * n_points
        fvals = [None] * n_points
        prev_pos = prev_neg = theta0
        for i in order:
            fv = f_of(xs[i])
            fvals[i] = fv
            prev = prev_pos if float(xs[i]) >= 0 else prev_neg
            th = _nearest_branch(_acos_checked(fv, p), prev, p)
            theta_vals[i] = th
            if float(xs[i]) >= 0:
                prev_pos = th
            if float(xs[i]) <= 0:
                prev_neg = th
        return list(zip(xs, theta_vals, fvals))


def _acos_checked(f, p: Precision):
    with p.active():
        if abs(f) > 1 + 10 * p.abs_tol:
            raise InternalConsistencyError(f"|F| = {float(abs(f)):.6g} exceeds 1 beyond tolerance")
        f = max(p.real(-1), min(p.real(1), p.real(f)))
        return p.acos(f)


def _nearest_branch(base, prev, p: Precision):
    """Pick 2*pi*k +- base closest to prev."""
    with p.active():
        two_pi = 2 * (p.acos(p.real(-1)))
        best = None
        for k in range(-2, 3):
            for cand in (two_pi * k + base, two_pi * k - base):
                if best is None or abs(cand - prev) < abs(best - prev):
                    best = cand
        return best


# -- diagonalization ------------------------------------------------------------


def diagonalizer(u: UnitaryMatrix2):
    """Unitary P and angle theta in (0, pi) with P* U P = diag(e^{i theta}, e^{-i theta}).

    Column phases fixed by making the first nonzero entry of each eigenvector
    real positive.
    """
    m = u.to_numpy()
    half_trace = (m[0, 0] + m[1, 1]).real / 2.0
    if abs(half_trace) >= 1.0 - 1e-12:
        raise DegenerateSpectrumError(f"|half trace| = {abs(half_trace):.6g}: eigenvalues collide")
    theta = math.acos(half_trace)
    cols = []
    for lam in (np.exp(1j * theta), np.exp(-1j * theta)):
        # (m - lam) v = 0; take the more robust of the two row constructions
        v1 = np.array([m[0, 1], lam - m[0, 0]])
        v2 = np.array([lam - m[1, 1], m[1, 0]])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        v = v / np.linalg.norm(v)
        # phase convention
        idx = 0 if abs(v[0]) > 1e-14 else 1
        phase = v[idx] / abs(v[idx])
        cols.append(v / phase)
    pmat = np.column_stack(cols)
    return (
        UnitaryMatrix2(((pmat[0, 0], pmat[0, 1]), (pmat[1, 0], pmat[1, 1])), DOUBLE),
        theta,
    )


# -- profiles -------------------------------------------------------------------


@dataclass(frozen=True)
class DispersionProfile:
    word: Word
    theta0: object
    theta_taylor: TruncatedJet
    flatness_k: int
    leading_derivative: object  # theta^(k)(0)
    group_velocity: object  # s0 = -theta'(0)
    grid: list


def dispersion_profile(
    word: Word,
    p: Precision = QUAD256,
    order: int = DEFAULT_ORDER,
    xi_max: float = 0.5,
    n_points: int = 41,
    tol: float | None = None,
) -> DispersionProfile:
    tol = default_flatness_tol(p) if tol is None else tol
    tj = trace_jet(word_jet(word, order, p))
    th = theta_jet(tj, p)
    k, deriv = flatness_order(th, tol)
    with p.active():
        s0 = -th.coeffs[1].real
    grid = theta_grid(word, xi_max, n_points, DOUBLE)
    return DispersionProfile(
        word=word,
        theta0=th.coeffs[0].real,
        theta_taylor=th,
        flatness_k=k,
        leading_derivative=deriv,
        group_velocity=s0,
        grid=grid,
    )


def flatness_exponent(word: Word, xi_lo: float, xi_hi: float, n_points: int = 17, p: Precision = QUAD256):
    """Log-log slope of |theta(xi) - theta(0)| over log-spaced xi in [xi_lo, xi_hi].

    Needs high precision: near a 10-flat root the signal at xi = 1e-3 sits
    thirty decades below theta itself.
    """
    with p.active():
        theta0 = _acos_checked(word_at(word, p.real(0), p).half_trace().real, p)
        xs, ys = [], []
        for i in range(n_points):
            lg = math.log10(xi_lo) + (math.log10(xi_hi) - math.log10(xi_lo)) * i / (n_points - 1)
            xi = p.real(10.0) ** p.real(lg)
            th = _acos_checked(word_at(word, xi, p).half_trace().real, p)
            delta = abs(th - theta0)
            if delta == 0:
                continue
            import mpmath as _mp

            xs.append(float(_mp.log(xi, 10)))
            ys.append(float(_mp.log(delta, 10)))
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


# -- bump data and oscillatory amplitudes -----------------------------------------


@dataclass(frozen=True)
class BumpProfile:
    """Compactly supported mollifier psi(xi) = exp(1 - 1/(1 - (xi/b)^2)), psi(0)=1."""

    half_width: float
    weight_plus: complex = 1.0 + 0j
    weight_minus: complex = 1.0 + 0j

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")

    def value(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        out = np.zeros(xi.shape)
        u = xi / self.half_width
        inside = np.abs(u) < 1.0
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
        return out

    def integral(self) -> float:
        """Plain integral of psi over its support (no phase)."""
        nodes, weights = np.polynomial.legendre.leggauss(200)
        xi = nodes * self.half_width
        return float(np.sum(weights * self.value(xi)) * self.half_width)


def default_bump_halfwidth(word: Word, k: int, theta_k0: float, cap: float = BUMP_HALFWIDTH_CAP) -> float:
    """Largest radius where the rescaled flatness ratio stays above half its
    center value, capped.

    Uses the safeguarded grid proxy g(xi) = k! (theta(xi) - theta0) / xi^k
    for theta^(k) near 0.
    """
    xs = np.linspace(0.02, 1.0, 99)
    f0 = trace_values(word, np.zeros(1))[0]
    theta0 = math.acos(min(1.0, max(-1.0, f0)))
    fv = trace_values(word, xs)
    if np.max(np.abs(fv)) >= 1.0:
        valid = np.abs(fv) < 1.0
    else:
        valid = np.ones(xs.shape, dtype=bool)
    th = np.arccos(np.clip(fv, -1.0, 1.0))
    g = math.factorial(k) * (th - theta0) / xs**k
    ok = valid & (np.abs(g) >= 0.5 * abs(theta_k0))
    b = cap
    for x, good in zip(xs, ok):
        if not good:
            b = min(b, x)
            break
    return min(b, cap)


def _theta_values_for_quadrature(word: Word, xi: np.ndarray, theta0: float) -> np.ndarray:
    f = trace_values(word, xi)
    if np.max(np.abs(f)) > 1 + 1e-9:
        raise InternalConsistencyError("|F| exceeds 1 on the quadrature grid")
    th = np.arccos(np.clip(f, -1.0, 1.0))
    if np.max(np.abs(th - theta0)) > 1.0:
        raise BranchDegeneracyError("angle wanders too far from theta(0) on the bump support")
    return th


def oscillatory_amplitude(
    word: Word,
    bump: BumpProfile,
    n: int,
    x: float = 0.0,
    rel_tol: float = 1e-6,
    max_doublings: int = 12,
    nodes_per_panel: int = 16,
):
    """Direct quadrature of the two phase components of the evolution integral.

    Returns (I_plus, I_minus) with
        I_pm = (1/2pi) * int exp(i(+-n theta(xi) + xi x)) psi(xi) w_pm dxi,
    by panelled Gauss-Legendre with Richardson-style verification: panel
    count doubles until two successive levels agree to rel_tol.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    b = bump.half_width
    f0 = trace_values(word, np.zeros(1))[0]
    theta0 = math.acos(min(1.0, max(-1.0, f0)))
    coarse = np.linspace(-b, b, 513)
    th_coarse = _theta_values_for_quadrature(word, coarse, theta0)
    max_slope = float(np.max(np.abs(np.diff(th_coarse) / np.diff(coarse))))
    width_cap = 2 * math.pi / (10 * n * max_slope + abs(x) + 10.0)
    panels = max(8, int(math.ceil(2 * b / width_cap)))
    gl_nodes, gl_weights = np.polynomial.legendre.leggauss(nodes_per_panel)

    def level(npanels: int):
        edges = np.linspace(-b, b, npanels + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        xi = (mid[:, None] + half[:, None] * gl_nodes[None, :]).ravel()
        w = (half[:, None] * gl_weights[None, :]).ravel()
        th = _theta_values_for_quadrature(word, xi, theta0)
        psi = bump.value(xi)
        base = w * psi
        ip = np.sum(base * np.exp(1j * (n * th + xi * x))) / (2 * math.pi) * bump.weight_plus
        im = np.sum(base * np.exp(1j * (-n * th + xi * x))) / (2 * math.pi) * bump.weight_minus
        return complex(ip), complex(im)

    prev = level(panels)
    for _ in range(max_doublings):
        panels *= 2
        cur = level(panels)
        scale = max(abs(cur[0]), abs(cur[1]), 1e-300)
        diff = max(abs(cur[0] - prev[0]), abs(cur[1] - prev[1]))
        if diff <= rel_tol * scale:
            return cur
        prev = cur
    raise QuadratureAccuracyError(
        f"quadrature did not converge to rel_tol={rel_tol} within budget", achieved=prev
    )


# -- stationary phase ---------------------------------------------------------------


def phase_constant(k: int) -> complex:
    """Half-line monomial-phase constant: k^-1 Gamma(1/k) e^{i pi/(2k)}."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return math.gamma(1.0 / k) / k * complex(math.cos(math.pi / (2 * k)), math.sin(math.pi / (2 * k)))


def stationary_phase_prediction(k: int, theta_k0: float, u0: complex, theta0: float, n: int) -> complex:
    """Leading-order value of int exp(i n lambda(xi)) u(xi) dxi for a k-flat phase.

    lambda(0) = theta0, lambda^(k)(0) = theta_k0, u(0) = u0.  Combines the
    half-line constant with the change-of-variables factor (k!)^{1/k} and the
    two half-lines of an even-order stationary point; a negative leading
    derivative conjugates the phase factor.
    """
    if k % 2 != 0:
        raise ValueError("only even flatness orders are supported")
    if theta_k0 == 0:
        raise ValueError("leading derivative must be nonzero")
    if n < 1:
        raise ValueError("n must be >= 1")
    c = phase_constant(k)
    if theta_k0 < 0:
        c = c.conjugate()
    scale = 2.0 * math.factorial(k) ** (1.0 / k) * (n * abs(theta_k0)) ** (-1.0 / k)
    return complex(math.cos(n * theta0), math.sin(n * theta0)) * c * scale * u0


def amplitude_prediction(k: int, theta_k0: float, bump: BumpProfile, n: int, theta0: float) -> float:
    """|stationary-phase prediction| on the same 1/(2pi) normalization as
    oscillatory_amplitude's plus component."""
    val = stationary_phase_prediction(k, float(theta_k0), complex(bump.weight_plus), float(theta0), n)
    return abs(val) / (2 * math.pi)


# -- decay fits -----------------------------------------------------------------------


@dataclass(frozen=True)
class DecayFitResult:
    n_values: tuple
    amplitudes: tuple
    slope: float
    intercept: float
    r_squared: float


def decay_fit(samples) -> DecayFitResult:
    """Least-squares line through (log n, log amplitude); slope estimates -1/k."""
    samples = list(samples)
    if len(samples) < 5:
        raise ValueError("need at least 5 samples")
    ns = [s[0] for s in samples]
    amps = [s[1] for s in samples]
    if any(a <= 0 for a in amps):
        raise ValueError("amplitudes must be positive")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n values must be strictly increasing")
    lx = np.log(np.asarray(ns, dtype=float))
    ly = np.log(np.asarray(amps, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    fitted = slope * lx + intercept
    ss_res = float(np.sum((ly - fitted) ** 2))
    ss_tot = float(np.sum((ly - np.mean(ly)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return DecayFitResult(
        n_values=tuple(ns),
        amplitudes=tuple(float(a) for a in amps),
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r2,
    )
