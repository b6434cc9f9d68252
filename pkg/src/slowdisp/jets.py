"""Fixed-order truncated Taylor jets in one variable about 0.

A jet of order N stores plain Taylor coefficients c_0..c_N (c_k = f^(k)(0)/k!,
never raw derivatives).  Arithmetic truncates at N.  The double backend keeps
coefficients in a numpy complex array (products via np.convolve); the
multiprecision backend keeps a tuple of mpmath complex numbers.

Besides generic arithmetic this module provides the specific jets used to
assemble piecewise-constant two-level propagators: omega = sqrt(1 + xi^2),
1/omega, cos(t*omega), and sin(t*omega).
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from mpmath import mp

from .precision import DOUBLE, Precision


class TruncatedJet:
    __slots__ = ("coeffs", "precision")

    def __init__(self, coeffs, precision: Precision):
        if precision.is_double:
            arr = np.asarray(coeffs, dtype=np.complex128)
            if not np.all(np.isfinite(arr)):
                raise ValueError("jet coefficients must be finite")
            self.coeffs = arr
        else:
            with precision.active():
                tup = tuple(mp.mpc(c) for c in coeffs)
            if any(mp.isnan(c.real) or mp.isnan(c.imag) or mp.isinf(c.real) or mp.isinf(c.imag) for c in tup):
                raise ValueError("jet coefficients must be finite")
            self.coeffs = tup
        self.precision = precision

    # -- constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, value, order: int, p: Precision) -> "TruncatedJet":
        coeffs = [p.complex_(0)] * (order + 1)
        coeffs[0] = p.complex_(value)
        return cls(coeffs, p)

    @classmethod
    def variable(cls, order: int, p: Precision) -> "TruncatedJet":
        """The jet of xi itself."""
        if order < 1:
            raise ValueError("variable jet needs order >= 1")
        coeffs = [p.complex_(0)] * (order + 1)
        coeffs[1] = p.complex_(1)
        return cls(coeffs, p)

    # -- basic queries ----------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def coefficient_magnitudes(self) -> list[float]:
        return [float(abs(c)) for c in self.coeffs]

    def max_imag(self) -> float:
        return max(float(abs(c.imag)) for c in self.coeffs)

    def max_odd(self) -> float:
        mags = self.coefficient_magnitudes()
        odd = mags[1::2]
        return max(odd) if odd else 0.0

    def max_even(self) -> float:
        mags = self.coefficient_magnitudes()
        return max(mags[0::2])

    def real_coefficients(self):
        return [c.real for c in self.coeffs]

    # -- arithmetic --------------------------------------------------------------

    def _check(self, other: "TruncatedJet"):
        if self.order != other.order:
            raise ValueError(f"jet order mismatch: {self.order} vs {other.order}")
        if self.precision is not other.precision and self.precision != other.precision:
            raise ValueError("jets built at different precisions")

    def __add__(self, other):
        if isinstance(other, TruncatedJet):
            self._check(other)
            if self.precision.is_double:
                return TruncatedJet(self.coeffs + other.coeffs, self.precision)
            with self.precision.active():
                return TruncatedJet([a + b for a, b in zip(self.coeffs, other.coeffs)], self.precision)
        return self + TruncatedJet.constant(other, self.order, self.precision)

    def __sub__(self, other):
        return self + (-other if isinstance(other, TruncatedJet) else -self.precision.complex_(other))

    def __neg__(self):
        if self.precision.is_double:
            return TruncatedJet(-self.coeffs, self.precision)
        with self.precision.active():
            return TruncatedJet([-c for c in self.coeffs], self.precision)

    def __mul__(self, other):
        if isinstance(other, TruncatedJet):
            return jet_mul(self, other)
        if self.precision.is_double:
            return TruncatedJet(self.coeffs * complex(other), self.precision)
        with self.precision.active():
            s = mp.mpc(other)
            return TruncatedJet([c * s for c in self.coeffs], self.precision)

    __rmul__ = __mul__
    __radd__ = __add__

    def shift_up(self) -> "TruncatedJet":
        """Multiply by xi (shift coefficients one degree up, truncating)."""
        coeffs = [self.precision.complex_(0)] + list(self.coeffs[:-1])
        return TruncatedJet(coeffs, self.precision)

    def derivative(self) -> "TruncatedJet":
        """d/dxi, keeping the same order (top coefficient set to 0)."""
        p = self.precision
        coeffs = [(k + 1) * self.coeffs[k + 1] for k in range(self.order)]
        coeffs.append(p.complex_(0))
        return TruncatedJet(coeffs, p)

    def antiderivative(self, constant=0) -> "TruncatedJet":
        """Termwise antiderivative with given constant term, same order."""
        p = self.precision
        coeffs = [p.complex_(constant)]
        for k in range(self.order):
            coeffs.append(self.coeffs[k] / (k + 1))
        return TruncatedJet(coeffs, p)

    def evaluate(self, xi):
        """Horner evaluation at a scalar xi."""
        p = self.precision
        with p.active():
            acc = p.complex_(0)
            x = p.complex_(xi)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc

    def truncation_scale(self, xi: float) -> float:
        """Crude bound C*|xi|^(N+1) on the truncation error from the top coefficient."""
        top = float(abs(self.coeffs[-1]))
        return top * abs(xi) ** (self.order + 1)

    def __repr__(self):
        head = ", ".join(f"{complex(c):.6g}" for c in list(self.coeffs)[:5])
        tail = ", ..." if self.order > 4 else ""
        return f"TruncatedJet(order={self.order}, [{head}{tail}])"


def jet_mul(a: TruncatedJet, b: TruncatedJet) -> TruncatedJet:
    """Cauchy product truncated at the common order."""
    a._check(b)
    n = a.order
    p = a.precision
    if p.is_double:
        full = np.convolve(a.coeffs, b.coeffs)
        return TruncatedJet(full[: n + 1], p)
    with p.active():
        coeffs = []
        for k in range(n + 1):
            s = mp.mpc(0)
            for i in range(k + 1):
                s += a.coeffs[i] * b.coeffs[k - i]
            coeffs.append(s)
        return TruncatedJet(coeffs, p)


def jet_reciprocal(a: TruncatedJet) -> TruncatedJet:
    """1/a for a jet with nonzero constant term."""
    p = a.precision
    if abs(a.coeffs[0]) == 0:
        raise ValueError("jet reciprocal requires nonzero constant term")
    with p.active():
        inv0 = 1 / a.coeffs[0]
        coeffs = [inv0]
        for k in range(1, a.order + 1):
            s = sum(a.coeffs[i] * coeffs[k - i] for i in range(1, k + 1))
            coeffs.append(-s * inv0)
    return TruncatedJet(coeffs, p)


def jet_sqrt(a: TruncatedJet) -> TruncatedJet:
    """Principal square root of a jet with nonzero constant term."""
    p = a.precision
    if abs(a.coeffs[0]) == 0:
        raise ValueError("jet sqrt requires nonzero constant term")
    with p.active():
        s0 = p.sqrt(a.coeffs[0]) if not p.is_double else np.sqrt(complex(a.coeffs[0]))
        coeffs = [p.complex_(s0)]
        for k in range(1, a.order + 1):
            s = sum(coeffs[i] * coeffs[k - i] for i in range(1, k))
            coeffs.append((a.coeffs[k] - s) / (2 * coeffs[0]))
    return TruncatedJet(coeffs, p)


def _binomial_series(power_num: int, power_den: int, order: int, p: Precision) -> TruncatedJet:
    """Jet of (1 + xi^2)^(power_num/power_den); odd coefficients exactly zero."""
    with p.active():
        alpha = p.real(power_num) / p.real(power_den)
        coeffs = [p.complex_(0)] * (order + 1)
        c = p.one()
        coeffs[0] = p.complex_(c)
        for m in range(1, order // 2 + 1):
            c = c * (alpha - (m - 1)) / m
            coeffs[2 * m] = p.complex_(c)
    return TruncatedJet(coeffs, p)


def omega_jet(order: int, p: Precision = DOUBLE) -> TruncatedJet:
    """Jet of omega(xi) = sqrt(1 + xi^2)."""
    if order < 0:
        raise ValueError("order must be >= 0")
    return _binomial_series(1, 2, order, p)


def inv_omega_jet(order: int, p: Precision = DOUBLE) -> TruncatedJet:
    """Jet of 1/omega(xi) = (1 + xi^2)^(-1/2)."""
    if order < 0:
        raise ValueError("order must be >= 0")
    return _binomial_series(-1, 2, order, p)


def _cos_sin_of_small(d: TruncatedJet):
    """cos(d) and sin(d) for a jet d with zero constant term.

    d has valuation >= 2 here (it is t*(omega-1)), so the series terminates
    after order//2 powers.
    """
    p = d.precision
    n = d.order
    one = TruncatedJet.constant(1, n, p)
    cosd = one
    sind = TruncatedJet.constant(0, n, p)
    power = one  # d^j
    with p.active():
        fact = p.one()
        for j in range(1, n + 1):
            power = jet_mul(power, d)
            fact = fact * j
            if p.is_double:
                if not power.coeffs.any():
                    break
            elif all(abs(c) == 0 for c in power.coeffs):
                break
            term = power * (1 / fact)
            if j % 2 == 0:
                cosd = cosd + (term if j % 4 == 0 else -term)
            else:
                sind = sind + (term if j % 4 == 1 else -term)
    return cosd, sind


def cos_sin_t_omega_jet(t, order: int, p: Precision = DOUBLE):
    """Jets of cos(t*omega(xi)) and sin(t*omega(xi)) about xi = 0.

    Uses the angle-addition split around t*omega(0) = t so the composed inner
    jet d = t*(omega - 1) has zero constant term (no range issues for large t).
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    with p.active():
        om = omega_jet(order, p)
        d = (om - TruncatedJet.constant(1, order, p)) * p.real(t)
        cosd, sind = _cos_sin_of_small(d)
        ct, st = p.cos(p.real(t)), p.sin(p.real(t))
        cos_jet = cosd * ct - sind * st
        sin_jet = sind * ct + cosd * st
    return cos_jet, sin_jet


def cos_t_omega_jet(t, order: int, p: Precision = DOUBLE) -> TruncatedJet:
    return cos_sin_t_omega_jet(t, order, p)[0]


def sin_t_omega_jet(t, order: int, p: Precision = DOUBLE) -> TruncatedJet:
    return cos_sin_t_omega_jet(t, order, p)[1]
