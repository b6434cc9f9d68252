"""Letters, words, and their jets.

A letter g(sign, t) is the closed-form SU(2) propagator of a constant-mass
interval at Fourier frequency xi:

    g = cos(omega*t) * I + i * (sin(omega*t)/omega) * (sign*sigma1 + xi*sigma3),
    omega = sqrt(1 + xi^2).

A word is the ordered product of letters over one period (first letter acts
first, i.e. rightmost in the product).  Everything is available both
pointwise in xi and as a matrix of truncated jets about xi = 0; the half-trace
jet carries the even coefficients a_0, a_2, ... whose vanishing flattens the
Floquet angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from mpmath import mp

from .errors import InternalConsistencyError
from .jets import (
    TruncatedJet,
    cos_sin_t_omega_jet,
    inv_omega_jet,
    jet_mul,
)
from .precision import DOUBLE, Precision


@dataclass(frozen=True)
class Word:
    """Signed durations (sign_j, t_j) of a piecewise-constant forcing period.

    Durations may be floats or mpmath reals; they are used as given, so a
    high-precision duration survives into high-precision letter jets.
    """

    signs: tuple[int, ...]
    durations: tuple

    def __post_init__(self):
        if len(self.signs) != len(self.durations):
            raise ValueError("signs and durations must have equal length")
        if len(self.signs) < 1:
            raise ValueError("a word needs at least one letter")
        if any(s not in (+1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")
        if any(not t > 0 for t in self.durations):
            raise ValueError("durations must be positive")

    @property
    def length(self) -> int:
        return len(self.signs)

    @property
    def period(self) -> float:
        return float(sum(self.durations))

    @property
    def alternating(self) -> bool:
        return all(a * b == -1 for a, b in zip(self.signs, self.signs[1:]))

    @classmethod
    def alternating4(cls, durations) -> "Word":
        if len(durations) != 4:
            raise ValueError("alternating4 needs exactly four durations")
        return cls((+1, -1, +1, -1), tuple(durations))

    @classmethod
    def single(cls, sign: int = +1, duration=1.0) -> "Word":
        return cls((sign,), (duration,))


class UnitaryMatrix2:
    """A 2x2 complex matrix expected to lie in SU(2)."""

    __slots__ = ("entries", "precision")

    def __init__(self, entries, precision: Precision = DOUBLE):
        self.entries = tuple(tuple(row) for row in entries)
        self.precision = precision

    @classmethod
    def identity(cls, p: Precision = DOUBLE) -> "UnitaryMatrix2":
        one, zero = p.complex_(1), p.complex_(0)
        return cls(((one, zero), (zero, one)), p)

    def __matmul__(self, other: "UnitaryMatrix2") -> "UnitaryMatrix2":
        a, b = self.entries, other.entries
        return UnitaryMatrix2(
            (
                (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
                (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
            ),
            self.precision,
        )

    def trace(self):
        return self.entries[0][0] + self.entries[1][1]

    def half_trace(self):
        return self.trace() / 2

    def det(self):
        a = self.entries
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]

    def dagger(self) -> "UnitaryMatrix2":
        a = self.entries
        return UnitaryMatrix2(
            (
                (a[0][0].conjugate(), a[1][0].conjugate()),
                (a[0][1].conjugate(), a[1][1].conjugate()),
            ),
            self.precision,
        )

    def unitarity_defect(self) -> float:
        prod = (self @ self.dagger()).entries
        ident = ((1, 0), (0, 1))
        return max(float(abs(prod[i][j] - ident[i][j])) for i in range(2) for j in range(2))

    def det_defect(self) -> float:
        return float(abs(self.det() - 1))

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(e) for e in row] for row in self.entries], dtype=np.complex128)

    def __repr__(self):
        return f"UnitaryMatrix2({self.to_numpy()!r})"


class MatrixJet:
    """2x2 grid of TruncatedJet sharing one order."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = tuple(tuple(row) for row in entries)
        orders = {j.order for row in self.entries for j in row}
        if len(orders) != 1:
            raise ValueError("matrix jet entries must share one order")

    @property
    def order(self) -> int:
        return self.entries[0][0].order

    @property
    def precision(self) -> Precision:
        return self.entries[0][0].precision

    @classmethod
    def identity(cls, order: int, p: Precision) -> "MatrixJet":
        one = TruncatedJet.constant(1, order, p)
        zero = TruncatedJet.constant(0, order, p)
        return cls(((one, zero), (zero, one)))

    def __matmul__(self, other: "MatrixJet") -> "MatrixJet":
        a, b = self.entries, other.entries
        return MatrixJet(
            (
                (
                    jet_mul(a[0][0], b[0][0]) + jet_mul(a[0][1], b[1][0]),
                    jet_mul(a[0][0], b[0][1]) + jet_mul(a[0][1], b[1][1]),
                ),
                (
                    jet_mul(a[1][0], b[0][0]) + jet_mul(a[1][1], b[1][0]),
                    jet_mul(a[1][0], b[0][1]) + jet_mul(a[1][1], b[1][1]),
                ),
            )
        )

    def half_trace_jet(self) -> TruncatedJet:
        return (self.entries[0][0] + self.entries[1][1]) * 0.5

    def evaluate(self, xi) -> UnitaryMatrix2:
        return UnitaryMatrix2(
            tuple(tuple(j.evaluate(xi) for j in row) for row in self.entries),
            self.precision,
        )


@dataclass(frozen=True)
class TraceJet:
    """Even coefficients a_0, a_2, ..., a_2K of the half-trace F about xi = 0."""

    even_coefficients: tuple
    raw_jet: TruncatedJet

    def __getitem__(self, k: int):
        """a_{2k}."""
        return self.even_coefficients[k]

    @property
    def a0(self):
        return self.even_coefficients[0]


# -- pointwise ---------------------------------------------------------------


def letter_at(sign: int, t, xi, p: Precision = DOUBLE) -> UnitaryMatrix2:
    """Closed-form letter propagator at a single frequency xi."""
    with p.active():
        t = p.real(t)
        xi = p.real(xi)
        om = p.sqrt(1 + xi * xi)
        c = p.cos(om * t)
        s = p.sin(om * t) / om
        i = p.complex_(0, 1)
        return UnitaryMatrix2(
            (
                (c + i * s * xi, i * sign * s),
                (i * sign * s, c - i * s * xi),
            ),
            p,
        )


def word_at(word: Word, xi, p: Precision = DOUBLE) -> UnitaryMatrix2:
    """Monodromy matrix of a word at frequency xi (first letter acts first)."""
    with p.active():
        acc = UnitaryMatrix2.identity(p)
        for sign, t in zip(word.signs, word.durations):
            acc = letter_at(sign, t, xi, p) @ acc
        return acc


# -- jets ---------------------------------------------------------------------


def letter_jet(sign: int, t, order: int, p: Precision = DOUBLE) -> MatrixJet:
    """Jet of a letter about xi = 0."""
    with p.active():
        cj, sj = cos_sin_t_omega_jet(t, order, p)
        sw = jet_mul(sj, inv_omega_jet(order, p))  # sin(omega t)/omega
        i_sw_xi = (sw * 1j).shift_up()
        i_sw = sw * (1j * sign)
        return MatrixJet(((cj + i_sw_xi, i_sw), (i_sw, cj + (-i_sw_xi))))


def generator_jet(sign: int, order: int, p: Precision = DOUBLE) -> MatrixJet:
    """Jet of the letter generator i*(sign*sigma1 + xi*sigma3)."""
    zero = TruncatedJet.constant(0, order, p)
    i_xi = TruncatedJet.variable(order, p) * 1j if order >= 1 else zero
    i_sign = TruncatedJet.constant(1j * sign, order, p)
    return MatrixJet(((i_xi, i_sign), (i_sign, -i_xi)))


def word_jet(word: Word, order: int, p: Precision = DOUBLE) -> MatrixJet:
    with p.active():
        acc = MatrixJet.identity(order, p)
        for sign, t in zip(word.signs, word.durations):
            acc = letter_jet(sign, t, order, p) @ acc
        return acc


def trace_jet(mj: MatrixJet) -> TraceJet:
    """Half-trace jet, validated: odd and imaginary parts must vanish.

    Violations beyond 1e3 * abs_tol signal a bug or insufficient precision,
    not bad input.
    """
    p = mj.precision
    raw = mj.half_trace_jet()
    tol = 1e3 * p.abs_tol
    if raw.max_odd() > tol:
        raise InternalConsistencyError(
            f"odd half-trace coefficient {raw.max_odd():.3e} exceeds {tol:.3e}"
        )
    if raw.max_imag() > tol:
        raise InternalConsistencyError(
            f"imaginary half-trace part {raw.max_imag():.3e} exceeds {tol:.3e}"
        )
    even = tuple(raw.coeffs[k].real for k in range(0, raw.order + 1, 2))
    return TraceJet(even_coefficients=even, raw_jet=raw)


def word_t_jacobian_jet(word: Word, order: int, p: Precision = DOUBLE) -> list[MatrixJet]:
    """Jets of the exact duration derivatives dM/dt_j.

    d/dt g(sign, t) = a_sign * g(sign, t), so the derivative inserts the
    generator into the product at slot j.
    """
    with p.active():
        letters = [letter_jet(s, t, order, p) for s, t in zip(word.signs, word.durations)]
        m = word.length
        prefix = [MatrixJet.identity(order, p)]  # prefix[j] = g_j ... g_1
        for lj in letters:
            prefix.append(lj @ prefix[-1])
        suffix = [MatrixJet.identity(order, p)]  # suffix[i] = g_m ... g_{m-i+1}
        for lj in reversed(letters):
            suffix.append(suffix[-1] @ lj)
        out = []
        for j in range(m):
            after = suffix[m - 1 - j]  # g_m ... g_{j+2}
            gen = generator_jet(word.signs[j], order, p)
            out.append(after @ gen @ prefix[j + 1])
        return out


# -- test oracle ----------------------------------------------------------------


def ode_oracle(word: Word, xi: float, steps: int) -> UnitaryMatrix2:
    """RK4 integration of u' = a_sign(xi) u over one period (double precision).

    Test oracle for letters and words; error scales as steps^-4.
    """
    if steps < 1000:
        raise ValueError("ode_oracle needs steps >= 1000")
    total = word.period
    u = np.eye(2, dtype=np.complex128)
    for sign, t in zip(word.signs, word.durations):
        a = np.array([[1j * xi, 1j * sign], [1j * sign, -1j * xi]], dtype=np.complex128)
        n = max(1, math.ceil(steps * t / total))
        h = t / n
        for _ in range(n):
            k1 = a @ u
            k2 = a @ (u + 0.5 * h * k1)
            k3 = a @ (u + 0.5 * h * k2)
            k4 = a @ (u + h * k3)
            u = u + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return UnitaryMatrix2(((u[0, 0], u[0, 1]), (u[1, 0], u[1, 1])), DOUBLE)
