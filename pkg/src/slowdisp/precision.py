"""Scalar precision backends.

Two backends sit behind one interface: hardware doubles (53 mantissa bits,
plain ``float``/``complex``) for searching, and mpmath multiprecision
(default 256 bits) for refinement and certification.  Every public operation
that takes a :class:`Precision` must run its arithmetic inside
``with p.active():`` so that mpmath rounds at the requested precision.
"""

from __future__ import annotations

import cmath
import contextlib
import math
from dataclasses import dataclass

from mpmath import mp

DOUBLE_BITS = 53


@dataclass(frozen=True)
class Precision:
    """Working precision: mantissa bits plus a derived absolute tolerance.

    ``abs_tol = 2**(safety_margin - mantissa_bits)`` leaves headroom above
    one ulp for the roundoff accumulated by jet products and 2x2 matrix words.
    """

    mantissa_bits: int = DOUBLE_BITS
    safety_margin: int = 16

    def __post_init__(self):
        if self.mantissa_bits < DOUBLE_BITS:
            raise ValueError(f"mantissa_bits must be >= {DOUBLE_BITS}, got {self.mantissa_bits}")
        if not 0 < self.safety_margin < self.mantissa_bits:
            raise ValueError("safety_margin must lie in (0, mantissa_bits)")

    @property
    def abs_tol(self) -> float:
        return 2.0 ** (self.safety_margin - self.mantissa_bits)

    @property
    def is_double(self) -> bool:
        return self.mantissa_bits == DOUBLE_BITS

    def active(self):
        """Context manager pinning mpmath's working precision (no-op for doubles)."""
        if self.is_double:
            return contextlib.nullcontext()
        return mp.workprec(self.mantissa_bits)

    # -- scalar constructors ------------------------------------------------

    def real(self, x):
        if self.is_double:
            return float(x)
        with self.active():
            return mp.mpf(x) if not hasattr(x, "_mpf_") else x

    def complex_(self, re, im=0):
        if self.is_double:
            return complex(re, im)
        with self.active():
            return mp.mpc(re, im)

    def zero(self):
        return 0.0 if self.is_double else mp.mpf(0)

    def one(self):
        return 1.0 if self.is_double else mp.mpf(1)

    # -- elementary functions ------------------------------------------------

    def cos(self, x):
        if self.is_double:
            return math.cos(x) if not isinstance(x, complex) else cmath.cos(x)
        with self.active():
            return mp.cos(x)

    def sin(self, x):
        if self.is_double:
            return math.sin(x) if not isinstance(x, complex) else cmath.sin(x)
        with self.active():
            return mp.sin(x)

    def sqrt(self, x):
        if self.is_double:
            if isinstance(x, complex) or x < 0:
                return cmath.sqrt(x)
            return math.sqrt(x)
        with self.active():
            return mp.sqrt(x)

    def acos(self, x):
        if self.is_double:
            return math.acos(x)
        with self.active():
            return mp.acos(x)

    def fabs(self, x):
        if self.is_double:
            return abs(x)
        with self.active():
            return abs(x)

    def to_float(self, x) -> float:
        return float(x)


DOUBLE = Precision()
QUAD256 = Precision(mantissa_bits=256)
