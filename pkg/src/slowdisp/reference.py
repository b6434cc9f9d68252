"""The known degree-10-flat configuration.

Four alternating-sign durations whose flatness residual (a2, a4, a6, a8)
vanishes to ~5e-15; the CLI exposes them under the alias ``paper-root``.
The decimals are converted at the caller's working precision, because
pre-rounding them to doubles moves the residual at its own scale.
"""

from __future__ import annotations

from .monodromy import Word
from .precision import DOUBLE, Precision

ROOT_DECIMALS = (
    "4.088866559569492",
    "3.117488248716022",
    "2.615221023066265",
    "1.762750988714514",
)


def reference_root(p: Precision = DOUBLE) -> tuple:
    """The flat-configuration durations as exact decimals at precision p."""
    with p.active():
        return tuple(p.real(s) for s in ROOT_DECIMALS)


def reference_word(p: Precision = DOUBLE) -> Word:
    return Word.alternating4(reference_root(p))
