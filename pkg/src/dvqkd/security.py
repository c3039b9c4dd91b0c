"""Binary entropy, secret-fraction lower bounds and shared threshold constants.

The secret fraction is the number of distillable secret bits per raw-key
bit after error correction and privacy amplification, assuming collective
attacks.  With an ideal single-photon source it reduces to 1 - 2 H(Q);
with multiphoton emission only the fraction y of clicks caused by genuine
single photons contributes, and the bound becomes y - H(Q) - y H(Q/y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import InfeasibleError, ParameterDomainError
from .roots import bisect_root


@dataclass(frozen=True)
class KeyRateResult:
    """Bundle of per-point key-rate quantities."""

    qber: float
    single_photon_fraction: float
    p_exp: float
    delta_i: float


def binary_entropy(q: float) -> float:
    """Shannon entropy of a bit with bias q, in bits; H(0) = H(1) = 0 by continuity."""
    if not 0.0 <= q <= 1.0:
        raise ParameterDomainError(f"entropy argument must be in [0, 1], got {q}")
    if q == 0.0 or q == 1.0:
        return 0.0
    return -q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q)


def secret_fraction_ideal(q: float) -> float:
    """Secret fraction for an ideal single-photon source: max[0, 1 - 2H(q)]."""
    if not 0.0 <= q <= 0.5:
        raise ParameterDomainError(f"QBER must be in [0, 0.5], got {q}")
    return max(0.0, 1.0 - 2.0 * binary_entropy(q))


def secret_fraction_multiphoton(q: float, y: float) -> float:
    """Secret fraction when only a fraction y of clicks stems from single photons.

    Eve is assumed to read multiphoton pulses in full, so errors concentrate
    on the single-photon part: max[0, y - H(q) - y H(q/y)].  For q > y the
    bracket is negative and the bound is zero.
    """
    if not 0.0 <= q <= 0.5:
        raise ParameterDomainError(f"QBER must be in [0, 0.5], got {q}")
    if not 0.0 <= y <= 1.0:
        raise ParameterDomainError(f"single-photon fraction must be in [0, 1], got {y}")
    if y == 0.0:
        return 0.0
    if q > y:
        return 0.0
    return max(0.0, y - binary_entropy(q) - y * binary_entropy(q / y))


@lru_cache(maxsize=1)
def qber_threshold() -> float:
    """QBER at which the ideal-source secret fraction vanishes (~0.110028)."""
    return _compute_qber_threshold()


def _compute_qber_threshold() -> float:
    return bisect_root(lambda q: 1.0 - 2.0 * binary_entropy(q), 1e-12, 0.5 - 1e-12, xtol=1e-9)


def y_threshold(e: float) -> float:
    """Minimal single-photon fraction compatible with security at depolarization e.

    Solves y [1 - H(e / (2y))] = H(e / 2) for y in (e/2, 1].  At e = 0 the
    equation degenerates to y = 0; the limiting value 0 is returned.  For
    e >= 2 * qber_threshold() no y <= 1 solves it and the problem is infeasible.
    """
    if e < 0.0 or e > 1.0:
        raise ParameterDomainError(f"depolarization probability must be in [0, 1], got {e}")
    if e == 0.0:
        return 0.0

    h_half = binary_entropy(e / 2.0)

    def f(y: float) -> float:
        return y * (1.0 - binary_entropy(min(e / (2.0 * y), 1.0))) - h_half

    lo = e / 2.0 + 1e-15
    if f(1.0) <= 0.0:
        raise InfeasibleError(
            f"no single-photon fraction <= 1 is secure at depolarization e={e:g}"
        )
    return bisect_root(f, lo, 1.0, xtol=1e-9)
