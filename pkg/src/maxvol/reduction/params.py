"""Closed-form constants of the soundness argument for given l, alpha, k."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class SoundnessParameters:
    ell: int
    alpha: float
    k: int
    c: float
    epsilon1: float
    epsilon2: float
    t: float | None  # None when its denominator is not positive
    t_denominator: float
    ell_prime: int
    log2_volume_bound: float  # -c*k
    volume_bound: float  # 2^(-c*k), may underflow to 0.0

    def as_dict(self) -> dict:
        return asdict(self)


def compute_soundness_parameters(ell: int, alpha: float = 0.01, k: int = 1) -> SoundnessParameters:
    """c = 1/(3*5^(l+1)), epsilon1/epsilon2, t, l' and the bound 2^(-ck).

    ``t`` is reported as None (not raised) when
    2*eps1 + 2*eps2 + 2^(1 - alpha*l) >= 1, which happens for small alpha*l.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if k < 0:
        raise ValueError("k must be non-negative")
    c = 1.0 / (3 * 5 ** (ell + 1))
    pref = 3.0 ** -(ell + 1)
    eps1 = pref * ((3 / 5) ** ell + (3 / 5) ** (2 * ell))
    eps2 = pref * ((3 / 5) ** ell + 1.0)
    denom = 1.0 - 2 * eps1 - 2 * eps2 - 2.0 ** (1.0 - alpha * ell)
    t = 4 * 5**ell / denom if denom > 0 else None
    ell_prime = math.ceil(math.log2(54 / 11) / alpha)
    log2_bound = -c * k
    return SoundnessParameters(
        ell, alpha, k, c, eps1, eps2, t, denom, ell_prime, log2_bound, 2.0**log2_bound
    )
