"""Sampling primitives: Laplace noise, softmax selection, geometric draws.

All samplers draw from an :class:`~dpds.rng.RngStream` and are fully
deterministic given the stream, which keeps every randomized algorithm in
this package replayable.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .rng import RngStream

# Above this bound on ln(T) the ceiling adjustment is below one ulp, so the
# closed form is used instead of materializing T.
_LOG_MATERIALIZE_BOUND = 36.0


def laplace(scale: float, rng: RngStream) -> float:
    """Sample Laplace(0, scale) by inverse CDF on a single uniform.

    Args:
        scale: the distribution's scale b; density (1/2b)·exp(−|x|/b).
        rng: source stream; consumes exactly one uniform.
    """
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    u = rng.uniform() - 0.5
    # u is in (-0.5, 0.5), so the log argument stays in (0, 1].
    return -scale * math.copysign(1.0, u) * math.log1p(-2.0 * abs(u))


def exp_select(utilities: Sequence[float], coef: float, rng: RngStream) -> int:
    """Pick index i with probability proportional to exp(coef * utilities[i]).

    Uses the Gumbel-max identity: argmax(coef*u_i + G_i) over i.i.d. standard
    Gumbel G_i has exactly the softmax distribution, with no overflow for
    large coef*u.

    Args:
        utilities: non-empty sequence of finite scores.
        coef: weight applied to each utility (may be 0 or negative).
        rng: source stream; consumes len(utilities) uniforms.

    Returns:
        The selected index.
    """
    scores = np.asarray(utilities, dtype=np.float64)
    if scores.ndim != 1 or scores.size == 0:
        raise ValueError("utilities must be a non-empty 1-d sequence")
    if not np.isfinite(scores).all():
        raise ValueError("utilities must all be finite")
    u = rng.uniforms(scores.size)
    gumbel = -np.log(-np.log(u))
    return int(np.argmax(coef * scores + gumbel))


class Geometric:
    """One draw T with Pr[T = t] = (1-p)^(t-1) * p on t = 1, 2, ...

    The draw consumes a single uniform at construction.  ``value`` gives the
    integer T; ``log_value`` gives ln(T) directly, staying finite and
    accurate even when the success probability is so small that T would
    overflow a double.  Built either from p or from ln(p), the latter for
    callers that work in log space throughout.
    """

    __slots__ = ("log_p", "_log_u")

    def __init__(self, p: float, rng: RngStream):
        if not 0.0 < p <= 1.0:
            raise ValueError(f"p must be in (0, 1], got {p}")
        self._init_draw(math.log(p), rng)

    @classmethod
    def from_log_p(cls, log_p: float, rng: RngStream) -> "Geometric":
        if not log_p <= 0.0:
            raise ValueError(f"log_p must be <= 0, got {log_p}")
        obj = cls.__new__(cls)
        obj._init_draw(log_p, rng)
        return obj

    def _init_draw(self, log_p: float, rng: RngStream) -> None:
        self.log_p = log_p
        self._log_u = math.log(rng.uniform())

    def value(self) -> int:
        if self.log_p == 0.0:
            return 1
        denom = math.log1p(-math.exp(self.log_p))
        if denom == 0.0:
            raise OverflowError(
                "success probability underflows; T exceeds float range, "
                "use log_value instead"
            )
        return max(1, math.ceil(self._log_u / denom))

    def log_value(self) -> float:
        if self.log_p == 0.0:
            return 0.0
        p = math.exp(self.log_p)
        # ln(-ln(1-p)); for p below the subnormal range ln(1-p) = -p exactly.
        log_neg_denom = math.log(-math.log1p(-p)) if p > 0.0 else self.log_p
        log_ratio = math.log(-self._log_u) - log_neg_denom
        if log_ratio < _LOG_MATERIALIZE_BOUND:
            return math.log(self.value())
        return log_ratio


def geometric(p: float, rng: RngStream) -> int:
    """Sample from the geometric distribution on {1, 2, ...}."""
    return Geometric(p, rng).value()
