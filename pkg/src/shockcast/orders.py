"""Seasonal ARIMA model shapes and fitted-model records."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterConstraintError
from .series import Quarter, QuarterlySeries

SIGMA2_FLOOR = 1e-12

# Search-space caps for automatic selection (each order, and their sum).
MAX_SINGLE_ORDER = 5
MAX_TOTAL_ORDER = 10


@dataclass(frozen=True)
class ArimaOrder:
    """Model shape (p,d,q)(P,D,Q)[season] with an optional drift term.

    Drift is a constant mean on the differenced scale and is only
    permitted when d + D <= 1, matching the convention under which
    "with drift" accompanies single-differenced models.
    """

    p: int = 0
    d: int = 0
    q: int = 0
    P: int = 0
    D: int = 0
    Q: int = 0
    season: int = 4
    drift: bool = False

    def __post_init__(self):
        for name in ("p", "d", "q", "P", "D", "Q"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.season < 1:
            raise ValueError("season must be a positive integer")
        if self.drift and self.d + self.D > 1:
            raise ValueError("drift requires d + D <= 1")

    def validate_caps(self, max_single: int = MAX_SINGLE_ORDER,
                      max_total: int = MAX_TOTAL_ORDER) -> None:
        orders = (self.p, self.q, self.P, self.Q)
        if max(orders) > max_single or sum(orders) > max_total:
            raise ValueError(
                f"order {self} exceeds caps (single <= {max_single}, "
                f"total <= {max_total})"
            )

    @property
    def n_coeffs(self) -> int:
        """Free ARMA coefficients (excludes drift and sigma2)."""
        return self.p + self.q + self.P + self.Q

    @property
    def k(self) -> int:
        """Parameter count entering the information criteria (+1 for sigma2)."""
        return self.n_coeffs + (1 if self.drift else 0) + 1

    @property
    def is_seasonal(self) -> bool:
        return self.P > 0 or self.D > 0 or self.Q > 0

    def __str__(self) -> str:
        base = f"ARIMA({self.p},{self.d},{self.q})"
        if self.is_seasonal:
            base += f"({self.P},{self.D},{self.Q})[{self.season}]"
        if self.drift:
            base += " with drift"
        return base


def _poly_roots_outside(coeffs: np.ndarray, kind: str) -> None:
    """Check every root of 1 + c1 z + ... + cm z^m lies outside the unit circle."""
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    if c.size == 0:
        return
    roots = np.roots(np.concatenate(([1.0], c))[::-1])
    if roots.size and np.min(np.abs(roots)) <= 1.0:
        raise ParameterConstraintError(
            f"{kind} polynomial has a root on or inside the unit circle"
        )


@dataclass(frozen=True)
class ArimaParams:
    """Fitted coefficients: AR/MA blocks, seasonal blocks, drift, sigma2."""

    ar: tuple[float, ...] = ()
    ma: tuple[float, ...] = ()
    sar: tuple[float, ...] = ()
    sma: tuple[float, ...] = ()
    drift_mu: float = 0.0
    sigma2: float = 1.0

    def validate(self) -> None:
        """Raise ParameterConstraintError on a non-stationary/non-invertible
        or degenerate parameterization."""
        if not self.sigma2 > 0:
            raise ParameterConstraintError(f"sigma2 must be positive, got {self.sigma2}")
        # AR polynomials are 1 - sum(phi z^i): negate for the generic check.
        _poly_roots_outside(-np.asarray(self.ar), "AR")
        _poly_roots_outside(-np.asarray(self.sar), "seasonal AR")
        _poly_roots_outside(np.asarray(self.ma), "MA")
        _poly_roots_outside(np.asarray(self.sma), "seasonal MA")


def expand_seasonal(order: ArimaOrder, params: ArimaParams) -> tuple[np.ndarray, np.ndarray]:
    """Multiply seasonal and non-seasonal lag polynomials.

    Returns (phi, theta) of the equivalent plain ARMA: phi has length
    p + season*P with the convention AR(L) = 1 - sum(phi_i L^i), theta has
    length q + season*Q with MA(L) = 1 + sum(theta_j L^j).
    """
    s = order.season
    ar = np.concatenate(([1.0], -np.asarray(params.ar, dtype=float)))
    sar = np.zeros(s * order.P + 1)
    sar[0] = 1.0
    for k, c in enumerate(params.sar, start=1):
        sar[s * k] = -c
    ma = np.concatenate(([1.0], np.asarray(params.ma, dtype=float)))
    sma = np.zeros(s * order.Q + 1)
    sma[0] = 1.0
    for k, c in enumerate(params.sma, start=1):
        sma[s * k] = c
    phi = -np.convolve(ar, sar)[1:]
    theta = np.convolve(ma, sma)[1:]
    return phi, theta


@dataclass(frozen=True)
class FittedArima:
    """A maximum-likelihood fit plus its information criteria and residuals."""

    order: ArimaOrder
    params: ArimaParams
    loglik: float
    aic: float
    bic: float
    nobs: int
    residuals: QuarterlySeries = field(repr=False)
    train_end: Quarter

    @property
    def aicc(self) -> float:
        denom = self.nobs - self.order.k - 1
        if denom <= 0:
            return float("inf")
        return self.aic + 2.0 * self.order.k * (self.order.k + 1) / denom
