"""Bijection between unconstrained vectors and valid ARMA coefficients.

Each coefficient block is parameterized through partial autocorrelations:
tanh squashes an unconstrained entry into (-1, 1) and the Durbin-Levinson
recursion expands the partials into coefficients whose lag polynomial has
all roots outside the unit circle. The drift entry, when present, passes
through unchanged.
"""

from __future__ import annotations

import numpy as np

from .orders import ArimaOrder, ArimaParams


def pacf_to_ar(partials: np.ndarray) -> np.ndarray:
    """Expand partial autocorrelations into stationary AR coefficients
    (convention 1 - sum(phi_i z^i))."""
    a = np.zeros(len(partials))
    for k, r in enumerate(partials):
        a[:k] = a[:k] - r * a[:k][::-1]
        a[k] = r
    return a


def ar_to_pacf(phi: np.ndarray) -> np.ndarray:
    a = np.asarray(phi, dtype=float).copy()
    r = np.zeros(a.size)
    for k in range(a.size - 1, -1, -1):
        rk = a[k]
        r[k] = rk
        if k > 0:
            a[:k] = (a[:k] + rk * a[:k][::-1]) / (1.0 - rk * rk)
    return r


def pacf_to_ma(partials: np.ndarray) -> np.ndarray:
    """Expand partials into invertible MA coefficients
    (convention 1 + sum(theta_j z^j))."""
    b = np.zeros(len(partials))
    for k, r in enumerate(partials):
        b[:k] = b[:k] + r * b[:k][::-1]
        b[k] = r
    return b


def ma_to_pacf(theta: np.ndarray) -> np.ndarray:
    b = np.asarray(theta, dtype=float).copy()
    r = np.zeros(b.size)
    for k in range(b.size - 1, -1, -1):
        rk = b[k]
        r[k] = rk
        if k > 0:
            b[:k] = (b[:k] - rk * b[:k][::-1]) / (1.0 - rk * rk)
    return r


def transform_params(unconstrained: np.ndarray, order: ArimaOrder) -> ArimaParams:
    """Map an unconstrained vector to valid coefficients.

    Layout: [ar block | ma block | seasonal ar | seasonal ma | drift?];
    length must equal order.k - 1 (sigma2 is profiled separately and is
    returned as a unit placeholder).
    """
    u = np.asarray(unconstrained, dtype=float)
    expect = order.k - 1
    if u.size != expect:
        raise ValueError(f"expected vector of length {expect} for {order}, got {u.size}")
    pos = 0

    def block(m: int) -> np.ndarray:
        nonlocal pos
        out = np.tanh(u[pos : pos + m])
        pos += m
        return out

    ar = pacf_to_ar(block(order.p))
    ma = pacf_to_ma(block(order.q))
    sar = pacf_to_ar(block(order.P))
    sma = pacf_to_ma(block(order.Q))
    drift_mu = float(u[pos]) if order.drift else 0.0
    return ArimaParams(
        ar=tuple(ar), ma=tuple(ma), sar=tuple(sar), sma=tuple(sma),
        drift_mu=drift_mu, sigma2=1.0,
    )


def inverse_transform(params: ArimaParams, order: ArimaOrder) -> np.ndarray:
    """Recover the unconstrained vector for valid coefficients."""
    pieces = [
        np.arctanh(ar_to_pacf(np.asarray(params.ar))),
        np.arctanh(ma_to_pacf(np.asarray(params.ma))),
        np.arctanh(ar_to_pacf(np.asarray(params.sar))),
        np.arctanh(ma_to_pacf(np.asarray(params.sma))),
    ]
    if order.drift:
        pieces.append(np.array([params.drift_mu]))
    return np.concatenate(pieces) if pieces else np.empty(0)
