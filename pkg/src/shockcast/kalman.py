"""Exact Gaussian likelihood of a zero-mean ARMA via Kalman filtering.

The model is put in the companion ("Harvey") state-space form

    state[t+1] = T state[t] + R eps[t+1],   y[t] = state[t][0],

with T the companion matrix of the combined AR polynomial and
R = (1, theta_1, ..., theta_{r-1}). The filter starts from the exact
stationary state covariance (a vectorized linear solve of the fixed-point
equation P = T P T' + R R'), so no diffuse initialization is needed:
differencing happens before filtering. sigma2 scales out; filtering at
unit variance yields innovations v and relative variances F from which
the profiled sigma2 and the exact likelihood follow.
"""

from __future__ import annotations

import numpy as np

from .errors import FilterInstabilityError
from .orders import SIGMA2_FLOOR, ArimaOrder, ArimaParams, expand_seasonal

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def _stationary_cov(phi, theta_ext):  # pragma: no cover - exercised via wrapper
    """Solve P = T P T' + R R' by stacking into (I - T(x)T) vec(P) = vec(RR')."""
    r = phi.shape[0]
    T = np.zeros((r, r))
    for i in range(r):
        T[i, 0] = phi[i]
    for i in range(r - 1):
        T[i, i + 1] = 1.0
    A = np.empty((r * r, r * r))
    b = np.empty(r * r)
    for i in range(r):
        for j in range(r):
            row = i * r + j
            b[row] = theta_ext[i] * theta_ext[j]
            for k in range(r):
                for m in range(r):
                    v = -T[i, k] * T[j, m]
                    if i == k and j == m:
                        v += 1.0
                    A[row, k * r + m] = v
    x = np.linalg.solve(A, b)
    return x.reshape((r, r)).copy()


@njit(cache=True)
def _filter_loop(y, phi, theta_ext, P0):  # pragma: no cover - exercised via wrapper
    """Innovations and their unit-scale variances for one pass.

    phi: length-r companion column (zero-padded AR coefficients).
    theta_ext: length-r vector (1, theta_1, ..., theta_{r-1}).
    Returns (v, F, a_final) where a_final is the one-step-ahead predicted
    state after the last observation; stops early (short v) on breakdown.
    """
    n = y.shape[0]
    r = phi.shape[0]
    a = np.zeros(r)
    P = P0.copy()
    v = np.empty(n)
    F = np.empty(n)
    M = np.empty((r, r))
    Pn = np.empty((r, r))
    K = np.empty(r)
    for t in range(n):
        Ft = P[0, 0]
        if not (Ft > 0.0) or not np.isfinite(Ft):
            return v[:t], F[:t], a
        vt = y[t] - a[0]
        v[t] = vt
        F[t] = Ft
        # M = T @ P using the companion structure of T
        for i in range(r - 1):
            for j in range(r):
                M[i, j] = phi[i] * P[0, j] + P[i + 1, j]
        for j in range(r):
            M[r - 1, j] = phi[r - 1] * P[0, j]
        for i in range(r):
            K[i] = M[i, 0] / Ft
        # a <- T a + K v (reads of a stay ahead of writes)
        a0 = a[0]
        for i in range(r - 1):
            a[i] = phi[i] * a0 + a[i + 1] + K[i] * vt
        a[r - 1] = phi[r - 1] * a0 + K[r - 1] * vt
        # P <- (T P) T' + R R' - K K' F
        for i in range(r):
            for j in range(r - 1):
                Pn[i, j] = phi[j] * M[i, 0] + M[i, j + 1]
            Pn[i, r - 1] = phi[r - 1] * M[i, 0]
        for i in range(r):
            for j in range(r):
                P[i, j] = Pn[i, j] + theta_ext[i] * theta_ext[j] - K[i] * K[j] * Ft
    return v, F, a


@njit(cache=True)
def _expand_pacf(partials, sign):  # pragma: no cover - exercised via wrapper
    """Durbin-Levinson expansion; sign=-1 gives AR blocks, +1 MA blocks."""
    m = partials.shape[0]
    a = np.zeros(m)
    tmp = np.empty(m)
    for k in range(m):
        r = partials[k]
        for i in range(k):
            tmp[i] = a[i] + sign * r * a[k - 1 - i]
        for i in range(k):
            a[i] = tmp[i]
        a[k] = r
    return a


@njit(cache=True)
def _mul_poly(a, b):  # pragma: no cover - exercised via wrapper
    out = np.zeros(a.shape[0] + b.shape[0] - 1)
    for i in range(a.shape[0]):
        for j in range(b.shape[0]):
            out[i + j] += a[i] * b[j]
    return out


@njit(cache=True)
def fused_neg_loglik(u, p, q, P, Q, season, drift, y):  # pragma: no cover
    """Concentrated negative log-likelihood straight from the unconstrained
    vector; one jitted call per optimizer evaluation. Returns +inf outside
    the numerically usable region."""
    ncoef = p + q + P + Q
    partials = np.tanh(u[:ncoef])
    for i in range(ncoef):
        if np.abs(partials[i]) >= 1.0 - 1e-12:
            return np.inf
    mu = u[ncoef] if drift else 0.0
    ar = _expand_pacf(partials[:p], -1.0)
    ma = _expand_pacf(partials[p : p + q], 1.0)
    sar = _expand_pacf(partials[p + q : p + q + P], -1.0)
    sma = _expand_pacf(partials[p + q + P :], 1.0)

    ar_poly = np.empty(p + 1)
    ar_poly[0] = 1.0
    ar_poly[1:] = -ar
    sar_poly = np.zeros(season * P + 1)
    sar_poly[0] = 1.0
    for k in range(P):
        sar_poly[season * (k + 1)] = -sar[k]
    ma_poly = np.empty(q + 1)
    ma_poly[0] = 1.0
    ma_poly[1:] = ma
    sma_poly = np.zeros(season * Q + 1)
    sma_poly[0] = 1.0
    for k in range(Q):
        sma_poly[season * (k + 1)] = sma[k]
    phi_full = -_mul_poly(ar_poly, sar_poly)[1:]
    theta_full = _mul_poly(ma_poly, sma_poly)[1:]

    p_star = phi_full.shape[0]
    q_star = theta_full.shape[0]
    r = max(max(p_star, q_star + 1), 1)
    phi = np.zeros(r)
    phi[:p_star] = phi_full
    theta_ext = np.zeros(r)
    theta_ext[0] = 1.0
    theta_ext[1 : q_star + 1] = theta_full

    P0 = _stationary_cov(phi, theta_ext)
    for i in range(r):
        for j in range(r):
            if not np.isfinite(P0[i, j]):
                return np.inf
    z = y - mu
    v, F, _ = _filter_loop(z, phi, theta_ext, P0)
    n = y.shape[0]
    if v.shape[0] != n:
        return np.inf
    s2 = 0.0
    logF = 0.0
    for t in range(n):
        s2 += v[t] * v[t] / F[t]
        logF += np.log(F[t])
    s2 /= n
    if s2 < SIGMA2_FLOOR:
        s2 = SIGMA2_FLOOR
    ll = -0.5 * n * (np.log(2.0 * np.pi) + 1.0 + np.log(s2)) - 0.5 * logF
    if not np.isfinite(ll):
        return np.inf
    return -ll


def companion_vectors(order: ArimaOrder, params: ArimaParams) -> tuple[np.ndarray, np.ndarray]:
    """Companion column phi and R vector (1, theta...) of the state space."""
    phi_full, theta_full = expand_seasonal(order, params)
    p_star, q_star = phi_full.size, theta_full.size
    r = max(p_star, q_star + 1, 1)
    phi = np.zeros(r)
    phi[:p_star] = phi_full
    theta_ext = np.zeros(r)
    theta_ext[0] = 1.0
    theta_ext[1 : q_star + 1] = theta_full
    return phi, theta_ext


def filter_innovations(order: ArimaOrder, params: ArimaParams, y: np.ndarray):
    """Run the unit-variance filter over y (already differenced, drift removed).

    Returns (v, F, a_final); raises FilterInstabilityError when the
    recursion degenerates.
    """
    phi, theta_ext = companion_vectors(order, params)
    try:
        P0 = _stationary_cov(phi, theta_ext)
    except np.linalg.LinAlgError as exc:
        raise FilterInstabilityError(f"stationary covariance solve failed: {exc}") from exc
    if not np.all(np.isfinite(P0)):
        raise FilterInstabilityError("stationary covariance is not finite")
    y = np.ascontiguousarray(y, dtype=float)
    v, F, a_final = _filter_loop(y, phi, theta_ext, P0)
    if v.shape[0] != y.shape[0] or not (
        np.all(np.isfinite(v)) and np.all(np.isfinite(F))
    ):
        raise FilterInstabilityError("non-finite quantity during Kalman filtering")
    return v, F, a_final


def concentrated_loglik(order: ArimaOrder, params: ArimaParams, y: np.ndarray):
    """Profile sigma2 out of the exact likelihood.

    Returns (loglik, sigma2_hat, v, F). The value equals the exact
    log-likelihood evaluated at the profiled sigma2.
    """
    v, F, _ = filter_innovations(order, params, y)
    n = y.shape[0]
    sigma2 = max(float(np.mean(v * v / F)), SIGMA2_FLOOR)
    ll = -0.5 * n * (np.log(2.0 * np.pi) + 1.0 + np.log(sigma2)) - 0.5 * float(
        np.sum(np.log(F))
    )
    return float(ll), sigma2, v, F


def log_likelihood(order: ArimaOrder, params: ArimaParams, y: np.ndarray) -> float:
    """Exact Gaussian log-likelihood at explicit params (sigma2 included)."""
    params.validate()
    v, F, _ = filter_innovations(order, params, y)
    n = y.shape[0]
    s2F = params.sigma2 * F
    ll = -0.5 * n * np.log(2.0 * np.pi) - 0.5 * float(
        np.sum(np.log(s2F) + v * v / s2F)
    )
    if not np.isfinite(ll):
        raise FilterInstabilityError("log-likelihood is not finite")
    return float(ll)
