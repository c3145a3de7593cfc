"""Maximum-likelihood fitting and h-step forecasting of seasonal ARIMA models.

Estimation maximizes the exact likelihood of the differenced series with
sigma2 profiled out analytically. The optimizer is a derivative-free
simplex run on the unconstrained parameter space from transforms.py,
with a small number of restarts from perturbed optima.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize

from . import kalman
from .errors import ConvergenceError, FilterInstabilityError, SeriesLengthError
from .orders import ArimaOrder, ArimaParams, FittedArima, expand_seasonal
from .series import (
    Quarter,
    QuarterlySeries,
    difference,
    differencing_polynomial,
    integrate,
)
from .transforms import transform_params

OBJECTIVE_RTOL = 1e-8
MAX_RESTARTS = 3
_RESTART_SCALE = 0.05


def log_likelihood(order: ArimaOrder, params: ArimaParams, s: QuarterlySeries) -> float:
    """Exact Gaussian log-likelihood of the differenced, drift-subtracted
    series under the multiplicative seasonal ARMA."""
    w = difference(s, order.d, order.D, order.season)
    if len(w) < 2:
        raise SeriesLengthError("need at least 2 observations after differencing")
    return kalman.log_likelihood(order, params, w.values - params.drift_mu)


def _objective(u: np.ndarray, order: ArimaOrder, w: np.ndarray) -> float:
    try:
        return float(
            kalman.fused_neg_loglik(
                np.asarray(u, dtype=float), order.p, order.q, order.P, order.Q,
                order.season, order.drift, w,
            )
        )
    except (FilterInstabilityError, FloatingPointError, np.linalg.LinAlgError):
        return np.inf


def _optimize(order: ArimaOrder, w: np.ndarray, seed: int) -> np.ndarray:
    dim = order.k - 1
    x0 = np.zeros(dim)
    if order.drift:
        x0[-1] = float(np.mean(w))
    f0 = _objective(x0, order, w)
    ftol = OBJECTIVE_RTOL * (1.0 + abs(f0 if np.isfinite(f0) else 0.0))
    opts = {"maxiter": 200 * dim, "xatol": 1e-8, "fatol": ftol}

    res = minimize(_objective, x0, args=(order, w), method="Nelder-Mead", options=opts)
    best_x, best_f = res.x, res.fun
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RESTARTS):
        start = best_x + _RESTART_SCALE * rng.standard_normal(dim)
        res = minimize(_objective, start, args=(order, w), method="Nelder-Mead", options=opts)
        if res.fun < best_f:
            improved = best_f - res.fun
            best_x, best_f = res.x, res.fun
            if improved <= OBJECTIVE_RTOL * (1.0 + abs(best_f)):
                break
        else:
            break
    if not np.isfinite(best_f):
        raise ConvergenceError(
            f"likelihood optimization failed for {order}",
            best_point=best_x,
            best_objective=float(best_f),
        )
    return best_x


def fit_sarima(order: ArimaOrder, s: QuarterlySeries, seed: int = 0) -> FittedArima:
    """Fit by exact maximum likelihood; deterministic given (series, order, seed)."""
    diffed = difference(s, order.d, order.D, order.season)
    w = diffed.values
    nobs = w.size
    if nobs < order.k + 2:
        raise SeriesLengthError(
            f"{nobs} differenced observations are too few to fit {order} "
            f"(need at least {order.k + 2})"
        )
    if order.k - 1 == 0:
        params = ArimaParams()
    else:
        u = _optimize(order, w, seed)
        params = transform_params(u, order)
    ll, sigma2, v, F = kalman.concentrated_loglik(order, params, w - params.drift_mu)
    params = ArimaParams(
        ar=params.ar, ma=params.ma, sar=params.sar, sma=params.sma,
        drift_mu=params.drift_mu, sigma2=sigma2,
    )
    k = order.k
    aic = -2.0 * ll + 2.0 * k
    bic = -2.0 * ll + k * np.log(nobs)
    resid = QuarterlySeries(diffed.start, v / np.sqrt(sigma2 * F))
    return FittedArima(
        order=order, params=params, loglik=ll, aic=float(aic), bic=float(bic),
        nobs=nobs, residuals=resid, train_end=s.end,
    )


def forecast(model: FittedArima, s: QuarterlySeries, h: int) -> QuarterlySeries:
    """Minimum-MSE point forecasts on the level scale, starting the quarter
    after the training window ends."""
    if h <= 0:
        raise ValueError(f"forecast horizon must be positive, got {h}")
    if s.end != model.train_end:
        raise ValueError(
            f"series ends {s.end} but the model was trained through {model.train_end}"
        )
    order, params = model.order, model.params
    w = difference(s, order.d, order.D, order.season).values
    z = w - params.drift_mu

    phi, _ = kalman.companion_vectors(order, params)
    _, _, state = kalman.filter_innovations(order, params, z)
    r = phi.size
    z_hat = np.empty(h)
    for j in range(h):
        z_hat[j] = state[0]
        nxt = np.empty(r)
        nxt[: r - 1] = phi[: r - 1] * state[0] + state[1:]
        nxt[r - 1] = phi[r - 1] * state[0]
        state = nxt
    w_hat = z_hat + params.drift_mu

    # Rebuild levels: x_t = w_t - sum_k c_k x_{t-k} with c the differencing
    # polynomial and x history drawn from observed then forecasted levels.
    c = differencing_polynomial(order.d, order.D, order.season)
    lag = c.size - 1
    history = list(s.values[-lag:]) if lag else []
    out = np.empty(h)
    for j in range(h):
        x = w_hat[j]
        for k in range(1, lag + 1):
            x -= c[k] * history[-k]
        out[j] = x
        if lag:
            history.append(x)
            history.pop(0)
    return QuarterlySeries(model.train_end.successor(), out)


def simulate_sarima(
    order: ArimaOrder,
    params: ArimaParams,
    n: int,
    rng: np.random.Generator,
    start: Quarter = Quarter(2010, 1),
    level0: float = 0.0,
) -> QuarterlySeries:
    """Draw a series from the model (stationary ARMA start, then integrate).

    Intended for Monte Carlo checks; the first d + D*season integrated
    values are anchored at level0.
    """
    phi, theta = expand_seasonal(order, params)
    p_star, q_star = phi.size, theta.size
    burn = 200 + 10 * (p_star + q_star)
    eps = rng.normal(scale=np.sqrt(params.sigma2), size=n + burn)
    z = np.zeros(n + burn)
    for t in range(n + burn):
        acc = eps[t]
        for i in range(1, min(p_star, t) + 1):
            acc += phi[i - 1] * z[t - i]
        for j in range(1, min(q_star, t) + 1):
            acc += theta[j - 1] * eps[t - j]
        z[t] = acc
    w = z[burn:] + params.drift_mu
    need = order.d + order.D * order.season
    if need == 0:
        return QuarterlySeries(start, w + level0)
    diffed = QuarterlySeries(start.advance(need), w[: n - need])
    inits = [level0] * need
    return integrate(diffed, order.d, order.D, order.season, inits)
