"""Cosinor rhythmometry: the linear 24 h cosinor and a sigmoidally transformed variant.

Transformed model::

    Y(t) = minimum + span * logistic(beta * (cos(2*pi*(t - acrophase)/24) - alpha))

with ``alpha`` in (-0.99, 0.99) and ``beta`` in [0.1, 50] enforced through
smooth reparameterization (``alpha = 0.99 tanh v``, ``beta = 0.1 + 49.9
logistic u``).  ``mesor`` and ``amplitude`` of a transformed fit are read off
the fitted curve: its mean over one cycle and half its range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PERIOD_HOURS = 24.0
OMEGA = 2.0 * math.pi / PERIOD_HOURS

ALPHA_MAX = 0.99
BETA_MIN, BETA_MAX = 0.1, 50.0
START_ACROPHASES = (0.0, 6.0, 12.0, 18.0)
RSS_RTOL = 1e-10
STEP_TOL = 1e-8
MAX_ITER = 500
SHAPE_GRID_ALPHA = (-0.8, -0.5, -0.2, 0.0, 0.2, 0.5, 0.8)
SHAPE_GRID_BETA = (0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0)


class FitError(ValueError):
    pass


@dataclass
class CosinorFit:
    mesor: float
    amplitude: float
    acrophase: float
    rss: float
    f_stat: float
    n_params: int
    converged: bool = True
    n_iter: int = 0
    alpha: float | None = None
    beta: float | None = None
    minimum: float | None = None
    span: float | None = None


def _as_arrays(times, values) -> tuple[np.ndarray, np.ndarray]:
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if t.shape != y.shape or t.ndim != 1:
        raise FitError("times and values must be 1-D arrays of equal length")
    if not (np.isfinite(t).all() and np.isfinite(y).all()):
        raise FitError("non-finite input")
    return t, y


def _design(t: np.ndarray) -> np.ndarray:
    return np.column_stack([np.ones_like(t), np.cos(OMEGA * t), np.sin(OMEGA * t)])


def _check_rank(design: np.ndarray) -> None:
    if design.shape[0] < 3 or np.linalg.matrix_rank(design) < 3:
        raise FitError("rank-deficient cosinor design: need at least three distinct phases")


def f_statistic(fit: CosinorFit, values) -> float:
    """Overall model F against the flat-mean model; ``inf`` when RSS vanishes."""
    y = np.asarray(values, dtype=float)
    n, p = len(y), fit.n_params
    if n <= p:
        raise FitError(f"need more than {p} samples for an F statistic, got {n}")
    tss = float(np.sum((y - y.mean()) ** 2))
    explained = tss - fit.rss
    if explained <= 0.0:
        return 0.0
    if fit.rss <= 1e-14 * tss:
        return math.inf
    return (explained / (p - 1)) / (fit.rss / (n - p))


def fit_basic(times, values) -> CosinorFit:
    """Least-squares fit of mesor + amplitude * cos(2 pi (t - acrophase) / 24)."""
    t, y = _as_arrays(times, values)
    X = _design(t)
    _check_rank(X)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    mesor, a, b = coef
    amplitude = float(math.hypot(a, b))
    acrophase = (math.atan2(b, a) / OMEGA) % PERIOD_HOURS if amplitude > 0 else 0.0
    rss = float(np.sum((y - X @ coef) ** 2))
    fit = CosinorFit(float(mesor), amplitude, _wrap(acrophase), rss, 0.0, n_params=3)
    fit.f_stat = f_statistic(fit, y)
    return fit


def _wrap(phase: float) -> float:
    phase = phase % PERIOD_HOURS
    return 0.0 if phase >= PERIOD_HOURS else phase


def _logistic(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _logit(p: float) -> float:
    return math.log(p / (1.0 - p))


def transformed_curve(t, minimum, span, alpha, beta, acrophase):
    c = np.cos(OMEGA * (np.asarray(t, dtype=float) - acrophase))
    return minimum + span * _logistic(beta * (c - alpha))


def _unpack(theta: np.ndarray) -> tuple[float, float, float, float, float]:
    m, s, v, u, phi = (float(a) for a in theta)
    alpha = ALPHA_MAX * math.tanh(v)
    beta = BETA_MIN + (BETA_MAX - BETA_MIN) * float(_logistic(u))
    return m, s, alpha, beta, phi


def _residual_and_jacobian(theta: np.ndarray, t: np.ndarray, y: np.ndarray):
    m, s, alpha, beta, phi = _unpack(theta)
    arg = OMEGA * (t - phi)
    c = np.cos(arg)
    sig = _logistic(beta * (c - alpha))
    dsig = sig * (1.0 - sig)
    r = y - (m + s * sig)
    dalpha_dv = ALPHA_MAX * (1.0 - math.tanh(theta[2]) ** 2)
    lu = float(_logistic(theta[3]))
    dbeta_du = (BETA_MAX - BETA_MIN) * lu * (1.0 - lu)
    J = np.empty((len(t), 5))
    J[:, 0] = 1.0
    J[:, 1] = sig
    J[:, 2] = -s * dsig * beta * dalpha_dv
    J[:, 3] = s * dsig * (c - alpha) * dbeta_du
    J[:, 4] = s * dsig * beta * OMEGA * np.sin(arg)
    return r, J


def _levenberg_marquardt(theta: np.ndarray, t: np.ndarray, y: np.ndarray,
                         max_iter: int = MAX_ITER) -> tuple[np.ndarray, float, bool, int]:
    r, J = _residual_and_jacobian(theta, t, y)
    rss = float(r @ r)
    mu = 1e-3
    for it in range(1, max_iter + 1):
        if rss == 0.0:
            return theta, rss, True, it - 1
        A = J.T @ J
        g = J.T @ r
        d = np.diag(A).copy()
        d = np.maximum(d, 1e-12 * max(d.max(), 1e-300))
        while True:
            try:
                step = np.linalg.solve(A + mu * np.diag(d), g)
            except np.linalg.LinAlgError:
                mu *= 10.0
                if mu > 1e16:
                    return theta, rss, False, it
                continue
            cand = theta + step
            r_new, J_new = _residual_and_jacobian(cand, t, y)
            rss_new = float(r_new @ r_new)
            small_step = np.linalg.norm(step) <= STEP_TOL * (np.linalg.norm(theta) + STEP_TOL)
            if rss_new < rss:
                rel = (rss - rss_new) / rss
                theta, r, J, rss = cand, r_new, J_new, rss_new
                mu = max(mu / 3.0, 1e-12)
                if rel < RSS_RTOL or small_step:
                    return theta, rss, True, it
                break
            if small_step:
                return theta, rss, True, it
            mu *= 2.0
            if mu > 1e16:
                return theta, rss, False, it
    return theta, rss, False, max_iter


def _canonical(theta: np.ndarray) -> tuple[float, float, float, float, float]:
    m, s, alpha, beta, phi = _unpack(theta)
    if s < 0:
        # m + s*L(b(c - a)) == (m + s) + |s|*L(b(-c + a)), and -c is the cosine shifted half a cycle
        m, s, alpha, phi = m + s, -s, -alpha, phi + PERIOD_HOURS / 2.0
    return m, s, alpha, beta, _wrap(phi)


def _shape_start(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Start at the linear-fit acrophase and the best (alpha, beta) on a coarse grid.

    For fixed shape and phase the model is linear in (minimum, span), so each
    grid point costs one two-column least-squares solve.
    """
    X = _design(t)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    phi = math.atan2(coef[2], coef[1]) / OMEGA
    c = np.cos(OMEGA * (t - phi))
    best = None
    for alpha in SHAPE_GRID_ALPHA:
        for beta in SHAPE_GRID_BETA:
            A = np.column_stack([np.ones_like(t), _logistic(beta * (c - alpha))])
            (m, s), *_ = np.linalg.lstsq(A, y, rcond=None)
            rss = float(np.sum((y - A @ (m, s)) ** 2))
            if best is None or rss < best[0]:
                best = (rss, m, s, alpha, beta)
    _, m, s, alpha, beta = best
    v = math.atanh(alpha / ALPHA_MAX)
    u = _logit((beta - BETA_MIN) / (BETA_MAX - BETA_MIN))
    return np.array([m, s, v, u, phi])


def fit_transformed(times, values, starts=START_ACROPHASES, max_iter: int = MAX_ITER) -> CosinorFit:
    """Multi-start nonlinear least squares for the sigmoidally transformed cosinor.

    One start comes from a coarse shape grid at the linear-fit acrophase;
    the others use a neutral shape at each acrophase in ``starts``.
    """
    t, y = _as_arrays(times, values)
    _check_rank(_design(t))
    lo, hi = np.percentile(y, [5, 90])
    u0 = _logit((2.0 - BETA_MIN) / (BETA_MAX - BETA_MIN))
    thetas = [_shape_start(t, y)] + [np.array([lo, hi - lo, 0.0, u0, float(phi0)]) for phi0 in starts]
    best = None
    any_converged = False
    total_iter = 0
    for theta0 in thetas:
        theta, rss, ok, n_iter = _levenberg_marquardt(theta0, t, y, max_iter)
        any_converged |= ok
        total_iter += n_iter
        if best is None or rss < best[1]:
            best = (theta, rss, n_iter)
    theta, rss, n_iter = best
    m, s, alpha, beta, phi = _canonical(theta)
    grid = np.arange(24 * 60) / 60.0
    curve = transformed_curve(grid, m, s, alpha, beta, 0.0)
    top = m + s * float(_logistic(beta * (1.0 - alpha)))
    bottom = m + s * float(_logistic(beta * (-1.0 - alpha)))
    fit = CosinorFit(float(curve.mean()), float(top - bottom) / 2.0, phi, rss, 0.0, n_params=5,
                     converged=any_converged, n_iter=total_iter, alpha=alpha, beta=beta,
                     minimum=m, span=s)
    fit.f_stat = f_statistic(fit, y)
    return fit
