"""L1-penalized least squares by cyclic coordinate descent, with K-fold CV over lambda."""

from __future__ import annotations

import numpy as np

N_LAMBDA = 50
LAMBDA_RATIO = 1e-3
TOL = 1e-7


class StandardizeError(ValueError):
    def __init__(self, column: int):
        super().__init__(f"column {column} is constant")
        self.column = column


def standardize(X) -> np.ndarray:
    """Column z-scores with population standard deviation (so X_j'X_j / n = 1)."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    sd = X.std(axis=0)
    for j in np.flatnonzero(~(sd > 0)):
        raise StandardizeError(int(j))
    return (X - X.mean(axis=0)) / sd


def _check_finite(X: np.ndarray, y: np.ndarray) -> None:
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ValueError("non-finite values in LASSO inputs")


def _polish(G: list, c: list, lam: float, beta: list) -> list | None:
    """Exact minimizer for the current active set and signs, if it keeps those signs."""
    active = [j for j, b in enumerate(beta) if b != 0.0]
    if not active:
        return None
    signs = np.sign([beta[j] for j in active])
    Gaa = np.array([[G[i][j] for j in active] for i in active])
    try:
        sol = np.linalg.solve(Gaa, np.array([c[j] for j in active]) - lam * signs)
    except np.linalg.LinAlgError:
        return None
    if not (np.sign(sol) == signs).all():
        return None
    out = [0.0] * len(beta)
    for j, v in zip(active, sol.tolist()):
        out[j] = v
    return out


def _cd_gram(G: list, c: list, lam: float, beta: list, tol: float, max_sweeps: int) -> list:
    """Coordinate descent on the Gram form; lists keep the p x p inner loop cheap.

    Full sweeps alternate with sweeps over the nonzero set.  When the nonzero
    set stops changing, its stationarity system is solved directly; the
    solver still only returns after a full sweep moves nothing by ``tol``.
    """
    p = len(c)
    everything = range(p)

    def gradient(b):
        return [c[i] - sum(G[i][k] * b[k] for k in everything) for i in everything]

    grad = gradient(beta)
    coords = everything
    prev_support = failed_support = None
    for sweep in range(max_sweeps):
        max_delta = 0.0
        for j in coords:
            gjj = G[j][j]
            if gjj <= 0.0:
                continue
            old = beta[j]
            z = grad[j] + gjj * old
            if z > lam:
                new = (z - lam) / gjj
            elif z < -lam:
                new = (z + lam) / gjj
            else:
                new = 0.0
            delta = new - old
            if delta != 0.0:
                beta[j] = new
                Gj = G[j]
                for i in everything:
                    grad[i] -= Gj[i] * delta
                if abs(delta) > max_delta:
                    max_delta = abs(delta)
        if max_delta < tol:
            if coords is everything:
                return beta
            coords = everything
            continue
        support = tuple(j for j in everything if beta[j] != 0.0)
        if support == prev_support and sweep >= 5 and support != failed_support:
            polished = _polish(G, c, lam, beta)
            if polished is not None:
                beta = polished
                grad = gradient(beta)
                coords = everything
                prev_support = None
                continue
            # singular or sign-violating: plain sweeps until the support moves
            failed_support = support
        prev_support = support
        if coords is everything and len(support) < p:
            coords = support
    raise ArithmeticError("coordinate descent did not converge")


def lasso_cd(X, y, lam: float, beta0=None, tol: float = TOL, max_sweeps: int = 1_000_000) -> np.ndarray:
    """Minimize (1/2n)||y - X b||^2 + lam ||b||_1; no intercept.

    Cyclic coordinate descent; stops once a full sweep changes no
    coefficient by ``tol`` or more.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_finite(X, y)
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    n, p = X.shape
    beta = [0.0] * p if beta0 is None else [float(b) for b in beta0]
    G = (X.T @ X / n).tolist()
    c = (X.T @ y / n).tolist()
    return np.array(_cd_gram(G, c, float(lam), beta, tol, max_sweeps))


def lambda_max(X, y) -> float:
    X = np.asarray(X, dtype=float)
    return float(np.max(np.abs(X.T @ np.asarray(y, dtype=float))) / X.shape[0])


def lambda_grid(lmax: float, n: int = N_LAMBDA, ratio: float = LAMBDA_RATIO) -> np.ndarray:
    """Log-spaced, descending from ``lmax`` to ``ratio * lmax``."""
    return np.geomspace(lmax, lmax * ratio, n)


def cv_curve(X, y, k: int = 10, seed=0, grid=None) -> tuple[np.ndarray, np.ndarray]:
    """Mean held-out squared error along the lambda grid for seeded K-fold splits."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_finite(X, y)
    n = X.shape[0]
    if n < k:
        raise ValueError(f"{n} rows cannot form {k} folds")
    if grid is None:
        grid = lambda_grid(lambda_max(X, y))
    folds = np.array_split(np.random.default_rng(seed).permutation(n), k)
    errors = np.zeros((k, len(grid)))
    for i, test in enumerate(folds):
        train = np.setdiff1d(np.arange(n), test)
        Xt, yt = X[train], y[train]
        G = (Xt.T @ Xt / len(train)).tolist()
        c = (Xt.T @ yt / len(train)).tolist()
        beta = [0.0] * X.shape[1]
        path = np.empty((len(grid), X.shape[1]))
        for g, lam in enumerate(grid):
            beta = _cd_gram(G, c, float(lam), beta, TOL, 1_000_000)
            path[g] = beta
        resid = y[test][:, None] - X[test] @ path.T
        errors[i] = np.mean(resid ** 2, axis=0)
    return np.asarray(grid), errors.mean(axis=0)


def cv_lambda(X, y, k: int = 10, seed=0) -> float:
    """Lambda minimizing K-fold CV error; ties go to the larger lambda."""
    lmax = lambda_max(X, y)
    if lmax == 0:
        return 0.0
    grid, err = cv_curve(X, y, k, seed)
    return float(grid[int(np.argmin(err))])
