"""Independent reference implementations used as test oracles.

Everything here is written as plain loops or generic linear algebra so it
shares no code path with the package.
"""

import math

import numpy as np
from scipy import stats


def iv_oracle(values, times=None, step=1 / 6):
    n = len(values)
    mean = sum(values) / n
    denom = sum((v - mean) ** 2 for v in values) / n
    num, pairs = 0.0, 0
    for i in range(1, n):
        if times is not None and abs((times[i] - times[i - 1]) - step) > 1e-6 * step:
            continue
        num += (values[i] - values[i - 1]) ** 2
        pairs += 1
    return (num / pairs) / denom


def hourly_means_oracle(values, hours):
    sums, counts = [0.0] * 24, [0] * 24
    for v, h in zip(values, hours):
        sums[h] += v
        counts[h] += 1
    return [s / c for s, c in zip(sums, counts)]


def is_oracle(values, hours):
    n = len(values)
    mean = sum(values) / n
    prof = hourly_means_oracle(values, hours)
    return (sum((p - mean) ** 2 for p in prof) / 24) / (sum((v - mean) ** 2 for v in values) / n)


def m10_l5_oracle(profile):
    """Brute force over the 24 start hours with modular indexing."""
    m10 = max(sum(profile[(h + k) % 24] for k in range(10)) for h in range(24)) / 10
    l5 = min(sum(profile[(h + k) % 24] for k in range(5)) for h in range(24)) / 5
    ra = 0.0 if m10 + l5 == 0 else (m10 - l5) / (m10 + l5)
    return m10, l5, ra


def m10_l5_indicator(profile):
    """Literal 1-based indicator-sum form: the window runs to min(h+w-1, 24), then wraps to 1..h-(25-w)."""
    X = {h: profile[h - 1] for h in range(1, 25)}

    def window(h, w):
        total = sum(X[j] for j in range(h, min(h + w - 1, 24) + 1))
        if h > 25 - w:
            total += sum(X[j] for j in range(1, h - (25 - w) + 1))
        return total / w

    return max(window(h, 10) for h in X), min(window(h, 5) for h in X)


def lomb_scargle_oracle(times, values, freqs):
    """Scargle power as explained variance of a per-frequency sinusoid least-squares fit.

    For centered data the classic tau-shifted formula equals the regression
    sum of squares of y on [cos wt, sin wt], halved and normalized by the
    ddof=1 sample variance.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    y = y - y.mean()
    var = float(y @ y) / (len(y) - 1)
    out = []
    for f in freqs:
        w = 2 * math.pi * f
        A = np.column_stack([np.cos(w * t), np.sin(w * t)])
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        fitted = A @ coef
        out.append(float(fitted @ fitted) / (2 * var))
    return np.array(out)


def welch_oracle(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    va, vb = a.var(ddof=1) / len(a), b.var(ddof=1) / len(b)
    t = (a.mean() - b.mean()) / math.sqrt(va + vb)
    df = (va + vb) ** 2 / (va ** 2 / (len(a) - 1) + vb ** 2 / (len(b) - 1))
    return t, df, 2 * stats.t.sf(abs(t), df)


def lasso_kkt_violation(X, y, beta, lam):
    """Max subgradient violation for (1/2n)||y - Xb||^2 + lam ||b||_1."""
    n = len(y)
    grad = X.T @ (y - X @ beta) / n
    worst = 0.0
    for g, b in zip(grad, beta):
        if b != 0:
            worst = max(worst, abs(g - lam * math.copysign(1.0, b)))
        else:
            worst = max(worst, abs(g) - lam)
    return worst
