"""Metric inter-relation network from round-robin LASSO regressions.

Every metric is regressed on the remaining ones (all z-scored) with lambda
chosen by seeded K-fold CV; the edge between two metrics is the mean of the
two coefficients that link them.
"""

from __future__ import annotations

import json
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .compare import METRIC_LABELS
from .lasso import StandardizeError, cv_lambda, lasso_cd, standardize

log = logging.getLogger(__name__)

MIN_ROWS = 20
EDGE_EPS = 1e-6


class ConstantMetricError(ValueError):
    def __init__(self, metric: str):
        super().__init__(f"metric {metric} is constant across participants and cannot enter the network")
        self.metric = metric


@dataclass
class MetricGraph:
    nodes: list[str]
    weights: np.ndarray
    r2: np.ndarray
    lambdas: np.ndarray
    coefs: np.ndarray  # coefs[j, i]: coefficient of metric i in the model for metric j
    seed: int
    n_rows: int
    n_dropped: int = 0
    folds: int = 10
    meta: dict = field(default_factory=dict)

    def edges(self, eps: float = EDGE_EPS) -> list[tuple[str, str, float]]:
        out = []
        for i in range(len(self.nodes)):
            for j in range(i + 1, len(self.nodes)):
                w = float(self.weights[i, j])
                if abs(w) > eps:
                    out.append((self.nodes[i], self.nodes[j], w))
        return out

    def to_json(self) -> str:
        doc = {
            "nodes": self.nodes,
            "weights": self.weights.tolist(),
            "r2": dict(zip(self.nodes, self.r2.tolist())),
            "lambda": dict(zip(self.nodes, self.lambdas.tolist())),
            "seed": self.seed,
            "cv_folds": self.folds,
            "n_rows": self.n_rows,
            "n_dropped": self.n_dropped,
        }
        doc.update(self.meta)
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"

    def to_dot(self, name: str = "metrics") -> str:
        lines = [f"graph {name} {{", "  node [shape=circle];"]
        for node, r2 in zip(self.nodes, self.r2):
            lines.append(f'  "{node}" [label="{node}", r2="{float(r2):.4f}"];')
        for a, b, w in self.edges():
            color = "green" if w > 0 else "red"
            lines.append(f'  "{a}" -- "{b}" [color={color}, penwidth={10 * abs(w):.3f}, weight="{w:.6f}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def mgm_network(matrix, labels=METRIC_LABELS, seed: int = 0, k: int = 10) -> MetricGraph:
    """Round-robin LASSO network over the columns of ``matrix`` (rows = participants).

    Rows with any non-finite value are dropped first.  Per-node CV folds use
    independent child seeds spawned from ``seed``.
    """
    M = np.asarray(matrix, dtype=float)
    labels = list(labels)
    if M.ndim != 2 or M.shape[1] != len(labels):
        raise ValueError(f"expected an n x {len(labels)} matrix")
    keep = np.isfinite(M).all(axis=1)
    n_dropped = int((~keep).sum())
    if n_dropped:
        log.info("dropping %d rows with undefined metrics", n_dropped)
    M = M[keep]
    n, p = M.shape
    if n < MIN_ROWS:
        warnings.warn(f"only {n} complete rows for the network (recommended >= {MIN_ROWS})", stacklevel=2)
    try:
        Z = standardize(M)
    except StandardizeError as exc:
        raise ConstantMetricError(labels[exc.column]) from None
    children = np.random.SeedSequence(seed).spawn(p)
    coefs = np.zeros((p, p))
    r2 = np.zeros(p)
    lambdas = np.zeros(p)
    for j in range(p):
        others = [i for i in range(p) if i != j]
        X, y = Z[:, others], Z[:, j]
        lam = cv_lambda(X, y, k=k, seed=children[j])
        beta = lasso_cd(X, y, lam)
        coefs[j, others] = beta
        lambdas[j] = lam
        resid = y - X @ beta
        r2[j] = min(1.0, max(0.0, 1.0 - float(resid @ resid) / float(y @ y)))
    weights = (coefs + coefs.T) / 2.0
    np.fill_diagonal(weights, 0.0)
    return MetricGraph(labels, weights, r2, lambdas, coefs, seed, n, n_dropped, k)
