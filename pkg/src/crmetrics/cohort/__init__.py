"""Cohort statistics: Welch comparisons and the metric network."""

from .compare import (GROUPS, METRIC_LABELS, METRICS, RQ1_METRICS, RQ2_METRICS, ComparisonRow,
                      CrMetricSet, compare_sensors)
from .lasso import cv_lambda, lasso_cd, lambda_max, standardize
from .network import ConstantMetricError, MetricGraph, mgm_network
from .welch import DegenerateTest, WelchResult, betainc, stars, welch_t

__all__ = [
    "GROUPS", "METRIC_LABELS", "METRICS", "RQ1_METRICS", "RQ2_METRICS", "ComparisonRow",
    "CrMetricSet", "compare_sensors", "cv_lambda", "lasso_cd", "lambda_max", "standardize",
    "ConstantMetricError", "MetricGraph", "mgm_network", "DegenerateTest", "WelchResult",
    "betainc", "stars", "welch_t",
]
