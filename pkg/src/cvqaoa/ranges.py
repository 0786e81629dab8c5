"""Order-of-magnitude estimate of the optimal (eta, gamma) and the search box."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass


class DegenerateEstimateError(ValueError):
    pass


class DegenerateEstimateWarning(UserWarning):
    pass


# Estimates within this factor of 1 are treated as "order one" and get the
# box [1/margin, margin] centred on 1, i.e. [0.1, 10] for the default margin.
ORDER_ONE_FACTOR = math.sqrt(2.0)


@dataclass(frozen=True)
class RangeEstimate:
    product_estimate: float
    gamma_estimate: float
    eta_estimate: float
    search_box: tuple[float, float, float, float]  # eta_lo, eta_hi, gamma_lo, gamma_hi


def estimate_product(x_min_scale: float, grad_scale: float) -> float:
    """|x_min / <grad f(x_in)>|, the expected size of eta_opt * gamma_opt."""
    if grad_scale == 0:
        raise DegenerateEstimateError("gradient scale is zero")
    if x_min_scale == 0:
        warnings.warn("x_min scale is zero: no displacement needed, product estimate is 0",
                      DegenerateEstimateWarning, stacklevel=2)
    return abs(x_min_scale / grad_scale)


def estimate_gamma(var_ancilla_x: float, var_input_p: float) -> float:
    """Minimizer of gamma^2 <p_in^2> + (4 / gamma^2) <x_a^2> over gamma > 0."""
    if not (var_ancilla_x > 0 and var_input_p > 0):
        raise ValueError("variances must be positive")
    return (4.0 * var_ancilla_x / var_input_p) ** 0.25


def quadratic_heuristic(var_input_x: float, var_input_p: float, var_ancilla_x: float) -> tuple[float, float]:
    """(product, gamma) estimates for f(x) = (x - a)^2 using sigma = sqrt(<x_in^2>) as scale."""
    sigma = math.sqrt(var_input_x)
    return estimate_product(sigma, sigma), estimate_gamma(var_ancilla_x, var_input_p)


def _is_order_one(value: float) -> bool:
    return abs(math.log10(value)) <= math.log10(ORDER_ONE_FACTOR) + 1e-9


def derive_search_box(product: float, gamma_est: float, margin: float = 10.0) -> RangeEstimate:
    if not (product > 0 and gamma_est > 0):
        raise ValueError("product and gamma estimates must be positive")
    if not margin > 1:
        raise ValueError("margin must exceed 1")
    eta_est = product / gamma_est
    if _is_order_one(eta_est) and _is_order_one(gamma_est) and margin > 2 * ORDER_ONE_FACTOR:
        box = (1.0 / margin, margin, 1.0 / margin, margin)
    else:
        box = (eta_est / margin, eta_est * margin, gamma_est / margin, gamma_est * margin)
    return RangeEstimate(product, gamma_est, eta_est, box)
