"""Normalized Jacobi polynomial bases, Gauss-Jacobi quadrature, weighted norms.

The basis ``wJ_k`` is the Jacobi family for the weight
``omega(x) = (1-x)^alpha (1+x)^beta`` on [-1, 1], normalized to unit weighted
L2 norm. Evaluation uses the three-term recurrence on the classical
(unnormalized) family followed by one division per degree; explicit closed
forms are unusable at large degree and appear only in test oracles.

A rescaled variant lives on [0, 1]: ``Q_k(x) = wJ_k(2x - 1) / sqrt(2)``,
orthonormal there against the weight ``4 * omega(2x - 1)``.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import beta as beta_function
from scipy.special import gammaln

__all__ = [
    "JacobiParams",
    "JacobiBasis",
    "QuadratureRule",
    "norm_constant",
    "norm_constants",
    "omega_weight",
    "uniform_bound",
    "gauss_jacobi_rule",
    "omega_norm",
    "SYMMETRIC",
    "UNIT",
]

SYMMETRIC = "symmetric"   # the interval [-1, 1]
UNIT = "unit"             # the interval [0, 1], rescaled basis


@dataclass(frozen=True)
class JacobiParams:
    """Exponent pair (alpha, beta) of the Jacobi weight; both must be >= -1/2."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha >= -0.5 and self.beta >= -0.5):
            raise ValueError(
                f"alpha and beta must be >= -1/2, got ({self.alpha}, {self.beta})"
            )

    @property
    def mu(self) -> float:
        return max(self.alpha, self.beta)

    @property
    def c_ab(self) -> float:
        return (self.alpha + self.beta + 1.0) / 2.0

    @cached_property
    def gamma_ab(self) -> float:
        # total mass of the weight: integral of omega over [-1, 1]
        return 2.0 ** (self.alpha + self.beta + 1.0) * beta_function(
            self.alpha + 1.0, self.beta + 1.0
        )


def omega_weight(params: JacobiParams, x):
    """Jacobi weight (1-x)^alpha (1+x)^beta, elementwise."""
    x = np.asarray(x, dtype=float)
    return (1.0 - x) ** params.alpha * (1.0 + x) ** params.beta


def norm_constant(params: JacobiParams, k: int) -> float:
    """Squared weighted L2 norm h_k of the classical Jacobi polynomial.

    h_0 is the limit value gamma_ab, which agrees with the k=0 closed form
    whenever the latter is defined (it is 0/0 at alpha+beta+1 = 0).
    """
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    a, b = params.alpha, params.beta
    if k == 0:
        return params.gamma_ab
    return math.exp(
        (a + b + 1.0) * math.log(2.0)
        + gammaln(k + a + 1.0)
        + gammaln(k + b + 1.0)
        - gammaln(k + 1.0)
        - math.log(2.0 * k + a + b + 1.0)
        - gammaln(k + a + b + 1.0)
    )


def norm_constants(params: JacobiParams, degree_max: int) -> np.ndarray:
    return np.array([norm_constant(params, k) for k in range(degree_max + 1)])


def _recurrence_table(params: JacobiParams, x: np.ndarray, degree_max: int) -> np.ndarray:
    """Unnormalized Jacobi values, shape (degree_max+1,) + x.shape."""
    a, b = params.alpha, params.beta
    out = np.zeros((degree_max + 1,) + x.shape)
    out[0] = 1.0
    if degree_max >= 1:
        out[1] = 0.5 * ((a + b + 2.0) * x + (a - b))
    for k in range(2, degree_max + 1):
        ab = a + b
        c1 = 2.0 * k * (k + ab) * (2.0 * k + ab - 2.0)
        c2 = (2.0 * k + ab - 1.0) * (a * a - b * b)
        c3 = (2.0 * k + ab - 2.0) * (2.0 * k + ab - 1.0) * (2.0 * k + ab)
        c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + ab)
        out[k] = ((c2 + c3 * x) * out[k - 1] - c4 * out[k - 2]) / c1
    return out


class JacobiBasis:
    """The first ``degree_max + 1`` normalized Jacobi polynomials on a domain.

    Parameters
    ----------
    params : JacobiParams
    degree_max : int
        Largest degree N; the basis has N + 1 members.
    domain : str
        ``"symmetric"`` for [-1, 1] (default) or ``"unit"`` for the rescaled
        family on [0, 1].
    """

    def __init__(self, params: JacobiParams, degree_max: int, domain: str = SYMMETRIC):
        if degree_max < 0:
            raise ValueError(f"degree_max must be >= 0, got {degree_max}")
        if domain not in (SYMMETRIC, UNIT):
            raise ValueError(f"unknown domain {domain!r}")
        self.params = params
        self.degree_max = int(degree_max)
        self.domain = domain
        self._sqrt_h = np.sqrt(norm_constants(params, degree_max))

    @property
    def size(self) -> int:
        return self.degree_max + 1

    def _to_symmetric(self, x: np.ndarray) -> np.ndarray:
        if self.domain == UNIT:
            if np.any(x < -1e-12) or np.any(x > 1.0 + 1e-12):
                raise ValueError("sample point outside [0, 1]")
            return 2.0 * x - 1.0
        if np.any(np.abs(x) > 1.0 + 1e-12):
            raise ValueError("sample point outside [-1, 1]")
        return x

    def table(self, x) -> np.ndarray:
        """Values of all basis members at the points x, shape (len(x), N+1)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        t = np.clip(self._to_symmetric(x), -1.0, 1.0)
        vals = _recurrence_table(self.params, t, self.degree_max)
        vals /= self._sqrt_h[:, None]
        if self.domain == UNIT:
            vals /= math.sqrt(2.0)
        return vals.T

    def row(self, x: float) -> np.ndarray:
        """Length-(N+1) vector of all basis values at a single point."""
        return self.table(x)[0]

    def eval_k(self, k: int, x):
        """Value of the degree-k member at x (scalar in, scalar out)."""
        if not 0 <= k <= self.degree_max:
            raise ValueError(f"degree {k} outside 0..{self.degree_max}")
        scalar = np.isscalar(x)
        vals = self.table(x)[:, k]
        return float(vals[0]) if scalar else vals

    def quadrature(self, order: int) -> "QuadratureRule":
        """Gauss rule integrating against this basis's orthogonality weight."""
        rule = gauss_jacobi_rule(self.params, order)
        if self.domain == UNIT:
            return QuadratureRule(
                nodes=(rule.nodes + 1.0) / 2.0, weights=2.0 * rule.weights
            )
        return rule

    def weight(self, x):
        """Orthogonality weight on this basis's domain."""
        x = np.asarray(x, dtype=float)
        if self.domain == UNIT:
            return 4.0 * omega_weight(self.params, 2.0 * x - 1.0)
        return omega_weight(self.params, x)


def uniform_bound(params: JacobiParams, k: int) -> float:
    """Printed sup-norm majorant eta_{a,b} * k^mu * sqrt(k + c_ab) for degree k >= 2.

    Known defect: at k = 2 the majorant is exceeded by the true maximum when
    mu = 1/2 (by up to ~6%); the formula is reproduced exactly as printed.
    """
    if k < 2:
        raise ValueError(f"uniform bound requires k >= 2, got {k}")
    a, b = params.alpha, params.beta
    mu = params.mu
    eta = math.exp(
        2.0 * max(mu, 0.0) / 12.0 + max(mu * mu + a * b, 0.0) / 8.0
    ) / (2.0 ** ((a + b) / 2.0) * math.gamma(mu + 1.0))
    return eta * k**mu * math.sqrt(k + params.c_ab)


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return len(self.nodes)

    def integrate(self, f) -> float:
        vals = f(self.nodes) if callable(f) else np.asarray(f, dtype=float)
        return float(np.dot(self.weights, vals))


def gauss_jacobi_rule(params: JacobiParams, order: int) -> QuadratureRule:
    """Gauss-Jacobi rule via Golub-Welsch on the monic three-term recurrence.

    The returned rule integrates x -> f(x) * omega(x) over [-1, 1] exactly for
    polynomials f of degree <= 2*order - 1. Weights sum to gamma_ab.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    a, b = params.alpha, params.beta
    ab = a + b
    i = np.arange(order, dtype=float)
    diag = np.empty(order)
    diag[0] = (b - a) / (ab + 2.0)
    if order > 1:
        ii = i[1:]
        diag[1:] = (b * b - a * a) / ((2.0 * ii + ab) * (2.0 * ii + ab + 2.0))
    j = np.arange(1, order, dtype=float)
    off = np.empty(max(order - 1, 0))
    if order > 1:
        off[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) ** 2 * (3.0 + ab))
        if order > 2:
            jj = j[1:]
            off[1:] = (
                4.0 * jj * (jj + a) * (jj + b) * (jj + ab)
                / ((2.0 * jj + ab) ** 2 * (2.0 * jj + ab + 1.0) * (2.0 * jj + ab - 1.0))
            )
        off = np.sqrt(off)
    nodes, vectors = eigh_tridiagonal(diag, off)
    weights = params.gamma_ab * vectors[0] ** 2
    return QuadratureRule(nodes=nodes, weights=weights)


def omega_norm(f, rule: QuadratureRule) -> float:
    """Weighted L2 norm of f computed with the given quadrature rule."""
    vals = f(rule.nodes) if callable(f) else np.asarray(f, dtype=float)
    return math.sqrt(max(float(np.dot(rule.weights, vals * vals)), 0.0))
