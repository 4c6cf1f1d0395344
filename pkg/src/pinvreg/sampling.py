"""Random sample generation, seed derivation, and the Beta CDF transform."""

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betainc, betaln

from .errors import ValidationError
from .jacobi import JacobiParams

__all__ = [
    "SampleSet",
    "EmpiricalCdf",
    "derive_seed",
    "derive_rng",
    "sample_beta_on_I",
    "sample_beta_unit",
    "make_noise",
    "inverse_beta_cdf",
    "arcsine_quantile",
    "cdf_transform",
]


def _label_hash(label) -> int:
    digest = hashlib.blake2b(str(label).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def derive_seed(master_seed, *labels) -> tuple:
    """Stable per-stream seed: a tuple feeding numpy's SeedSequence.

    Integer labels pass through unchanged (cheap trial indices); everything
    else is hashed with blake2b so the derivation is stable across processes,
    unlike the builtin salted hash(). A tuple master seed (from an earlier
    derivation) is flattened so derivations compose.
    """
    if isinstance(master_seed, (tuple, list)):
        parts = [int(p) for p in master_seed]
    else:
        parts = [int(master_seed)]
    for label in labels:
        parts.append(label if isinstance(label, int) else _label_hash(label))
    return tuple(parts)


def derive_rng(master_seed, *labels) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master_seed, *labels))


@dataclass(frozen=True)
class SampleSet:
    """Points drawn from one sampling law, with the seed that regenerates them."""

    points: np.ndarray
    law_tag: str
    seed: tuple = field(default=())

    @property
    def n(self) -> int:
        return len(self.points)


def sample_beta_on_I(params: JacobiParams, n: int, seed=0) -> SampleSet:
    """n points on [-1, 1] with density omega_{a,b} / gamma_{a,b}.

    Drawn as x = 2u - 1 with u ~ Beta(beta+1, alpha+1), built from the
    two-Gamma ratio so every shape >= 1/2 is handled without rejection tuning.
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    seed = derive_seed(seed) if isinstance(seed, int) else tuple(seed)
    rng = np.random.default_rng(seed)
    g1 = rng.gamma(params.beta + 1.0, size=n)
    g2 = rng.gamma(params.alpha + 1.0, size=n)
    u = g1 / (g1 + g2)
    return SampleSet(
        points=2.0 * u - 1.0,
        law_tag=f"beta-symmetric(a={params.alpha},b={params.beta})",
        seed=seed,
    )


def sample_beta_unit(params: JacobiParams, n: int, seed=0) -> SampleSet:
    """Same law pushed to [0, 1]: density proportional to x^beta (1-x)^alpha."""
    s = sample_beta_on_I(params, n, seed)
    return SampleSet(
        points=(s.points + 1.0) / 2.0,
        law_tag=f"beta-unit(a={params.alpha},b={params.beta})",
        seed=s.seed,
    )


def make_noise(n: int, sigma: float, family: str = "gaussian", seed=0) -> np.ndarray:
    """Centered i.i.d. noise with standard deviation sigma."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    seed = derive_seed(seed) if isinstance(seed, int) else tuple(seed)
    rng = np.random.default_rng(seed)
    if family == "gaussian":
        return sigma * rng.standard_normal(n)
    if family == "uniform":
        # U(-sigma*sqrt(3), sigma*sqrt(3)) has standard deviation sigma
        return rng.uniform(-sigma * math.sqrt(3.0), sigma * math.sqrt(3.0), size=n)
    raise ValueError(f"unknown noise family {family!r}")


def arcsine_quantile(t):
    """Closed-form Beta(1/2, 1/2) quantile: (1 + sin(pi t - pi/2)) / 2."""
    t = np.asarray(t, dtype=float)
    return 0.5 * (1.0 + np.sin(math.pi * t - math.pi / 2.0))


def inverse_beta_cdf(params: JacobiParams, t, method: str = "auto"):
    """Quantile of Beta(alpha+1, beta+1) on [0, 1].

    method="closed" uses the arcsine closed form (alpha = beta = -1/2 only);
    method="numeric" always runs the bracketed root finder; "auto" picks the
    closed form when it applies. The numeric path is 60 bisection steps (below
    1e-12 in t-space through any finite density) plus one guarded Newton polish.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < -1e-12) or np.any(t > 1.0 + 1e-12):
        raise ValidationError("quantile argument outside [0, 1]")
    t = np.clip(t, 0.0, 1.0)
    a, b = params.alpha + 1.0, params.beta + 1.0
    closed = params.alpha == -0.5 and params.beta == -0.5
    if method not in ("auto", "closed", "numeric"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed" and not closed:
        raise ValueError("closed form only available for alpha = beta = -1/2")
    if closed and method in ("auto", "closed"):
        return arcsine_quantile(t)

    lo = np.zeros_like(t)
    hi = np.ones_like(t)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        below = betainc(a, b, mid) <= t
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    x = 0.5 * (lo + hi)
    interior = (x > 1e-12) & (x < 1.0 - 1e-12)
    xi = np.where(interior, x, 0.5)
    log_pdf = (a - 1.0) * np.log(xi) + (b - 1.0) * np.log1p(-xi) - betaln(a, b)
    step = np.where(interior, (betainc(a, b, xi) - t) * np.exp(-log_pdf), 0.0)
    x = np.clip(x - np.where(np.isfinite(step), step, 0.0), lo, hi)
    x[t == 0.0] = 0.0
    x[t == 1.0] = 1.0
    return x


@dataclass
class EmpiricalCdf:
    """Standard n-denominator step ECDF with optional interpolation."""

    samples: np.ndarray
    interpolate: bool = False

    def __post_init__(self):
        self.samples = np.sort(np.asarray(self.samples, dtype=float))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        n = len(self.samples)
        if self.interpolate:
            # linear between order statistics; ties collapse to averaged ranks
            uniq, counts = np.unique(self.samples, return_counts=True)
            ranks = np.cumsum(counts) - (counts - 1) / 2.0
            return np.interp(x, uniq, ranks / n, left=0.0, right=1.0)
        return np.searchsorted(self.samples, x, side="right") / n


def cdf_transform(points, cdf, params: JacobiParams, to_symmetric: bool = True) -> SampleSet:
    """Map arbitrary-law samples to the Beta(alpha+1, beta+1) law.

    Evaluates u = cdf(x), validates it is a monotone map into [0, 1], then
    applies the Beta quantile. Returns points on [0, 1], or mapped to [-1, 1]
    by 2*tau - 1 when to_symmetric is set (the default, matching the symmetric
    basis).
    """
    if isinstance(points, SampleSet):
        raw, seed = points.points, points.seed
    else:
        raw, seed = np.asarray(points, dtype=float), ()
    u = np.asarray(cdf(raw), dtype=float)
    if np.any(u < -1e-12) or np.any(u > 1.0 + 1e-12):
        raise ValidationError("cdf values escape [0, 1]")
    order = np.argsort(raw)
    if np.any(np.diff(u[order]) < -1e-12):
        raise ValidationError("non-monotone cdf detected")
    tau = inverse_beta_cdf(params, np.clip(u, 0.0, 1.0))
    pts = 2.0 * tau - 1.0 if to_symmetric else tau
    tag = f"cdf-transform(a={params.alpha},b={params.beta})"
    return SampleSet(points=pts, law_tag=tag, seed=seed)
