"""Random design matrices, their Gram spectra, and printed stability bounds."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .errors import StabilityError
from .jacobi import JacobiBasis, JacobiParams
from .sampling import SampleSet, cdf_transform, derive_seed, sample_beta_on_I

__all__ = [
    "DesignMatrix",
    "SpectralReport",
    "TheoryBounds",
    "McSummary",
    "build_design",
    "spectral_report",
    "theory_bounds",
    "mc_condition_number",
]

CHEBYSHEV_SHARP_M_SQ = 2.0 / math.pi  # sup of the normalized family squared


@dataclass(frozen=True)
class DesignMatrix:
    """n x (N+1) matrix with entry (j, k) = wJ_k(X_j) / sqrt(n)."""

    matrix: np.ndarray
    basis: JacobiBasis
    points: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def degree_max(self) -> int:
        return self.matrix.shape[1] - 1

    def gram(self) -> np.ndarray:
        return self.matrix.T @ self.matrix


def build_design(basis: JacobiBasis, samples) -> DesignMatrix:
    points = samples.points if isinstance(samples, SampleSet) else np.asarray(samples, float)
    n = len(points)
    if n < basis.size:
        raise ValueError(
            f"underdetermined system: n={n} rows for {basis.size} basis columns"
        )
    matrix = basis.table(points) / math.sqrt(n)
    return DesignMatrix(matrix=matrix, basis=basis, points=points)


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: np.ndarray
    gershgorin: list          # (center, radius) per row
    tolerance: float
    near_singular: bool

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def kappa2(self) -> float:
        if self.near_singular:
            return math.inf
        return self.lambda_max / self.lambda_min


def spectral_report(A: np.ndarray, tolerance: float | None = None) -> SpectralReport:
    """Eigenvalues, Gershgorin discs, and a near-singularity verdict for symmetric A."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    asym = float(np.max(np.abs(A - A.T))) if A.size else 0.0
    if asym > 1e-8:
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    A = 0.5 * (A + A.T)
    eigenvalues = np.linalg.eigvalsh(A)
    centers = np.diag(A)
    radii = np.sum(np.abs(A), axis=1) - np.abs(centers)
    if tolerance is None:
        tolerance = 1e-12 * max(float(eigenvalues[-1]), 0.0)
    near_singular = bool(eigenvalues[0] <= tolerance)
    return SpectralReport(
        eigenvalues=eigenvalues,
        gershgorin=list(zip(centers.tolist(), radii.tolist())),
        tolerance=tolerance,
        near_singular=near_singular,
    )


@dataclass(frozen=True)
class TheoryBounds:
    """Printed spectral predictions for the scaled Gram of a random design.

    The expectation bounds apply to the Gram of the probability-orthonormal
    system, i.e. to gamma_ab * A_N; kappa2 statements are scale-free.
    """

    params: JacobiParams
    n: int
    degree_max: int
    m_sq: float                    # squared sup-norm proxy actually used
    m_sq_generic: float
    m_sq_sharp: float | None       # 2/pi, Chebyshev weight only
    eta_ab: float
    L_N: float
    condition1_ok: bool
    exp_lambda_max_upper: float
    exp_lambda_min_lower: float

    @property
    def base_term(self) -> float:
        return self.L_N * math.log(self.degree_max + 1.0) / self.n

    def kappa_bound(self, delta: float) -> float:
        """High-probability condition number envelope; inf when vacuous."""
        if not 0.0 < delta < 1.0:
            raise ValueError(f"delta must be in (0, 1), got {delta}")
        N, n = self.degree_max, self.n
        term = self.m_sq * (N + 1.0) ** (2.0 * self.params.mu + 2.0) * (
            math.log(N + 1.0) / n + math.sqrt(2.0 / n * math.log(2.0 / delta))
        )
        denominator = 0.63 - term
        if denominator <= 0.0:
            return math.inf
        return (1.72 + term) / denominator


def theory_bounds(
    params: JacobiParams, n: int, degree_max: int, chebyshev_sharp: bool = False
) -> TheoryBounds:
    """Evaluate the printed m^2, L_N, stability condition and expectation bounds."""
    if degree_max < 2:
        raise ValueError(f"bounds need degree_max >= 2, got {degree_max}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    a, b = params.alpha, params.beta
    mu = params.mu
    eta = math.exp(2.0 * max(mu, 0.0) / 12.0 + max(mu * mu + a * b, 0.0) / 8.0) / (
        2.0 ** ((a + b) / 2.0) * math.gamma(mu + 1.0)
    )
    m_sq_generic = (1.0 + 0.5 * math.sqrt(params.c_ab / 2.0)) / (mu + 1.5) * eta * eta
    is_chebyshev = a == -0.5 and b == -0.5
    m_sq_sharp = CHEBYSHEV_SHARP_M_SQ if is_chebyshev else None
    if chebyshev_sharp and not is_chebyshev:
        raise ValueError("sharp constant applies only to alpha = beta = -1/2")
    m_sq = m_sq_sharp if chebyshev_sharp else m_sq_generic
    N = degree_max
    L_N = m_sq * (N + 1.0) ** (2.0 * mu + 2.0)
    base = L_N * math.log(N + 1.0) / n
    return TheoryBounds(
        params=params,
        n=n,
        degree_max=N,
        m_sq=m_sq,
        m_sq_generic=m_sq_generic,
        m_sq_sharp=m_sq_sharp,
        eta_ab=eta,
        L_N=L_N,
        condition1_ok=0.63 * n > L_N * math.log(N + 1.0),
        exp_lambda_max_upper=1.72 + base,
        exp_lambda_min_lower=0.63 - base,
    )


@dataclass(frozen=True)
class McSummary:
    """Per-trial Gram spectra of repeated random designs, sorted for aggregation."""

    params: JacobiParams
    n: int
    degree_max: int
    trials: int
    sampling: str
    kappas: np.ndarray        # finite trials only, ascending
    lambda_mins: np.ndarray   # ascending
    lambda_maxs: np.ndarray   # ascending
    n_singular: int
    seed: tuple = field(default=())

    @property
    def mean_kappa2(self) -> float:
        return float(np.mean(self.kappas)) if len(self.kappas) else math.inf

    @property
    def std_kappa2(self) -> float:
        return float(np.std(self.kappas)) if len(self.kappas) else math.inf


def mc_condition_number(
    params: JacobiParams,
    n: int,
    degree_max: int,
    trials: int,
    transform: str | None = None,
    master_seed=0,
) -> McSummary:
    """Monte Carlo over random designs; per-trial kappa2(A_N) and extremal eigenvalues.

    transform=None samples the Beta law directly; transform="standard_normal"
    draws standard normals and maps them through the exact-CDF Beta transform.
    Trials whose Gram is numerically singular are counted, not averaged.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if transform not in (None, "standard_normal"):
        raise ValueError(f"unknown transform {transform!r}")
    basis = JacobiBasis(params, degree_max)
    kappas, lmins, lmaxs = [], [], []
    n_singular = 0
    tag = "direct" if transform is None else transform
    for t in range(trials):
        seed = derive_seed(master_seed, f"mc-{tag}", t)
        if transform is None:
            samples = sample_beta_on_I(params, n, seed)
        else:
            z = np.random.default_rng(seed).standard_normal(n)
            samples = cdf_transform(z, ndtr, params)
        report = spectral_report(build_design(basis, samples).gram())
        if report.near_singular:
            n_singular += 1
            continue
        kappas.append(report.kappa2)
        lmins.append(report.lambda_min)
        lmaxs.append(report.lambda_max)
    return McSummary(
        params=params,
        n=n,
        degree_max=degree_max,
        trials=trials,
        sampling=tag,
        kappas=np.sort(np.array(kappas)),
        lambda_mins=np.sort(np.array(lmins)),
        lambda_maxs=np.sort(np.array(lmaxs)),
        n_singular=n_singular,
        seed=derive_seed(master_seed, f"mc-{tag}"),
    )


def fit_gram_or_raise(design: DesignMatrix) -> SpectralReport:
    """Spectral report of the design Gram; StabilityError when near singular."""
    report = spectral_report(design.gram())
    if report.near_singular:
        raise StabilityError(
            f"near-singular Gram (lambda_min={report.lambda_min:.3e})", report=report
        )
    return report
