"""Floquet eigenproblem: quasienergies, pi-pairs and initial-state overlap.

Quasienergies are the folded eigenphases of the one-period propagator,
eps_alpha = -arg(lambda_alpha)/T in (-pi/T, pi/T]. Two eigenstates form a
pi-pair when their quasienergies differ by approximately pi/T on the
circle; a superposition of such a pair returns to itself only after two
periods, which is the mechanism behind period doubling.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NumericalError
from .model import FloquetOperator, ModelSpec, as_operator

UNIT_MODULUS_TOL = 1e-8
RESIDUAL_TOL = 1e-8
DEGENERACY_CLUSTER_TOL = 1e-9


def default_pair_tolerance(period: float = 1.0) -> float:
    """5% of the pi/T gap; exposed as a flag since only 'approximately
    pi/T' is physically defined."""
    return 0.05 * np.pi / period


@dataclass
class QuasienergyAnalysis:
    """Eigensystem of a Floquet operator plus pi-pairing summary.

    eigenvectors holds one normalized eigenvector per column, matching
    epsilons. pairs is a matching (each index used at most once); gaps
    holds the circle distance of each pair.
    """

    epsilons: np.ndarray
    eigenvectors: np.ndarray
    period: float
    spec: ModelSpec | None = field(default=None, repr=False)
    pairs: list[tuple[int, int]] = field(default_factory=list)
    gaps: np.ndarray = field(default_factory=lambda: np.empty(0))
    tolerance: float | None = None

    @property
    def dim(self) -> int:
        return len(self.epsilons)

    @property
    def pair_fraction(self) -> float:
        return 2.0 * len(self.pairs) / self.dim


def _cluster_indices(eigenvalues: np.ndarray) -> list[list[int]]:
    """Group (sorted-by-angle) indices whose eigenvalues nearly coincide.

    The eigenvalues live on the unit circle, so the first and last groups
    may wrap around through angle +-pi and must then be merged.
    """
    n = len(eigenvalues)
    clusters: list[list[int]] = [[0]]
    for k in range(1, n):
        if abs(eigenvalues[k] - eigenvalues[k - 1]) < DEGENERACY_CLUSTER_TOL:
            clusters[-1].append(k)
        else:
            clusters.append([k])
    if len(clusters) > 1 and abs(eigenvalues[0] - eigenvalues[-1]) < DEGENERACY_CLUSTER_TOL:
        clusters[0] = clusters.pop() + clusters[0]
    return clusters


def floquet_eigensystem(model: ModelSpec | FloquetOperator) -> QuasienergyAnalysis:
    """Diagonalize the dense propagator (pairs left empty).

    Eigenvectors inside a degenerate eigenvalue cluster are re-orthonormalized:
    a general complex eigensolver does not guarantee orthogonality under
    degeneracy, and the h_x = J = 0 identity point is fully degenerate.
    """
    op = as_operator(model)
    period = op.spec.protocol.period
    matrix = op.dense()
    eigenvalues, eigenvectors = np.linalg.eig(matrix)

    modulus_error = float(np.max(np.abs(np.abs(eigenvalues) - 1.0)))
    if modulus_error > UNIT_MODULUS_TOL:
        raise NumericalError(
            f"eigenvalues deviate from unit modulus by {modulus_error:.3e} "
            f"(h_x={op.spec.h_x}, couplings={op.spec.couplings}, n={op.spec.n_qubits})"
        )

    epsilons = -np.angle(eigenvalues) / period
    # fold the arg = pi boundary onto +pi/T so every value is in (-pi/T, pi/T]
    epsilons[epsilons <= -np.pi / period] += 2.0 * np.pi / period

    order = np.argsort(epsilons, kind="stable")
    eigenvalues = eigenvalues[order]
    epsilons = epsilons[order]
    eigenvectors = eigenvectors[:, order]

    for cluster in _cluster_indices(eigenvalues):
        if len(cluster) > 1:
            q, _ = np.linalg.qr(eigenvectors[:, cluster])
            eigenvectors[:, cluster] = q
    eigenvectors /= np.linalg.norm(eigenvectors, axis=0, keepdims=True)

    residuals = matrix @ eigenvectors - eigenvectors * eigenvalues[np.newaxis, :]
    residual = float(np.max(np.linalg.norm(residuals, axis=0)))
    if residual > RESIDUAL_TOL:
        raise NumericalError(
            f"eigen-residual {residual:.3e} exceeds {RESIDUAL_TOL} "
            f"(h_x={op.spec.h_x}, couplings={op.spec.couplings}, n={op.spec.n_qubits})"
        )

    return QuasienergyAnalysis(
        epsilons=epsilons, eigenvectors=eigenvectors, period=period, spec=op.spec
    )


def circle_distance(eps_i: float, eps_j: float, period: float = 1.0) -> float:
    """min_k |eps_i - eps_j + 2 pi k / T|, the quasienergy circle metric."""
    zone = 2.0 * np.pi / period
    raw = (eps_i - eps_j) % zone
    return float(min(raw, zone - raw))


def detect_pi_pairs(
    analysis: QuasienergyAnalysis, tolerance: float | None = None
) -> QuasienergyAnalysis:
    """Greedy matching of quasienergy pairs with gap within tolerance of pi/T.

    Candidates are sorted by |gap - pi/T| (ties by lower indices) and each
    state is used at most once, so the pair list is a deterministic matching.
    """
    period = analysis.period
    if tolerance is None:
        tolerance = default_pair_tolerance(period)
    if tolerance <= 0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    target = np.pi / period

    eps = analysis.epsilons
    zone = 2.0 * np.pi / period
    diff = (eps[:, None] - eps[None, :]) % zone
    gap = np.minimum(diff, zone - diff)
    error = np.abs(gap - target)

    ii, jj = np.nonzero(np.triu(error <= tolerance, k=1))
    candidates = sorted(zip(error[ii, jj], ii, jj))
    used = np.zeros(analysis.dim, dtype=bool)
    pairs: list[tuple[int, int]] = []
    pair_gaps: list[float] = []
    for err, i, j in candidates:
        if not used[i] and not used[j]:
            used[i] = used[j] = True
            pairs.append((int(i), int(j)))
            pair_gaps.append(float(gap[i, j]))
    return replace(
        analysis, pairs=pairs, gaps=np.asarray(pair_gaps), tolerance=float(tolerance)
    )


def overlap_weight(analysis: QuasienergyAnalysis, psi0: np.ndarray) -> float:
    """Share of the initial state's eigenbasis weight held by pi-paired states.

    The denominator sums |<phi_gamma|psi0>|^2 over the full eigenbasis and
    must come out as 1 for a complete orthonormal basis; a deviation beyond
    1e-6 signals a bad eigenbasis and raises.
    """
    if len(psi0) != analysis.dim:
        raise ValueError(f"dimension mismatch: state has {len(psi0)}, eigenbasis has {analysis.dim}")
    amplitudes = analysis.eigenvectors.conj().T @ np.asarray(psi0, dtype=np.complex128)
    weights = np.abs(amplitudes) ** 2
    denominator = float(weights.sum())
    if abs(denominator - 1.0) > 1e-6:
        raise NumericalError(
            f"eigenbasis overlap weights sum to {denominator!r}, expected 1 "
            "(non-orthonormal eigenbasis?)"
        )
    paired = [k for pair in analysis.pairs for k in pair]
    return float(weights[paired].sum() / denominator) if paired else 0.0


def analyze(
    model: ModelSpec | FloquetOperator,
    psi0: np.ndarray | None = None,
    tolerance: float | None = None,
) -> tuple[QuasienergyAnalysis, float | None]:
    """Full pipeline: eigensystem, pair detection, optional overlap weight."""
    op = as_operator(model)
    analysis = detect_pi_pairs(floquet_eigensystem(op), tolerance)
    weight = overlap_weight(analysis, psi0) if psi0 is not None else None
    return analysis, weight
