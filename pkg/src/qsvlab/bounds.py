"""Closed-form trade-off bounds and bound-generating functions.

Everything here is plain arithmetic on scalars: the unavoidable floors on
correctness-plus-security error sums, the exact values of the canonical
protocol, the separable-attack floor functional over per-round fidelities,
and the multi-copy distinguishability formulas the i.i.d. attacks rely on.
"""

import math
from typing import Sequence

import numpy as np

__all__ = [
    "standalone_bound",
    "composable_bound",
    "variable_round_bounds",
    "canonical_security_values",
    "fidelity_floor_to_composable",
    "standalone_rate",
    "composable_rate",
    "separable_attack_floor",
    "iid_copies_distance",
    "iid_copies_distance_bound",
    "standalone_attack_floor",
    "composable_attack_floor",
]


def standalone_bound(n: float) -> tuple[float, float]:
    """Fidelity-based floor on eps_h + eps_d: (loose 1/(7n), tight 4/(27n))."""
    if n <= 0:
        raise ValueError("round count must be positive")
    return 1.0 / (7.0 * n), 4.0 / (27.0 * n)


def composable_bound(n: float, eta1: float = 1.0) -> float:
    """Trace-distance floor on eps_h + eps_d: sqrt(eta1) / (4 sqrt(n))."""
    if n <= 0:
        raise ValueError("round count must be positive")
    if not 0.0 < eta1 <= 1.0:
        raise ValueError(f"largest eigenvalue must lie in (0, 1], got {eta1!r}")
    return math.sqrt(eta1) / (4.0 * math.sqrt(n))


def variable_round_bounds(expected_n: float, eta1: float = 1.0) -> tuple[float, float]:
    """The same floors with the expected verification-round count in place of n."""
    if expected_n <= 0:
        raise ValueError("expected round count must be positive")
    return 1.0 / (7.0 * expected_n), composable_bound(expected_n, eta1)


def canonical_security_values(n: int) -> tuple[float, float]:
    """Exact security of the canonical protocol: (1/(n+1), 2/sqrt(n+1))."""
    if n < 1:
        raise ValueError("round count must be at least 1")
    return 1.0 / (n + 1.0), 2.0 / math.sqrt(n + 1.0)


def fidelity_floor_to_composable(kappa: float) -> float:
    """Composable security level 2*sqrt(2k - k^2) implied by a fidelity floor (1-k)^2."""
    if not 0.0 <= kappa <= 1.0:
        raise ValueError(f"kappa must lie in [0, 1], got {kappa!r}")
    return 2.0 * math.sqrt(2.0 * kappa - kappa**2)


def standalone_rate(n: float, alpha: float) -> float:
    """Relaxed fidelity-based floor (alpha/n)(1 - sqrt(alpha)); peaks at alpha = 4/9."""
    if n <= 0 or not 0.0 <= alpha <= 1.0:
        raise ValueError("need n > 0 and alpha in [0, 1]")
    return (alpha / n) * (1.0 - math.sqrt(alpha))


def composable_rate(n: float, eta1: float, alpha: float) -> float:
    """Relaxed trace-distance floor alpha*sqrt(eta1/n)*(1 - alpha); peaks at alpha = 1/2."""
    if n <= 0 or not 0.0 < eta1 <= 1.0 or not 0.0 <= alpha <= 1.0:
        raise ValueError("need n > 0, eta1 in (0, 1], alpha in [0, 1]")
    return alpha * math.sqrt(eta1 / n) * (1.0 - alpha)


def separable_attack_floor(f: Sequence[float], omega: Sequence[float]) -> float:
    """Error-sum floor sum_i w_i (1-f_i) (1 - sqrt(1 - prod_{j != i} f_j)).

    ``f`` holds the per-round fidelities of a separable attack against a
    pure target. Zeros get explicit case analysis: two or more kill every
    term, a single zero at k leaves w_k (1 - sqrt(1 - prod of the rest)).
    The value never exceeds max(omega).
    """
    f = np.asarray(f, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if f.shape != omega.shape or f.ndim != 1 or f.size == 0:
        raise ValueError("fidelity and weight vectors must have equal nonzero length")
    if f.min() < 0.0 or f.max() > 1.0:
        raise ValueError("fidelities must lie in [0, 1]")
    zeros = np.flatnonzero(f == 0.0)
    if zeros.size >= 2:
        return 0.0
    if zeros.size == 1:
        k = int(zeros[0])
        rest = math.prod(float(x) for j, x in enumerate(f) if j != k)
        return float(omega[k]) * (1.0 - math.sqrt(max(0.0, 1.0 - rest)))
    total = 0.0
    for i in range(f.size):
        rest = math.prod(float(x) for j, x in enumerate(f) if j != i)
        total += float(omega[i]) * (1.0 - float(f[i])) * (1.0 - math.sqrt(max(0.0, 1.0 - rest)))
    return total


def iid_copies_distance(eta1: float, overlap_sq: float, n: int) -> float:
    """Exact halved trace distance between n copies of a target and its deformation.

    Applies to the attack family that replaces the target's principal
    eigenvector with a unit vector of squared overlap ``overlap_sq`` whose
    remainder leaves the target's support. The difference then splits into
    blocks on orthogonal subspaces, one per pattern of principal-component
    positions, giving the binomial mixture

        sum_k C(n,k) eta1^k (1-eta1)^(n-k) sqrt(1 - overlap_sq^k).
    """
    if not 0.0 < eta1 <= 1.0 or not 0.0 <= overlap_sq <= 1.0 or n < 0:
        raise ValueError("need eta1 in (0, 1], overlap_sq in [0, 1], n >= 0")
    total = 0.0
    for k in range(n + 1):
        weight = math.comb(n, k) * eta1**k * (1.0 - eta1) ** (n - k)
        if weight == 0.0:
            continue
        total += weight * math.sqrt(max(0.0, 1.0 - overlap_sq**k))
    return total


def iid_copies_distance_bound(eta1: float, overlap_sq: float, n: float) -> float:
    """Concavity bound sqrt(1 - overlap_sq^(eta1*n)) on the n-copy distance."""
    if not 0.0 < eta1 <= 1.0 or not 0.0 <= overlap_sq <= 1.0 or n < 0:
        raise ValueError("need eta1 in (0, 1], overlap_sq in [0, 1], n >= 0")
    return math.sqrt(max(0.0, 1.0 - overlap_sq ** (eta1 * n)))


def standalone_attack_floor(n: float, alpha: float = 4.0 / 9.0) -> float:
    """Guaranteed error sum of the fidelity-tuned i.i.d. attack on any protocol.

    The attack state keeps fidelity 1 - alpha/n to the pure target, so no
    measurement strategy distinguishes the n-copy inputs beyond
    sqrt(1 - (1 - alpha/n)^n), and every protocol concedes

        (alpha/n) * (1 - sqrt(1 - (1 - alpha/n)^n)) >= (alpha/n)(1 - sqrt(alpha)).
    """
    if n <= 0 or not 0.0 < alpha <= 1.0:
        raise ValueError("need n > 0 and alpha in (0, 1]")
    if alpha / n > 1.0:
        raise ValueError("alpha/n must not exceed 1")
    tau = alpha / n
    return tau * (1.0 - math.sqrt(max(0.0, 1.0 - (1.0 - tau) ** n)))


def composable_attack_floor(n: int, eta1: float = 1.0, alpha: float = 0.5) -> float:
    """Guaranteed error sum of the distance-tuned i.i.d. attack on any protocol.

    Single-copy halved distance is eta1 * alpha / sqrt(eta1 * n); the exact
    n-copy distance comes from :func:`iid_copies_distance`, and any
    protocol concedes at least distance * (1 - n_copy_distance).
    """
    if n < 1 or not 0.0 < eta1 <= 1.0 or not 0.0 < alpha:
        raise ValueError("need n >= 1, eta1 in (0, 1], alpha > 0")
    if alpha**2 / (eta1 * n) > 1.0:
        raise ValueError("alpha^2/(eta1*n) must not exceed 1")
    overlap_sq = 1.0 - alpha**2 / (eta1 * n)
    single = eta1 * math.sqrt(1.0 - overlap_sq)
    return single * (1.0 - iid_copies_distance(eta1, overlap_sq, n))
