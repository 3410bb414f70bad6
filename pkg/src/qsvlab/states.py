"""Target states and the abort-sector algebra.

A verification run ends in a pair (acceptance probability p, conditional
output state sigma), representing the block state ``p*sigma (+) (1-p)``
with a one-dimensional abort sector. This module provides that pair as
:class:`AbortingState`, the spectral view of targets as
:class:`TargetState`, and the four closeness functionals against an ideal
output ``q*phi (+) (1-q)`` under both the fidelity-based and the
trace-distance-based reading.

The functionals are closed forms derived from the direct-sum identities
``sqrt(F(A (+) B, C (+) D)) = sqrt(F(A, C)) + sqrt(F(B, D))`` and
``||A (+) B||_1 = ||A||_1 + ||B||_1``; the oracle module cross-checks them
against explicit block-matrix embeddings and grid searches.
"""

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .kernels import (
    DEFAULT_TOL,
    DensityOperator,
    PureState,
    Tolerances,
    fidelity,
    trace_norm,
)

__all__ = [
    "TargetState",
    "AbortingState",
    "OptimizedValue",
    "mix",
    "standalone_fidelity_honest",
    "standalone_fidelity_dishonest",
    "composable_distance_honest",
    "composable_distance_dishonest",
]

RANK_TOL = 1e-12


@dataclass(frozen=True)
class TargetState:
    """A target state together with its spectral decomposition.

    ``spectrum`` holds the nonzero eigenvalues in non-increasing order and
    ``eigenvectors`` the matching orthonormal eigenvectors; their weighted
    projector sum reconstructs ``rho``.
    """

    rho: DensityOperator
    spectrum: np.ndarray
    eigenvectors: tuple[PureState, ...]

    def __post_init__(self):
        spec = np.asarray(self.spectrum, dtype=float)
        if spec.ndim != 1 or spec.size == 0:
            raise ValueError("spectrum must be a nonempty vector")
        if np.any(np.diff(spec) > 1e-12) or spec[-1] <= 0.0:
            raise ValueError("spectrum must be non-increasing and positive")
        if abs(spec.sum() - 1.0) > self.rho.tol.trace:
            raise ValueError(f"spectrum sums to {spec.sum()!r}, expected 1")
        if len(self.eigenvectors) != spec.size:
            raise ValueError("one eigenvector per spectrum entry required")
        vecs = np.column_stack([v.amplitudes for v in self.eigenvectors])
        gram_gap = np.abs(vecs.conj().T @ vecs - np.eye(spec.size)).max()
        if gram_gap > self.rho.tol.fidelity:
            raise ValueError(f"eigenvectors not orthonormal: deviation {gram_gap:.3e}")
        rebuilt = (vecs * spec) @ vecs.conj().T
        if np.abs(rebuilt - self.rho.matrix).max() > self.rho.tol.fidelity:
            raise ValueError("spectral decomposition does not reconstruct the state")
        spec.setflags(write=False)
        object.__setattr__(self, "spectrum", spec)
        object.__setattr__(self, "eigenvectors", tuple(self.eigenvectors))

    @property
    def dim(self) -> int:
        return self.rho.dim

    @property
    def rank(self) -> int:
        return self.spectrum.size

    @property
    def is_pure(self) -> bool:
        return self.rank == 1

    @property
    def top_eigenvalue(self) -> float:
        return float(self.spectrum[0])

    @property
    def principal_vector(self) -> PureState:
        return self.eigenvectors[0]

    @staticmethod
    def from_pure(psi: PureState) -> "TargetState":
        return TargetState(psi.projector(), np.array([1.0]), (psi,))

    @staticmethod
    def from_density(rho: DensityOperator, rank_tol: float = RANK_TOL) -> "TargetState":
        """Spectral decomposition of a density operator, dropping zero modes."""
        eigs, vecs = np.linalg.eigh(rho.matrix)
        order = np.argsort(eigs)[::-1]
        keep = [i for i in order if eigs[i] > rank_tol]
        spectrum = eigs[keep]
        spectrum = spectrum / spectrum.sum()
        eigenvectors = tuple(PureState(vecs[:, i], rho.tol) for i in keep)
        return TargetState(rho, spectrum, eigenvectors)

    @staticmethod
    def from_spectrum(
        weights: Sequence[float],
        vectors: Sequence[PureState],
        tol: Tolerances = DEFAULT_TOL,
    ) -> "TargetState":
        """Build a target from explicit eigenvalues and eigenvectors."""
        order = np.argsort(np.asarray(weights, dtype=float))[::-1]
        weights = np.asarray(weights, dtype=float)[order]
        vectors = tuple(vectors[i] for i in order)
        mat = sum(
            w * np.outer(v.amplitudes, v.amplitudes.conj()) for w, v in zip(weights, vectors)
        )
        return TargetState(DensityOperator(mat, tol), weights, vectors)


@dataclass(frozen=True)
class AbortingState:
    """Average protocol output: acceptance weight p on a conditional state.

    When ``accept_prob`` is zero the conditional state is an arbitrary
    placeholder; every functional below multiplies it by p, so the
    placeholder never contributes.
    """

    accept_prob: float
    conditional_state: DensityOperator

    def __post_init__(self):
        if not 0.0 <= self.accept_prob <= 1.0 + 1e-12:
            raise ValueError(f"acceptance probability {self.accept_prob!r} outside [0, 1]")
        object.__setattr__(self, "accept_prob", min(1.0, float(self.accept_prob)))

    @property
    def dim(self) -> int:
        return self.conditional_state.dim

    def accepted_block(self) -> np.ndarray:
        """The sub-normalized accepted block ``p * sigma`` as a raw matrix."""
        return self.accept_prob * self.conditional_state.matrix


class OptimizedValue(NamedTuple):
    """Result of optimizing over the ideal acceptance probability."""

    best_p: float
    value: float


def mix(branches: Sequence[tuple[float, float, DensityOperator]]) -> AbortingState:
    """Average over protocol branches of (weight, acceptance prob, output).

    Weights must form a probability distribution. The result carries the
    overall acceptance probability and the accept-conditioned state; if no
    branch ever accepts, the conditional state is a placeholder.
    """
    branches = list(branches)
    if not branches:
        raise ValueError("mix needs at least one branch")
    weights = np.array([q for q, _, _ in branches], dtype=float)
    if weights.min() < 0.0 or abs(weights.sum() - 1.0) > DEFAULT_TOL.trace:
        raise ValueError(f"branch weights must sum to 1, got {weights.sum()!r}")
    dim = branches[0][2].dim
    if any(rho.dim != dim for _, _, rho in branches):
        raise ValueError("branch states must share one dimension")
    accept = float(sum(q * p for q, p, _ in branches))
    if accept <= 0.0:
        return AbortingState(0.0, DensityOperator.maximally_mixed(dim))
    block = sum(q * p * rho.matrix for q, p, rho in branches)
    return AbortingState(accept, DensityOperator(block / accept, branches[0][2].tol))


def standalone_fidelity_honest(out: AbortingState, target: TargetState) -> float:
    """Fidelity of the output with the ideal always-accept target.

    Equals ``p * F(sigma, phi)`` by the direct-sum split, so a perfect run
    scores exactly its acceptance probability.
    """
    if out.dim != target.dim:
        raise ValueError(f"dimension mismatch: output {out.dim}, target {target.dim}")
    if out.accept_prob == 0.0:
        return 0.0
    return out.accept_prob * fidelity(out.conditional_state, target.rho)


def standalone_fidelity_dishonest(out: AbortingState, target: TargetState) -> OptimizedValue:
    """Best fidelity against ``p*phi (+) (1-p)`` over the ideal accept probability p.

    With a^2 = p_acc * F(sigma, phi) and b^2 = 1 - p_acc the maximum of
    ``(sqrt(p)*a + sqrt(1-p)*b)**2`` is a^2 + b^2, attained at
    p = a^2 / (a^2 + b^2).
    """
    if out.dim != target.dim:
        raise ValueError(f"dimension mismatch: output {out.dim}, target {target.dim}")
    a_sq = (
        out.accept_prob * fidelity(out.conditional_state, target.rho)
        if out.accept_prob > 0.0
        else 0.0
    )
    b_sq = 1.0 - out.accept_prob
    total = a_sq + b_sq
    best_p = a_sq / total if total > 0.0 else 0.0
    return OptimizedValue(best_p=best_p, value=total)


def composable_distance_honest(out: AbortingState, target: TargetState) -> float:
    """Halved trace distance of the output from the ideal always-accept target.

    The direct-sum norm splits into the accepted-block mismatch plus the
    abort weight: ``0.5*||p*sigma - phi||_1 + 0.5*(1-p)``.
    """
    if out.dim != target.dim:
        raise ValueError(f"dimension mismatch: output {out.dim}, target {target.dim}")
    block_gap = 0.5 * trace_norm(out.accepted_block() - target.rho.matrix)
    return block_gap + 0.5 * (1.0 - out.accept_prob)


def composable_distance_dishonest(out: AbortingState, target: TargetState) -> OptimizedValue:
    """Best halved trace distance to ``p*phi (+) (1-p)`` over p.

    Minimized by matching the ideal accept probability to the actual one,
    leaving ``0.5 * ||p_acc*(sigma - phi)||_1``.
    """
    if out.dim != target.dim:
        raise ValueError(f"dimension mismatch: output {out.dim}, target {target.dim}")
    value = 0.5 * trace_norm(out.accepted_block() - out.accept_prob * target.rho.matrix)
    return OptimizedValue(best_p=out.accept_prob, value=value)
