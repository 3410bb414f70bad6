"""Constructors for the named attacks on cut-and-choose verification.

Three recipes cover the interesting corners of the attack landscape:

* ``naive_attack`` guesses the most likely output round and sends an
  orthogonal state there, the target everywhere else. Among separable
  attacks it maximizes the fidelity-based error sum.
* ``iid_standalone_attack`` sends identical near-target copies with the
  infidelity tuned to the round count; at ``alpha = 4/9`` it certifies the
  4/(27N) fidelity-based floor.
* ``iid_composable_attack`` deforms the target's principal eigenvector
  toward a direction outside the support; at ``alpha = 1/2`` it certifies
  the sqrt(eta1)/(4 sqrt(N)) trace-distance floor and overtakes the naive
  attack once rounds are plentiful.
"""

from dataclasses import dataclass

import numpy as np

from .kernels import DensityOperator, PureState, orthogonal_pure_state, rotate_overlap
from .protocol import Attack, FixedProtocol, IIDAttack, SeparableAttack
from .states import TargetState

__all__ = [
    "AttackRecipe",
    "naive_attack",
    "iid_standalone_attack",
    "iid_composable_attack",
    "support_complement_direction",
]


@dataclass(frozen=True)
class AttackRecipe:
    """A named attack together with the parameters that produced it."""

    kind: str
    params: dict
    attack: Attack


def naive_attack(protocol: FixedProtocol, output_round: int | None = None) -> AttackRecipe:
    """Orthogonal state at the most likely output round, target elsewhere.

    Ties in the output-round distribution break toward the smallest index;
    pass ``output_round`` to override the guess.
    """
    target = protocol.target
    if not target.is_pure:
        raise ValueError("the naive attack needs a pure target for an orthogonal state")
    if target.dim < 2:
        raise ValueError("no orthogonal state exists in dimension 1")
    ell = int(np.argmax(protocol.omega)) if output_round is None else int(output_round)
    if not 0 <= ell < protocol.omega.size:
        raise ValueError(f"output round {ell} outside 0..{protocol.omega.size - 1}")
    phi = target.principal_vector
    orthogonal = orthogonal_pure_state(phi).projector()
    states = [phi.projector()] * protocol.omega.size
    states[ell] = orthogonal
    return AttackRecipe(
        kind="naive",
        params={"output_round": ell},
        attack=SeparableAttack(states),
    )


def iid_standalone_attack(
    target: TargetState, n_verify: float, alpha: float = 4.0 / 9.0
) -> AttackRecipe:
    """Identical copies of a pure state with fidelity 1 - alpha/n to the target.

    ``n_verify`` may be fractional so variable-round protocols can tune the
    attack to their expected round count.
    """
    if not target.is_pure:
        raise ValueError("this attack is defined for pure targets")
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")
    if n_verify <= 0 or alpha / n_verify > 1.0:
        raise ValueError(f"alpha/n = {alpha}/{n_verify} must lie in (0, 1]")
    phi = target.principal_vector
    psi = rotate_overlap(phi, orthogonal_pure_state(phi), 1.0 - alpha / n_verify)
    return AttackRecipe(
        kind="iid-standalone",
        params={"alpha": float(alpha), "n_verify": float(n_verify), "infidelity": alpha / n_verify},
        attack=IIDAttack(psi.projector()),
    )


def support_complement_direction(target: TargetState) -> PureState:
    """Deterministic unit vector orthogonal to the target's full support.

    Completes the eigenbasis with standard basis vectors in index order
    and returns the first completion vector. Pure targets in dim >= 2 get
    the same deterministic complement as :func:`orthogonal_pure_state`.
    """
    if target.dim <= target.rank:
        raise ValueError("target support fills the space; no orthogonal direction exists")
    if target.is_pure:
        return orthogonal_pure_state(target.principal_vector)
    basis = np.column_stack([v.amplitudes for v in target.eigenvectors])
    for k in range(target.dim):
        vec = np.zeros(target.dim, dtype=complex)
        vec[k] = 1.0
        vec -= basis @ (basis.conj().T @ vec)
        norm = np.linalg.norm(vec)
        if norm > 1e-6:
            return PureState(vec / norm, target.rho.tol)
    raise ValueError("failed to complete the eigenbasis")  # unreachable for rank < dim


def iid_composable_attack(
    target: TargetState, n_verify: float, alpha: float = 0.5
) -> AttackRecipe:
    """Identical copies of the target with its principal eigenvector rotated.

    The rotation leaves the support, keeping squared overlap
    ``1 - alpha^2/(eta1*n)`` with the principal eigenvector, so the
    single-copy halved trace distance to the target is exactly
    ``eta1 * alpha / sqrt(eta1 * n)``.
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha!r}")
    eta1 = target.top_eigenvalue
    if n_verify <= 0 or alpha**2 / (eta1 * n_verify) > 1.0:
        raise ValueError(f"alpha^2/(eta1*n) = {alpha**2 / (eta1 * n_verify)!r} must lie in (0, 1]")
    direction = support_complement_direction(target)
    overlap_sq = 1.0 - alpha**2 / (eta1 * n_verify)
    chi = rotate_overlap(target.principal_vector, direction, overlap_sq)
    mat = eta1 * np.outer(chi.amplitudes, chi.amplitudes.conj())
    for weight, vec in zip(target.spectrum[1:], target.eigenvectors[1:]):
        mat += weight * np.outer(vec.amplitudes, vec.amplitudes.conj())
    return AttackRecipe(
        kind="iid-composable",
        params={
            "alpha": float(alpha),
            "n_verify": float(n_verify),
            "eta1": eta1,
            "overlap_sq": overlap_sq,
        },
        attack=IIDAttack(DensityOperator(mat, target.rho.tol)),
    )
