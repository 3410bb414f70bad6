"""Analytic engine for cut-and-choose verification protocols.

A fixed protocol sends N+1 registers; the clients draw the output round
from a distribution ``omega``, measure the other N registers with a binary
measurement, and release the held register on acceptance. The engine
computes the exact average output state (no sampling) under an honest
source and under i.i.d., separable, or entangled attacks.

Measurements are stored either as explicit matrices on the N-fold tensor
space (capped, the space blows up fast) or symbolically as the projector
onto N copies of a pure target, in which case acceptance probabilities
factor into single-register overlaps and round counts in the thousands
stay cheap.
"""

import math
import string
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .kernels import (
    DEFAULT_TOL,
    BinaryMeasurement,
    DensityOperator,
    tensor_all,
)
from .states import AbortingState, TargetState, mix

__all__ = [
    "MAX_TENSOR_DIM",
    "HonestSource",
    "IIDAttack",
    "SeparableAttack",
    "EntangledAttack",
    "Attack",
    "FixedProtocol",
    "VariableProtocol",
    "canonical_protocol",
    "canonical_variable_protocol",
    "accept_prob",
    "run_fixed",
    "run_variable",
    "point_mass_rounds",
    "truncated_geometric_rounds",
    "uniform_rounds",
]

MAX_TENSOR_DIM = 4096


@dataclass(frozen=True)
class HonestSource:
    """The source sends the target state in every round."""


@dataclass(frozen=True)
class IIDAttack:
    """The source sends independent copies of one fixed state."""

    state: DensityOperator


@dataclass(frozen=True)
class SeparableAttack:
    """The source sends an independent, possibly different state per round."""

    states: tuple[DensityOperator, ...]

    def __init__(self, states: Sequence[DensityOperator]):
        object.__setattr__(self, "states", tuple(states))


@dataclass(frozen=True)
class EntangledAttack:
    """The source sends one joint state across all N+1 registers."""

    joint: DensityOperator


Attack = Union[HonestSource, IIDAttack, SeparableAttack, EntangledAttack]


def _validate_probability_vector(vec, tol, name):
    arr = np.asarray(vec, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty vector")
    if arr.min() < 0.0 or abs(arr.sum() - 1.0) > tol:
        raise ValueError(f"{name} must be a probability vector, sum {arr.sum()!r}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FixedProtocol:
    """A verification protocol with a fixed number of rounds.

    ``omega`` has one entry per round (length N+1). ``measurements`` is
    either one explicit :class:`BinaryMeasurement` per output round or
    ``None``, meaning "project onto N copies of the (pure) target".
    """

    target: TargetState
    omega: np.ndarray
    measurements: tuple[BinaryMeasurement, ...] | None = None
    max_tensor_dim: int = MAX_TENSOR_DIM

    def __post_init__(self):
        omega = _validate_probability_vector(self.omega, self.target.rho.tol.trace, "omega")
        if omega.size < 2:
            raise ValueError("a protocol needs at least one verification round")
        object.__setattr__(self, "omega", omega)
        if self.measurements is None:
            if not self.target.is_pure:
                raise ValueError("symbolic projective measurements require a pure target")
        else:
            ms = tuple(self.measurements)
            if len(ms) != omega.size:
                raise ValueError("one measurement per output round required")
            expected = self.target.dim**self.n_verify
            if any(m.dim != expected for m in ms):
                raise ValueError(f"explicit measurements must act on dimension {expected}")
            object.__setattr__(self, "measurements", ms)

    @property
    def n_verify(self) -> int:
        return self.omega.size - 1

    @property
    def dim(self) -> int:
        return self.target.dim

    @property
    def is_symbolic(self) -> bool:
        return self.measurements is None

    def materialized(self) -> "FixedProtocol":
        """Explicit-matrix copy of a symbolic protocol, for cross-checks."""
        if not self.is_symbolic:
            return self
        joint = self.dim**self.n_verify
        if joint > self.max_tensor_dim:
            raise ValueError(f"tensor dimension {joint} exceeds cap {self.max_tensor_dim}")
        phi = self.target.principal_vector.amplitudes
        vec = phi
        for _ in range(self.n_verify - 1):
            vec = np.kron(vec, phi)
        projector = np.outer(vec, vec.conj())
        ms = tuple(BinaryMeasurement(projector) for _ in range(self.omega.size))
        return FixedProtocol(self.target, self.omega, ms, self.max_tensor_dim)


def canonical_protocol(target: TargetState, n_verify: int) -> FixedProtocol:
    """Uniform output-round choice with projection onto the pure target's copies.

    This is the reference instance: perfectly correct, and no attack at
    all pushes its fidelity-based insecurity above 1/(N+1).
    """
    if not target.is_pure:
        raise ValueError("the canonical protocol requires a pure target")
    if n_verify < 1:
        raise ValueError("need at least one verification round")
    omega = np.full(n_verify + 1, 1.0 / (n_verify + 1))
    return FixedProtocol(target, omega, None)


def _overlap(target: TargetState, state: DensityOperator) -> float:
    phi = target.principal_vector.amplitudes
    val = float(np.real(phi.conj() @ state.matrix @ phi))
    return max(0.0, val)


def accept_prob(protocol: FixedProtocol, i: int, sent: Sequence[DensityOperator]) -> float:
    """Acceptance probability when round ``i`` (0-based) is the output round.

    ``sent`` lists the N measured states in round order. Symbolic
    projective protocols factor the probability into single-register
    overlaps; explicit protocols build the tensor product.
    """
    if not 0 <= i < protocol.omega.size:
        raise ValueError(f"round index {i} outside 0..{protocol.omega.size - 1}")
    sent = list(sent)
    if len(sent) != protocol.n_verify:
        raise ValueError(f"expected {protocol.n_verify} measured states, got {len(sent)}")
    if any(s.dim != protocol.dim for s in sent):
        raise ValueError("measured states must match the protocol dimension")
    if protocol.is_symbolic:
        return float(math.prod(_overlap(protocol.target, s) for s in sent))
    joint = protocol.dim**protocol.n_verify
    if joint > protocol.max_tensor_dim:
        raise ValueError(f"tensor dimension {joint} exceeds cap {protocol.max_tensor_dim}")
    return protocol.measurements[i].accept_probability(tensor_all(sent))


def _run_separable(protocol: FixedProtocol, states: Sequence[DensityOperator]) -> AbortingState:
    branches = []
    for i, w in enumerate(protocol.omega):
        measured = [s for j, s in enumerate(states) if j != i]
        branches.append((float(w), accept_prob(protocol, i, measured), states[i]))
    return mix(branches)


def _symmetrized_accept_block(protocol: FixedProtocol, joint: DensityOperator) -> np.ndarray:
    """Accepted sub-normalized block for a joint attack on a projective protocol.

    For each candidate output round the other registers are projected onto
    the target; averaging over the round choice symmetrizes the joint
    state, so permuting its registers never changes the result.
    """
    n_total = protocol.omega.size
    d = protocol.dim
    if joint.dim != d**n_total:
        raise ValueError(f"joint attack state must have dimension {d**n_total}, got {joint.dim}")
    tensor_form = joint.matrix.reshape([d] * (2 * n_total))
    phi = protocol.target.principal_vector.amplitudes
    letters = string.ascii_letters
    kets = letters[:n_total]
    bras = letters[n_total : 2 * n_total]
    block = np.zeros((d, d), dtype=complex)
    for ell, weight in enumerate(protocol.omega):
        operands = [tensor_form]
        subscripts = [kets + bras]
        for k in range(n_total):
            if k == ell:
                continue
            operands.extend([phi.conj(), phi])
            subscripts.extend([kets[k], bras[k]])
        expr = ",".join(subscripts) + "->" + kets[ell] + bras[ell]
        block += weight * np.einsum(expr, *operands)
    return (block + block.conj().T) / 2


def run_fixed(protocol: FixedProtocol, attack: Attack) -> AbortingState:
    """Exact average output of a fixed-round protocol under an attack.

    Honest sources yield the target itself at the honest acceptance
    probability. Entangled attacks are only defined against symbolic
    projective protocols, where the register-rotation symmetrization
    applies.
    """
    if isinstance(attack, HonestSource):
        honest = [protocol.target.rho] * (protocol.omega.size)
        accept = sum(
            float(w) * accept_prob(protocol, i, honest[:i] + honest[i + 1 :])
            for i, w in enumerate(protocol.omega)
        )
        return AbortingState(min(1.0, accept), protocol.target.rho)
    if isinstance(attack, IIDAttack):
        if attack.state.dim != protocol.dim:
            raise ValueError("attack state dimension does not match the protocol")
        copies = [attack.state] * protocol.n_verify
        accept = sum(
            float(w) * accept_prob(protocol, i, copies) for i, w in enumerate(protocol.omega)
        )
        return AbortingState(min(1.0, accept), attack.state)
    if isinstance(attack, SeparableAttack):
        if len(attack.states) != protocol.omega.size:
            raise ValueError(
                f"separable attack needs {protocol.omega.size} states, got {len(attack.states)}"
            )
        if any(s.dim != protocol.dim for s in attack.states):
            raise ValueError("attack state dimension does not match the protocol")
        return _run_separable(protocol, attack.states)
    if isinstance(attack, EntangledAttack):
        if not protocol.is_symbolic:
            raise ValueError("entangled attacks are only supported on projective protocols")
        if protocol.dim ** protocol.omega.size > protocol.max_tensor_dim:
            raise ValueError("joint space exceeds the tensor size cap")
        block = _symmetrized_accept_block(protocol, attack.joint)
        accept = float(np.trace(block).real)
        if accept <= DEFAULT_TOL.psd:
            return AbortingState(0.0, DensityOperator.maximally_mixed(protocol.dim))
        return AbortingState(min(1.0, accept), DensityOperator(block / accept))
    raise TypeError(f"unknown attack type: {type(attack).__name__}")


def point_mass_rounds(n: int, n_max: int | None = None) -> np.ndarray:
    """Round-count distribution concentrated on a single value."""
    size = (n if n_max is None else n_max) + 1
    dist = np.zeros(size)
    dist[n] = 1.0
    return dist


def truncated_geometric_rounds(q: float, n_max: int) -> tuple[np.ndarray, float]:
    """Geometric distribution on {0..n_max}, renormalized.

    Returns the distribution and the tail mass removed by truncation; the
    untruncated mean would be (1-q)/q.
    """
    if not 0.0 < q < 1.0:
        raise ValueError(f"geometric parameter must lie in (0, 1), got {q!r}")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    n = np.arange(n_max + 1)
    raw = q * (1.0 - q) ** n
    lost = 1.0 - raw.sum()
    return raw / raw.sum(), float(lost)


def uniform_rounds(lo: int, hi: int) -> np.ndarray:
    """Uniform round-count distribution on {lo..hi}."""
    if not 0 <= lo <= hi:
        raise ValueError(f"need 0 <= lo <= hi, got ({lo}, {hi})")
    dist = np.zeros(hi + 1)
    dist[lo:] = 1.0 / (hi - lo + 1)
    return dist


@dataclass(frozen=True)
class VariableProtocol:
    """A protocol whose verification-round count is drawn from a distribution.

    ``round_dist`` is a finitely truncated distribution over n = 0..n_max
    verification rounds; ``truncated_mass`` records how much probability
    the truncation removed before renormalization. ``output_dists`` maps n
    to the output-round distribution on the n+1 registers and defaults to
    uniform. Measurements are symbolic projections onto n target copies,
    or an explicit per-(n, i) family.
    """

    target: TargetState
    round_dist: np.ndarray
    output_dists: dict[int, np.ndarray] | None = None
    measurements: dict[int, tuple[BinaryMeasurement, ...]] | None = None
    truncated_mass: float = 0.0
    max_tensor_dim: int = MAX_TENSOR_DIM

    def __post_init__(self):
        dist = _validate_probability_vector(
            self.round_dist, self.target.rho.tol.trace, "round distribution"
        )
        object.__setattr__(self, "round_dist", dist)
        if self.expected_rounds <= 0.0:
            raise ValueError("expected verification-round count must be positive")
        outs = {}
        for n in range(dist.size):
            if dist[n] == 0.0:
                continue
            if self.output_dists is not None and n in self.output_dists:
                outs[n] = _validate_probability_vector(
                    self.output_dists[n], self.target.rho.tol.trace, f"output distribution {n}"
                )
                if outs[n].size != n + 1:
                    raise ValueError(f"output distribution for {n} rounds must have {n + 1} entries")
            else:
                outs[n] = _validate_probability_vector(
                    np.full(n + 1, 1.0 / (n + 1)), 1e-9, f"output distribution {n}"
                )
        object.__setattr__(self, "output_dists", outs)
        if self.measurements is None:
            if not self.target.is_pure:
                raise ValueError("symbolic projective measurements require a pure target")
        else:
            for n, family in self.measurements.items():
                if n == 0:
                    continue
                expected = self.target.dim**n
                if expected > self.max_tensor_dim:
                    raise ValueError(f"tensor dimension {expected} exceeds cap")
                if len(family) != n + 1 or any(m.dim != expected for m in family):
                    raise ValueError(f"measurement family for {n} rounds is malformed")

    @property
    def n_max(self) -> int:
        return self.round_dist.size - 1

    @property
    def expected_rounds(self) -> float:
        return float(np.arange(self.round_dist.size) @ self.round_dist)


def canonical_variable_protocol(target: TargetState, round_dist: np.ndarray, truncated_mass: float = 0.0) -> VariableProtocol:
    """Variable-round analogue of the canonical protocol."""
    return VariableProtocol(target, round_dist, None, None, truncated_mass)


def _variable_round_accept(protocol: VariableProtocol, n: int, state: DensityOperator) -> float:
    """Average acceptance probability given n verification rounds."""
    if protocol.measurements is None:
        return _overlap(protocol.target, state) ** n
    if n == 0:
        return 1.0
    family = protocol.measurements.get(n)
    if family is None:
        raise ValueError(f"no measurement family for {n} verification rounds")
    measured = tensor_all([state] * n)
    omega_n = protocol.output_dists[n]
    return float(sum(w * m.accept_probability(measured) for w, m in zip(omega_n, family)))


def run_variable(protocol: VariableProtocol, attack: Attack) -> AbortingState:
    """Exact average output of a variable-round protocol.

    Only honest sources and i.i.d. attacks are supported: against a round
    count revealed only as the protocol unfolds, per-round tailoring and
    cross-round entanglement have no well-defined strategy here.
    """
    if isinstance(attack, HonestSource):
        state = protocol.target.rho
    elif isinstance(attack, IIDAttack):
        state = attack.state
        if state.dim != protocol.target.dim:
            raise ValueError("attack state dimension does not match the protocol")
    else:
        raise ValueError("variable-round protocols accept only honest or i.i.d. sources")
    accept = 0.0
    for n, weight in enumerate(protocol.round_dist):
        if weight == 0.0:
            continue
        accept += float(weight) * _variable_round_accept(protocol, n, state)
    return AbortingState(min(1.0, accept), state)
