"""Dense quantum-information kernels.

Validated operator types (density operators, pure states, binary
measurements) plus the distance and discrimination primitives everything
else is built on: fidelity, trace distance, tensor and direct sums, and
the optimal two-state discrimination measurement.

All matrix functions (square roots, trace norms) go through Hermitian
eigendecomposition; every operator handled here is Hermitian, so general
SVD is never needed. Eigenvalues in ``[-psd_tol, 0]`` are clamped to zero,
anything below ``-psd_tol`` is an error.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "DensityOperator",
    "PureState",
    "BinaryMeasurement",
    "tensor",
    "tensor_all",
    "tensor_power",
    "direct_sum",
    "fidelity",
    "fidelity_psd",
    "trace_distance",
    "trace_norm",
    "helstrom_measurement",
    "distinguishing_advantage",
    "orthogonal_pure_state",
    "rotate_overlap",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances used for validation and closeness tests.

    Defaults are tuned for double precision and dimensions well below ~500,
    where dense eigendecomposition noise stays around 1e-13.
    """

    hermitian: float = 1e-10
    trace: float = 1e-10
    norm: float = 1e-10
    psd: float = 1e-10
    fidelity: float = 1e-9


DEFAULT_TOL = Tolerances()


def _as_complex_matrix(matrix, name: str) -> np.ndarray:
    mat = np.asarray(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {mat.shape}")
    return mat


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DensityOperator:
    """A validated density operator: Hermitian, positive semidefinite, unit trace.

    The matrix is checked at construction and frozen afterwards, so
    operations may assume the invariants and instances are safe to share
    across threads. Equality between operators is always tolerance-based;
    use :meth:`close_to`.
    """

    matrix: np.ndarray
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        mat = _as_complex_matrix(self.matrix, "density operator")
        herm_gap = np.abs(mat - mat.conj().T).max()
        if herm_gap > self.tol.hermitian:
            raise ValueError(f"density operator not Hermitian: deviation {herm_gap:.3e}")
        mat = (mat + mat.conj().T) / 2
        eigs = np.linalg.eigvalsh(mat)
        if eigs[0] < -self.tol.psd:
            raise ValueError(f"density operator not PSD: min eigenvalue {eigs[0]:.3e}")
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > self.tol.trace:
            raise ValueError(f"density operator trace {tr!r} is not 1")
        object.__setattr__(self, "matrix", _freeze(mat))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def close_to(self, other: "DensityOperator", tol: float | None = None) -> bool:
        """Tolerance-based equality in max-entry distance."""
        if self.dim != other.dim:
            return False
        gap = np.abs(self.matrix - other.matrix).max()
        return gap <= (self.tol.fidelity if tol is None else tol)

    @staticmethod
    def maximally_mixed(dim: int) -> "DensityOperator":
        return DensityOperator(np.eye(dim) / dim)


@dataclass(frozen=True)
class PureState:
    """A unit-norm complex amplitude vector."""

    amplitudes: np.ndarray
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        vec = np.asarray(self.amplitudes, dtype=complex)
        if vec.ndim != 1 or vec.size == 0:
            raise ValueError(f"pure state must be a nonempty vector, got shape {vec.shape}")
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > self.tol.norm:
            raise ValueError(f"pure state norm {norm!r} is not 1")
        object.__setattr__(self, "amplitudes", _freeze(vec))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def overlap_sq(self, other: "PureState") -> float:
        """Squared inner product |<self|other>|^2."""
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)

    def projector(self) -> DensityOperator:
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.tol)

    @staticmethod
    def basis_state(dim: int, index: int) -> "PureState":
        vec = np.zeros(dim, dtype=complex)
        vec[index] = 1.0
        return PureState(vec)


@dataclass(frozen=True)
class BinaryMeasurement:
    """A two-outcome measurement given by its acceptance operator.

    The acceptance operator E must satisfy 0 <= E <= 1 so that both E and
    1 - E are positive semidefinite; the rejection operator is implicit.
    """

    accept_operator: np.ndarray
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        mat = _as_complex_matrix(self.accept_operator, "acceptance operator")
        herm_gap = np.abs(mat - mat.conj().T).max()
        if herm_gap > self.tol.hermitian:
            raise ValueError(f"acceptance operator not Hermitian: deviation {herm_gap:.3e}")
        mat = (mat + mat.conj().T) / 2
        eigs = np.linalg.eigvalsh(mat)
        if eigs[0] < -self.tol.psd or eigs[-1] > 1.0 + self.tol.psd:
            raise ValueError(
                f"acceptance operator eigenvalues [{eigs[0]:.3e}, {eigs[-1]:.3e}] not within [0, 1]"
            )
        object.__setattr__(self, "accept_operator", _freeze(mat))

    @property
    def dim(self) -> int:
        return self.accept_operator.shape[0]

    def accept_probability(self, state: DensityOperator) -> float:
        """Probability of the accepting outcome on ``state``."""
        if state.dim != self.dim:
            raise ValueError(f"dimension mismatch: measurement {self.dim}, state {state.dim}")
        return float(np.trace(self.accept_operator @ state.matrix).real)


def _check_same_dim(a, b):
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


# Square roots amplify spectral noise (sqrt(1e-16) = 1e-8), so eigenvalues
# this far below the largest one count as exact zeros before taking roots.
SPECTRAL_RCOND = 1e-13


def _clamped_eigvalsh(mat: np.ndarray, psd_tol: float) -> np.ndarray:
    """Eigenvalues of a Hermitian PSD matrix with noise-level ones zeroed."""
    eigs = np.linalg.eigvalsh((mat + mat.conj().T) / 2)
    if eigs.min() < -psd_tol:
        raise ValueError(f"matrix not PSD within tolerance: min eigenvalue {eigs.min():.3e}")
    cutoff = SPECTRAL_RCOND * max(float(eigs.max()), 0.0)
    return np.where(eigs > cutoff, eigs, 0.0)


def _sqrtm_psd(mat: np.ndarray, psd_tol: float) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix via eigendecomposition."""
    eigs, vecs = np.linalg.eigh((mat + mat.conj().T) / 2)
    if eigs.min() < -psd_tol:
        raise ValueError(f"matrix not PSD within tolerance: min eigenvalue {eigs.min():.3e}")
    cutoff = SPECTRAL_RCOND * max(float(eigs.max()), 0.0)
    root = np.sqrt(np.where(eigs > cutoff, eigs, 0.0))
    return (vecs * root) @ vecs.conj().T


def tensor(a: DensityOperator, b: DensityOperator) -> DensityOperator:
    """Tensor (Kronecker) product of two density operators."""
    return DensityOperator(np.kron(a.matrix, b.matrix), a.tol)


def tensor_all(states) -> DensityOperator:
    """Tensor product of a nonempty sequence of density operators."""
    states = list(states)
    if not states:
        raise ValueError("tensor_all needs at least one state")
    mat = states[0].matrix
    for state in states[1:]:
        mat = np.kron(mat, state.matrix)
    return DensityOperator(mat, states[0].tol)


def tensor_power(a: DensityOperator, k: int) -> DensityOperator:
    """k-fold tensor power of a density operator, k >= 1."""
    if k < 1:
        raise ValueError("tensor power requires k >= 1")
    return tensor_all([a] * k)


def direct_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Block-diagonal direct sum of two matrices (raw arrays, no validation)."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    b = np.atleast_2d(np.asarray(b, dtype=complex))
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=complex)
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0] :, a.shape[1] :] = b
    return out


def fidelity_psd(a: np.ndarray, b: np.ndarray, psd_tol: float = DEFAULT_TOL.psd) -> float:
    """Fidelity ``(tr sqrt(sqrt(a) b sqrt(a)))**2`` of two PSD matrices.

    Inputs may be sub-normalized; the formula is homogeneous of degree one
    in each argument, which is exactly what the direct-sum block algebra
    needs.
    """
    sqrt_a = _sqrtm_psd(np.asarray(a, dtype=complex), psd_tol)
    inner = sqrt_a @ np.asarray(b, dtype=complex) @ sqrt_a
    eigs = _clamped_eigvalsh(inner, psd_tol)
    return float(np.sqrt(eigs).sum() ** 2)


def fidelity(a: DensityOperator, b: DensityOperator) -> float:
    """Fidelity of two density operators, squared-trace convention.

    Returns ``(tr sqrt(sqrt(a) b sqrt(a)))**2``, which is 1 iff the states
    are equal and |<a|b>|^2 for pure states. Symmetric in its arguments up
    to numerical noise.
    """
    _check_same_dim(a, b)
    return min(1.0, fidelity_psd(a.matrix, b.matrix, a.tol.psd))


def trace_norm(mat: np.ndarray) -> float:
    """Trace norm of a Hermitian matrix: sum of absolute eigenvalues."""
    return float(np.abs(np.linalg.eigvalsh((mat + np.conj(mat).T) / 2)).sum())


def trace_distance(a: DensityOperator, b: DensityOperator) -> float:
    """Halved trace norm of the difference, in [0, 1]."""
    _check_same_dim(a, b)
    return min(1.0, 0.5 * trace_norm(a.matrix - b.matrix))


def helstrom_measurement(a: DensityOperator, b: DensityOperator) -> BinaryMeasurement:
    """Optimal measurement for distinguishing two states.

    Projects onto the non-negative eigenspace of (a - b); its
    distinguishing advantage saturates the trace distance.
    """
    _check_same_dim(a, b)
    eigs, vecs = np.linalg.eigh((a.matrix - b.matrix + (a.matrix - b.matrix).conj().T) / 2)
    keep = vecs[:, eigs >= 0.0]
    return BinaryMeasurement(keep @ keep.conj().T, a.tol)


def distinguishing_advantage(
    m: BinaryMeasurement, a: DensityOperator, b: DensityOperator
) -> float:
    """|P(accept | a) - P(accept | b)| for a fixed binary measurement."""
    _check_same_dim(a, b)
    if m.dim != a.dim:
        raise ValueError(f"dimension mismatch: measurement {m.dim}, states {a.dim}")
    return abs(m.accept_probability(a) - m.accept_probability(b))


def orthogonal_pure_state(phi: PureState) -> PureState:
    """A deterministic unit vector orthogonal to ``phi`` (dim >= 2).

    Starts from the standard basis vector where ``phi`` has the smallest
    amplitude and removes the overlap, so |0> maps to |1> and |+> to |->.
    """
    if phi.dim < 2:
        raise ValueError("no orthogonal state exists in dimension 1")
    amps = phi.amplitudes
    k = int(np.argmin(np.abs(amps)))
    vec = np.zeros(phi.dim, dtype=complex)
    vec[k] = 1.0
    vec -= np.vdot(amps, vec) * amps
    return PureState(vec / np.linalg.norm(vec), phi.tol)


def rotate_overlap(phi1: PureState, direction: PureState, overlap_sq: float) -> PureState:
    """Unit vector with prescribed squared overlap against ``phi1``.

    Returns ``sqrt(overlap_sq) * phi1 + sqrt(1 - overlap_sq) * direction``;
    the direction must be orthogonal to ``phi1`` so the result has exactly
    the requested overlap.
    """
    _check_same_dim(phi1, direction)
    if not 0.0 <= overlap_sq <= 1.0:
        raise ValueError(f"overlap_sq must lie in [0, 1], got {overlap_sq!r}")
    if phi1.overlap_sq(direction) > phi1.tol.fidelity:
        raise ValueError("rotation direction is not orthogonal to the reference state")
    vec = np.sqrt(overlap_sq) * phi1.amplitudes + np.sqrt(1.0 - overlap_sq) * direction.amplitudes
    return PureState(vec / np.linalg.norm(vec), phi1.tol)
