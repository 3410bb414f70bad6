"""Brute-force cross-checks for every closed form in the package.

Each check pits a formula against an independent computation: explicit
tensor products, block-matrix embeddings of the abort sector, exhaustive
grids over the ideal acceptance probability, or plain random-instance
inequality sweeps. Checks are registered by name, draw their randomness
from a seed-derived substream (identical config and seed means identical
results, bit for bit), and report the worst violation seen together with a
witness describing where it happened.
"""

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import bounds
from .attacks import iid_composable_attack, iid_standalone_attack, naive_attack
from .kernels import (
    BinaryMeasurement,
    DensityOperator,
    PureState,
    direct_sum,
    distinguishing_advantage,
    fidelity,
    fidelity_psd,
    helstrom_measurement,
    tensor_all,
    tensor_power,
    trace_distance,
    trace_norm,
    _sqrtm_psd,
)
from .protocol import (
    EntangledAttack,
    SeparableAttack,
    canonical_protocol,
    run_fixed,
)
from .security import evaluate_composable, evaluate_standalone
from .states import (
    AbortingState,
    OptimizedValue,
    TargetState,
    composable_distance_dishonest,
    composable_distance_honest,
    standalone_fidelity_dishonest,
    standalone_fidelity_honest,
)

__all__ = [
    "OracleConfig",
    "CheckResult",
    "haar_random_pure",
    "random_density",
    "random_measurement",
    "random_probability_vector",
    "grid_max_ideal_p",
    "exact_multicopy_distance",
    "entangled_attack_sweep",
    "inequality_sweep",
    "available_checks",
    "run_check",
    "run_checks",
]

DEFAULT_SEED = 1729


@dataclass(frozen=True)
class OracleConfig:
    """Knobs for the verification battery."""

    seed: int = DEFAULT_SEED
    sample_count: int = 200
    grid_points: int = 10_000
    max_tensor_dim: int = 4096
    tolerance: float = 1e-9
    grid_tolerance: float = 1e-6

    def __post_init__(self):
        if self.sample_count < 1 or self.grid_points < 2 or self.max_tensor_dim < 1:
            raise ValueError("counts must be positive (grid needs at least 2 points)")
        if self.tolerance <= 0 or self.grid_tolerance <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check: worst violation against its tolerance."""

    check_name: str
    passed: bool
    worst_violation: float
    witness: dict
    tolerance: float


# ---------------------------------------------------------------------------
# seeded random instances


def haar_random_pure(dim: int, rng: np.random.Generator) -> PureState:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(vec / np.linalg.norm(vec))


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """Random mixed state: convex mixture of Haar-random projectors."""
    r = dim if rank is None else rank
    weights = rng.dirichlet(np.ones(r))
    mat = np.zeros((dim, dim), dtype=complex)
    for w in weights:
        v = haar_random_pure(dim, rng).amplitudes
        mat += w * np.outer(v, v.conj())
    return DensityOperator(mat)


def random_measurement(dim: int, rng: np.random.Generator) -> BinaryMeasurement:
    """Random binary measurement: Haar basis with uniform [0,1] spectrum."""
    gauss = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, _ = np.linalg.qr(gauss)
    spectrum = rng.uniform(0.0, 1.0, dim)
    return BinaryMeasurement((q * spectrum) @ q.conj().T)


def random_probability_vector(k: int, rng: np.random.Generator) -> np.ndarray:
    return rng.dirichlet(np.ones(k))


def _random_target(dim: int, rng: np.random.Generator, rank: int | None = None) -> TargetState:
    if rank == 1:
        return TargetState.from_pure(haar_random_pure(dim, rng))
    return TargetState.from_density(random_density(dim, rng, rank))


def _random_aborting(dim: int, rng: np.random.Generator) -> AbortingState:
    return AbortingState(float(rng.uniform()), random_density(dim, rng))


# ---------------------------------------------------------------------------
# independent computations


def _embed_output(out: AbortingState) -> np.ndarray:
    """Explicit block matrix of p*sigma plus the abort sector."""
    return direct_sum(out.accepted_block(), [[1.0 - out.accept_prob]])


def _embed_ideal(target: TargetState, p: float) -> np.ndarray:
    return direct_sum(p * target.rho.matrix, [[1.0 - p]])


def _grid_pass(out: AbortingState, target: TargetState, definition: str, ps: np.ndarray):
    d = target.dim
    batch = np.zeros((ps.size, d + 1, d + 1), dtype=complex)
    batch[:, :d, :d] = ps[:, None, None] * target.rho.matrix
    batch[:, d, d] = 1.0 - ps
    fixed = _embed_output(out)
    if definition == "standalone":
        sqrt_fixed = _sqrtm_psd(fixed, 1e-10)
        inner = sqrt_fixed @ batch @ sqrt_fixed
        inner = (inner + np.conj(np.swapaxes(inner, -1, -2))) / 2
        eigs = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
        values = np.sqrt(eigs).sum(axis=-1) ** 2
        idx = int(np.argmax(values))
    elif definition == "composable":
        diff = fixed - batch
        eigs = np.linalg.eigvalsh((diff + np.conj(np.swapaxes(diff, -1, -2))) / 2)
        values = 0.5 * np.abs(eigs).sum(axis=-1)
        idx = int(np.argmin(values))
    else:
        raise ValueError(f"unknown definition {definition!r}")
    return idx, values


def grid_max_ideal_p(
    out: AbortingState,
    target: TargetState,
    definition: str,
    grid_points: int = 10_000,
) -> OptimizedValue:
    """Optimize over the ideal acceptance probability by grid search.

    Builds the explicit block embeddings for every grid value of p and
    calls the raw fidelity or trace-norm kernels on them, so the result is
    independent of the closed forms it is used to check. A second pass of
    the same size zooms into the bracket around the first-pass optimum:
    the composable objective has a kink at its minimum, and one uniform
    pass would leave a resolution error of about slope/grid_points. Ties
    resolve to the smallest p.
    """
    if grid_points < 2:
        raise ValueError("need at least 2 grid points")
    if out.dim != target.dim:
        raise ValueError("dimension mismatch between output and target")
    ps = np.linspace(0.0, 1.0, grid_points)
    idx, values = _grid_pass(out, target, definition, ps)
    lo = ps[max(0, idx - 1)]
    hi = ps[min(ps.size - 1, idx + 1)]
    fine = np.linspace(lo, hi, grid_points)
    fine_idx, fine_values = _grid_pass(out, target, definition, fine)
    better = (
        fine_values[fine_idx] > values[idx]
        if definition == "standalone"
        else fine_values[fine_idx] < values[idx]
    )
    if better:
        return OptimizedValue(best_p=float(fine[fine_idx]), value=float(fine_values[fine_idx]))
    return OptimizedValue(best_p=float(ps[idx]), value=float(values[idx]))


def exact_multicopy_distance(
    a: DensityOperator, b: DensityOperator, k: int, max_tensor_dim: int = 4096
) -> float:
    """Halved trace distance of k-fold tensor powers, built explicitly."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    if a.dim**k > max_tensor_dim:
        raise ValueError(f"tensor dimension {a.dim**k} exceeds cap {max_tensor_dim}")
    return trace_distance(tensor_power(a, k), tensor_power(b, k))


# ---------------------------------------------------------------------------
# the check registry

_CHECKS: dict[str, tuple[str, Callable]] = {}


def _register(name: str, kind: str = "algebraic"):
    def decorate(fn):
        _CHECKS[name] = (kind, fn)
        return fn

    return decorate


class _Tracker:
    """Keeps the worst violation and a witness for it."""

    def __init__(self):
        self.worst = -math.inf
        self.witness: dict = {}

    def record(self, violation: float, **info):
        violation = float(violation)
        if violation > self.worst:
            self.worst = violation
            self.witness = {k: (float(v) if isinstance(v, (np.floating, float)) else v) for k, v in info.items()}

    def result(self) -> tuple[float, dict]:
        return self.worst, self.witness


def _pair_dims(rng, lo=2, hi=6):
    return int(rng.integers(lo, hi + 1))


@_register("fvdg_trace_chain")
def _check_fvdg_trace(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count):
        dim = _pair_dims(rng)
        a, b = random_density(dim, rng), random_density(dim, rng)
        fid, dist = fidelity(a, b), trace_distance(a, b)
        low = (1.0 - math.sqrt(fid)) - dist
        high = dist - math.sqrt(max(0.0, 1.0 - fid))
        worst.record(max(low, high), sample=i, dim=dim, fidelity=fid, distance=dist)
    return worst.result()


@_register("fvdg_fidelity_chain")
def _check_fvdg_fidelity(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count):
        dim = _pair_dims(rng)
        a, b = random_density(dim, rng), random_density(dim, rng)
        fid, dist = fidelity(a, b), trace_distance(a, b)
        low = (1.0 - dist) ** 2 - fid
        high = fid - (1.0 - dist**2)
        worst.record(max(low, high), sample=i, dim=dim, fidelity=fid, distance=dist)
    return worst.result()


@_register("fidelity_symmetry")
def _check_fidelity_symmetry(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count):
        dim = _pair_dims(rng)
        a, b = random_density(dim, rng), random_density(dim, rng)
        worst.record(abs(fidelity(a, b) - fidelity(b, a)), sample=i, dim=dim)
    return worst.result()


@_register("fidelity_pure_identity")
def _check_fidelity_pure(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count):
        dim = _pair_dims(rng)
        psi = haar_random_pure(dim, rng)
        rho = random_density(dim, rng)
        expected = float(np.real(psi.amplitudes.conj() @ rho.matrix @ psi.amplitudes))
        worst.record(abs(fidelity(psi.projector(), rho) - expected), sample=i, dim=dim)
    return worst.result()


@_register("fidelity_tensor_product")
def _check_fidelity_tensor(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count):
        da, dc = _pair_dims(rng, 2, 4), _pair_dims(rng, 2, 4)
        a, b = random_density(da, rng), random_density(da, rng)
        c, d = random_density(dc, rng), random_density(dc, rng)
        joint = fidelity_psd(np.kron(a.matrix, c.matrix), np.kron(b.matrix, d.matrix))
        worst.record(abs(joint - fidelity(a, b) * fidelity(c, d)), sample=i, dims=[da, dc])
    return worst.result()


@_register("fidelity_direct_sum")
def _check_fidelity_direct_sum(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count):
        da, db = _pair_dims(rng, 1, 4), _pair_dims(rng, 1, 4)
        p, q = rng.uniform(size=2)
        blocks = [
            (p * random_density(da, rng).matrix, q * random_density(da, rng).matrix),
            ((1 - p) * random_density(db, rng).matrix, (1 - q) * random_density(db, rng).matrix),
        ]
        lhs = math.sqrt(
            fidelity_psd(direct_sum(blocks[0][0], blocks[1][0]), direct_sum(blocks[0][1], blocks[1][1]))
        )
        rhs = sum(math.sqrt(fidelity_psd(x, y)) for x, y in blocks)
        worst.record(abs(lhs - rhs), sample=i, dims=[da, db], p=p, q=q)
    return worst.result()


@_register("fidelity_scaling")
def _check_fidelity_scaling(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count):
        dim = _pair_dims(rng)
        lam = float(rng.uniform(0.0, 2.0))
        a, b = random_density(dim, rng), random_density(dim, rng)
        scaled = fidelity_psd(lam * a.matrix, b.matrix)
        worst.record(abs(scaled - lam * fidelity(a, b)), sample=i, dim=dim, scale=lam)
    return worst.result()


@_register("trace_distance_pure")
def _check_trace_pure(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count):
        dim = _pair_dims(rng)
        psi, phi = haar_random_pure(dim, rng), haar_random_pure(dim, rng)
        expected = math.sqrt(max(0.0, 1.0 - psi.overlap_sq(phi)))
        actual = trace_distance(psi.projector(), phi.projector())
        worst.record(abs(actual - expected), sample=i, dim=dim)
    return worst.result()


@_register("multicopy_tensor_bound")
def _check_multicopy(config, rng):
    worst = _Tracker()
    for i in range(max(20, config.sample_count // 10)):
        k = int(rng.integers(2, 5))
        dim = int(rng.integers(2, 4))
        pairs = [(random_density(dim, rng), random_density(dim, rng)) for _ in range(k)]
        exact = trace_distance(
            tensor_all([a for a, _ in pairs]), tensor_all([b for _, b in pairs])
        )
        product = math.prod(fidelity(a, b) for a, b in pairs)
        worst.record(exact - math.sqrt(max(0.0, 1.0 - product)), sample=i, k=k, dim=dim)
    return worst.result()


@_register("helstrom_saturation")
def _check_helstrom(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count):
        dim = _pair_dims(rng)
        a, b = random_density(dim, rng), random_density(dim, rng)
        adv = distinguishing_advantage(helstrom_measurement(a, b), a, b)
        worst.record(abs(adv - trace_distance(a, b)), sample=i, dim=dim)
    return worst.result()


@_register("measurement_advantage")
def _check_advantage(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count):
        dim = _pair_dims(rng)
        a, b = random_density(dim, rng), random_density(dim, rng)
        adv = distinguishing_advantage(random_measurement(dim, rng), a, b)
        worst.record(adv - trace_distance(a, b), sample=i, dim=dim)
    return worst.result()


@_register("holevo_helstrom")
def _check_holevo(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count):
        dim = _pair_dims(rng)
        lam = float(rng.uniform())
        a, b = random_density(dim, rng), random_density(dim, rng)
        m = random_measurement(dim, rng)
        reject = BinaryMeasurement(np.eye(dim) - m.accept_operator)
        lhs = lam * m.accept_probability(a) + (1 - lam) * reject.accept_probability(b)
        rhs = 0.5 + 0.5 * trace_norm(lam * a.matrix - (1 - lam) * b.matrix)
        worst.record(lhs - rhs, sample=i, dim=dim, weight=lam)
    return worst.result()


@_register("jensen_binomial")
def _check_jensen(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count):
        a = float(rng.uniform(0.01, 0.99))
        p = float(rng.uniform())
        n = int(rng.integers(1, 31))
        f = lambda x: math.sqrt(max(0.0, 1.0 - a**x))
        expectation = sum(
            math.comb(n, k) * p**k * (1 - p) ** (n - k) * f(k) for k in range(n + 1)
        )
        worst.record(expectation - f(n * p), sample=i, base=a, p=p, n=n)
    return worst.result()


@_register("concave_root_midpoint")
def _check_concave(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count):
        a = float(rng.choice([0.1, 0.5, 0.9]))
        x, y = np.sort(rng.uniform(0.0, 50.0, size=2))
        g = lambda t: math.sqrt(max(0.0, 1.0 - a**t))
        worst.record((g(x) + g(y)) / 2 - g((x + y) / 2), sample=i, base=a, x=float(x), y=float(y))
    return worst.result()


@_register("accept_gap_bound")
def _check_accept_gap(config, rng):
    worst = _Tracker()
    for i in range(max(20, config.sample_count // 10)):
        dim = int(rng.integers(2, 4))
        n = int(rng.integers(1, 4))
        rounds = n + 1
        omega = random_probability_vector(rounds, rng)
        measurements = [random_measurement(dim**n, rng) for _ in range(rounds)]
        phi, psi = random_density(dim, rng), random_density(dim, rng)
        phi_n, psi_n = tensor_power(phi, n), tensor_power(psi, n)
        p_h = sum(w * m.accept_probability(phi_n) for w, m in zip(omega, measurements))
        p_d = sum(w * m.accept_probability(psi_n) for w, m in zip(omega, measurements))
        copies_dist = trace_distance(phi_n, psi_n)
        jensen = math.sqrt(max(0.0, 1.0 - fidelity(phi, psi) ** n))
        violation = max(abs(p_h - p_d) - copies_dist, copies_dist - jensen)
        worst.record(violation, sample=i, dim=dim, n=n)
    return worst.result()


@_register("honest_functionals_block")
def _check_honest_block(config, rng):
    worst = _Tracker()
    for i in range(max(20, config.sample_count // 4)):
        dim = _pair_dims(rng, 2, 5)
        out = _random_aborting(dim, rng)
        target = _random_target(dim, rng)
        embedded_out = _embed_output(out)
        embedded_ideal = _embed_ideal(target, 1.0)
        fid_direct = fidelity_psd(embedded_out, embedded_ideal)
        dist_direct = 0.5 * trace_norm(embedded_out - embedded_ideal)
        v1 = abs(standalone_fidelity_honest(out, target) - fid_direct)
        v2 = abs(composable_distance_honest(out, target) - dist_direct)
        worst.record(max(v1, v2), sample=i, dim=dim, accept=out.accept_prob)
    return worst.result()


@_register("standalone_opt_grid", kind="grid")
def _check_standalone_grid(config, rng):
    worst = _Tracker()
    for i in range(max(5, config.sample_count // 20)):
        dim = _pair_dims(rng, 2, 5)
        out = _random_aborting(dim, rng)
        target = _random_target(dim, rng)
        closed = standalone_fidelity_dishonest(out, target)
        grid = grid_max_ideal_p(out, target, "standalone", config.grid_points)
        worst.record(abs(closed.value - grid.value), sample=i, dim=dim, best_p=closed.best_p)
    return worst.result()


@_register("composable_opt_grid", kind="grid")
def _check_composable_grid(config, rng):
    worst = _Tracker()
    for i in range(max(5, config.sample_count // 20)):
        dim = _pair_dims(rng, 2, 5)
        out = _random_aborting(dim, rng)
        target = _random_target(dim, rng)
        closed = composable_distance_dishonest(out, target)
        grid = grid_max_ideal_p(out, target, "composable", config.grid_points)
        worst.record(abs(closed.value - grid.value), sample=i, dim=dim, best_p=closed.best_p)
    return worst.result()


@_register("standalone_opt_identity")
def _check_standalone_identity(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count):
        dim = _pair_dims(rng, 2, 5)
        out = _random_aborting(dim, rng)
        target = _random_target(dim, rng)
        value = standalone_fidelity_dishonest(out, target).value
        expected = 1.0 - out.accept_prob * (1.0 - fidelity(out.conditional_state, target.rho))
        worst.record(abs(value - expected), sample=i, dim=dim, accept=out.accept_prob)
    return worst.result()


@_register("separable_accept_factorization")
def _check_separable_factorization(config, rng):
    worst = _Tracker()
    for i in range(max(10, config.sample_count // 10)):
        dim = int(rng.integers(2, 4))
        n = int(rng.integers(1, 4 if dim == 2 else 3))
        target = _random_target(dim, rng, rank=1)
        symbolic = canonical_protocol(target, n)
        explicit = symbolic.materialized()
        states = [random_density(dim, rng) for _ in range(n + 1)]
        out_sym = run_fixed(symbolic, SeparableAttack(states))
        out_exp = run_fixed(explicit, SeparableAttack(states))
        gap = abs(out_sym.accept_prob - out_exp.accept_prob)
        if out_sym.accept_prob > 1e-12:
            gap = max(gap, np.abs(out_sym.accepted_block() - out_exp.accepted_block()).max())
        worst.record(gap, sample=i, dim=dim, n=n)
    return worst.result()


@_register("entangled_product_consistency")
def _check_entangled_product(config, rng):
    worst = _Tracker()
    for i in range(max(10, config.sample_count // 10)):
        dim = 2
        n = int(rng.integers(1, 4))
        target = _random_target(dim, rng, rank=1)
        protocol = canonical_protocol(target, n)
        states = [random_density(dim, rng) for _ in range(n + 1)]
        separable = run_fixed(protocol, SeparableAttack(states))
        entangled = run_fixed(protocol, EntangledAttack(tensor_all(states)))
        gap = abs(separable.accept_prob - entangled.accept_prob)
        gap = max(gap, np.abs(separable.accepted_block() - entangled.accepted_block()).max())
        worst.record(gap, sample=i, n=n)
    return worst.result()


@_register("entangled_permutation_invariance")
def _check_entangled_permutation(config, rng):
    worst = _Tracker()
    for i in range(max(10, config.sample_count // 10)):
        dim = 2
        n = int(rng.integers(1, 4))
        registers = n + 1
        target = _random_target(dim, rng, rank=1)
        protocol = canonical_protocol(target, n)
        joint = random_density(dim**registers, rng)
        base = run_fixed(protocol, EntangledAttack(joint))
        perm = list(rng.permutation(registers))
        tensor_form = joint.matrix.reshape([dim] * (2 * registers))
        shuffled = tensor_form.transpose(perm + [p + registers for p in perm]).reshape(
            dim**registers, dim**registers
        )
        permuted = run_fixed(protocol, EntangledAttack(DensityOperator(shuffled)))
        gap = abs(base.accept_prob - permuted.accept_prob)
        gap = max(gap, np.abs(base.accepted_block() - permuted.accepted_block()).max())
        worst.record(gap, sample=i, n=n, perm=[int(p) for p in perm])
    return worst.result()


def entangled_attack_sweep(
    n_verify: int,
    dim: int,
    samples: int,
    seed: int = DEFAULT_SEED,
    tolerance: float = 1e-9,
    max_tensor_dim: int = 4096,
) -> CheckResult:
    """Random entangled attacks never beat the canonical 1/(N+1) ceiling.

    Samples mixtures of Haar-random joint pure states, runs the canonical
    protocol on them, and records the worst excess of the fidelity-based
    insecurity over 1/(N+1).
    """
    if dim ** (n_verify + 1) > max_tensor_dim:
        raise ValueError("joint space exceeds the tensor size cap")
    rng = np.random.default_rng([seed, n_verify, dim])
    target = _random_target(dim, rng, rank=1)
    protocol = canonical_protocol(target, n_verify)
    ceiling = 1.0 / (n_verify + 1.0)
    worst = _Tracker()
    for i in range(samples):
        joint = random_density(dim ** (n_verify + 1), rng)
        report = evaluate_standalone(protocol, EntangledAttack(joint))
        worst.record(report.eps_d - ceiling, sample=i, eps_d=report.eps_d, ceiling=ceiling)
    violation, witness = worst.result()
    return CheckResult(
        check_name=f"entangled_ceiling_n{n_verify}_d{dim}",
        passed=violation <= tolerance,
        worst_violation=violation,
        witness=witness,
        tolerance=tolerance,
    )


@_register("entangled_acceptance_ceiling")
def _check_entangled_ceiling(config, rng):
    worst = _Tracker()
    samples = max(20, config.sample_count // 5)
    for n in (1, 2, 3):
        sub = entangled_attack_sweep(
            n, 2, samples, seed=int(rng.integers(2**32)), tolerance=config.tolerance
        )
        worst.record(sub.worst_violation, n=n, **sub.witness)
    return worst.result()


@_register("standalone_attack_overlap")
def _check_standalone_attack(config, rng):
    worst = _Tracker()
    for i in range(max(20, config.sample_count // 5)):
        dim = _pair_dims(rng, 2, 5)
        n = int(rng.integers(1, 65))
        alpha = float(rng.uniform(0.05, 1.0))
        target = _random_target(dim, rng, rank=1)
        recipe = iid_standalone_attack(target, n, alpha)
        fid = fidelity(recipe.attack.state, target.rho)
        worst.record(abs(fid - (1.0 - alpha / n)), sample=i, dim=dim, n=n, alpha=alpha)
    return worst.result()


@_register("composable_attack_distance")
def _check_composable_attack(config, rng):
    worst = _Tracker()
    for i in range(max(20, config.sample_count // 5)):
        dim = _pair_dims(rng, 2, 5)
        rank = int(rng.integers(1, dim))
        n = int(rng.integers(1, 65))
        target = _random_target(dim, rng, rank=rank)
        recipe = iid_composable_attack(target, n)
        expected = target.top_eigenvalue * math.sqrt(1.0 - recipe.params["overlap_sq"])
        actual = trace_distance(recipe.attack.state, target.rho)
        worst.record(abs(actual - expected), sample=i, dim=dim, rank=rank, n=n)
    return worst.result()


@_register("composable_attack_copies")
def _check_composable_copies(config, rng):
    worst = _Tracker()
    for i in range(max(10, config.sample_count // 20)):
        dim = 3
        rank = int(rng.integers(1, 3))
        n_attack = int(rng.integers(1, 65))
        k = int(rng.integers(1, 5))
        target = _random_target(dim, rng, rank=rank)
        recipe = iid_composable_attack(target, n_attack)
        eta1 = target.top_eigenvalue
        overlap_sq = recipe.params["overlap_sq"]
        exact = exact_multicopy_distance(recipe.attack.state, target.rho, k)
        formula = bounds.iid_copies_distance(eta1, overlap_sq, k)
        jensen = bounds.iid_copies_distance_bound(eta1, overlap_sq, k)
        worst.record(
            max(abs(exact - formula), exact - jensen),
            sample=i,
            rank=rank,
            copies=k,
            n=n_attack,
        )
    return worst.result()


@_register("separable_floor_ceiling")
def _check_floor_ceiling(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count * 10):
        n = int(rng.integers(1, 7))
        f = rng.uniform(0.0, 1.0, n + 1)
        omega = random_probability_vector(n + 1, rng)
        value = bounds.separable_attack_floor(f, omega)
        worst.record(value - omega.max(), sample=i, n=n)
    return worst.result()


def _floor_grid_values(m: int, grid: np.ndarray, omega: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mesh = np.meshgrid(*([grid] * m), indexing="ij")
    points = np.stack([axis.ravel() for axis in mesh], axis=1)
    values = np.zeros(points.shape[0])
    for i in range(m):
        rest = np.prod(np.delete(points, i, axis=1), axis=1)
        values += omega[i] * (1.0 - points[:, i]) * (1.0 - np.sqrt(np.maximum(0.0, 1.0 - rest)))
    return points, values


@_register("separable_floor_grid_max")
def _check_floor_grid(config, rng):
    worst = _Tracker()
    grid = np.linspace(0.0, 1.0, 21)
    for n in (2, 3):
        omega = np.full(n + 1, 1.0 / (n + 1))
        points, values = _floor_grid_values(n + 1, grid, omega)
        idx = int(np.argmax(values))
        naive = np.ones(n + 1)
        naive[0] = 0.0
        v1 = abs(values[idx] - 1.0 / (n + 1))
        v2 = float(values.max() - omega.max())
        v3 = float(np.abs(points[idx] - naive).max())
        worst.record(max(v1, v2, v3), n=n, argmax=[float(x) for x in points[idx]])
    return worst.result()


@_register("reciprocal_sum_product")
def _check_reciprocal(config, rng):
    worst = _Tracker()
    for i in range(config.sample_count * 10):
        n = int(rng.integers(1, 7))
        f = rng.uniform(1e-6, 1.0, n + 1)
        lhs = float(np.sum(1.0 / f - 1.0))
        rhs = float(np.prod(1.0 / f))
        worst.record((lhs - rhs) / max(1.0, rhs), sample=i, n=n)
    return worst.result()


@_register("standalone_rate_peak")
def _check_rate_peak(config, rng):
    worst = _Tracker()
    alphas = np.linspace(0.0, 1.0, 10_001)
    rates = alphas * (1.0 - np.sqrt(alphas))
    idx = int(np.argmax(rates))
    for n in range(1, 101):
        grid_best = rates[idx] / n
        exact_peak = bounds.standalone_rate(n, 4.0 / 9.0)
        worst.record(grid_best - exact_peak, n=n, alpha_star=float(alphas[idx]))
    worst.record(abs(alphas[idx] - 4.0 / 9.0) - (alphas[1] - alphas[0]), check="argmax_spacing")
    return worst.result()


@_register("canonical_conversion")
def _check_conversion(config, rng):
    worst = _Tracker()
    for n in range(1, 201):
        kappa = 1.0 - math.sqrt(1.0 - 1.0 / (n + 1.0))
        converted = bounds.fidelity_floor_to_composable(kappa)
        expected = bounds.canonical_security_values(n)[1]
        worst.record(abs(converted - expected), n=n)
    return worst.result()


@_register("canonical_exact_values")
def _check_canonical_values(config, rng):
    worst = _Tracker()
    for dim in (2, 3):
        for n in (1, 2, 5, 8):
            target = _random_target(dim, rng, rank=1)
            protocol = canonical_protocol(target, n)
            recipe = naive_attack(protocol)
            expected = bounds.canonical_security_values(n)[0]
            sa = evaluate_standalone(protocol, recipe)
            co = evaluate_composable(protocol, recipe)
            violation = max(
                abs(sa.eps_d - expected), abs(co.eps_d - expected), sa.eps_h, co.eps_h
            )
            worst.record(violation, dim=dim, n=n)
    return worst.result()


@_register("certified_floor_vs_bound")
def _check_certified_floors(config, rng):
    worst = _Tracker()
    for n in range(1, 65):
        v1 = bounds.standalone_bound(n)[1] - bounds.standalone_attack_floor(n)
        worst.record(v1, n=n, definition="standalone")
        for eta1 in (1.0, 0.7):
            v2 = bounds.composable_bound(n, eta1) - bounds.composable_attack_floor(n, eta1)
            worst.record(v2, n=n, eta1=eta1, definition="composable")
    return worst.result()


@_register("iid_attack_closed_forms")
def _check_iid_closed_forms(config, rng):
    worst = _Tracker()
    target = _random_target(2, rng, rank=1)
    for n in (1, 2, 5, 9, 17, 33, 64):
        protocol = canonical_protocol(target, n)
        sa = evaluate_standalone(protocol, iid_standalone_attack(target, n))
        tau = 4.0 / (9.0 * n)
        expected_sa = (1.0 - tau) ** n * tau
        co = evaluate_composable(protocol, iid_composable_attack(target, n))
        overlap = 1.0 - 1.0 / (4.0 * n)
        expected_co = overlap**n * math.sqrt(1.0 - overlap)
        violation = max(abs(sa.eps_sum - expected_sa), abs(co.eps_sum - expected_co))
        worst.record(violation, n=n)
    return worst.result()


def available_checks() -> list[str]:
    return sorted(_CHECKS)


def run_check(name: str, config: OracleConfig = OracleConfig()) -> CheckResult:
    """Run one named check on a seed-derived substream."""
    if name not in _CHECKS:
        raise KeyError(f"unknown check {name!r}; see available_checks()")
    kind, fn = _CHECKS[name]
    rng = np.random.default_rng([config.seed, *name.encode()])
    violation, witness = fn(config, rng)
    tolerance = config.tolerance if kind == "algebraic" else config.grid_tolerance
    return CheckResult(
        check_name=name,
        passed=violation <= tolerance,
        worst_violation=violation,
        witness=witness,
        tolerance=tolerance,
    )


def run_checks(
    config: OracleConfig = OracleConfig(), names: Iterable[str] | None = None
) -> list[CheckResult]:
    """Run the full battery (or a subset) in name order."""
    selected = available_checks() if names is None else list(names)
    unknown = [n for n in selected if n not in _CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    return [run_check(name, config) for name in selected]


def inequality_sweep(
    check_name: str, samples: int | None = None, seed: int | None = None
) -> CheckResult:
    """Run one named inequality check, optionally overriding samples and seed."""
    base = OracleConfig()
    config = OracleConfig(
        seed=base.seed if seed is None else seed,
        sample_count=base.sample_count if samples is None else samples,
    )
    return run_check(check_name, config)
