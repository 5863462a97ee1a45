"""Deutsch-model engine: the self-consistency map on the looping channel.

In the Deutsch prescription the state ``theta`` trapped on the closed loop
must be a fixed point of the map

    theta  ->  tr_CR[ U (sigma (x) theta) U^dag ]

for the given CR input ``sigma``; the observable output is then the CR
marginal of the same evolution.  For the vacuum-weighted clock input the
fixed points form a one-parameter family: with probability ``g`` the loop is
empty, otherwise it traps a geometric spectrum of clocks wound ``k`` times by
the loop delay, each winding weighted by ``omega**k``.

This module provides the map itself, two independent fixed-point solvers
(iteration in the equivalent-circuit picture and eigen-analysis of the
vectorized map), the analytic solution family, and the closed-form
observables derived from it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .clock import clock_overlap, evolved_clock, vacuum_clock
from .gates import CircuitSpec, circuit_unitary
from .hilbert import (
    basis_state,
    check_density,
    dagger,
    partial_trace,
    projector,
    tensor,
    trace_distance,
)

__all__ = [
    "ConvergenceError",
    "FixedPointQuery",
    "EcpResult",
    "DctcClockProbabilities",
    "FixedPointFamily",
    "cv_map",
    "output_map",
    "ecp_solve",
    "analytic_cv",
    "analytic_output",
    "dctc_clock_probabilities",
    "cv_superoperator",
    "fixed_space",
    "is_degenerate_delay",
]


class ConvergenceError(RuntimeError):
    """Fixed-point iteration did not reach the requested tolerance."""

    def __init__(self, message, residual, iterations):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class FixedPointQuery:
    """Parameters selecting one member of the Deutsch fixed-point family.

    ``omega`` is the vacuum weight of the CR input and ``g`` the vacuum
    population of the trapped state; ``g`` defaults to ``1/(N + 1)``, the
    uniform weight over all levels of the extended space.  ``seed_mixture``
    is a diagonal clock-subspace density: it seeds the iterative solver and,
    at ``omega == 1``, is the clock part of the (otherwise unconstrained)
    trapped state.  It defaults to the maximally mixed clock.
    ``truncation_eps`` bounds the discarded tail of the winding spectrum.
    """

    circuit: CircuitSpec
    omega: float
    g: float | None = None
    truncation_eps: float = 1e-12
    seed_mixture: np.ndarray | None = None

    def __post_init__(self):
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError(f"omega must lie in [0, 1], got {self.omega}")
        if self.g is None:
            object.__setattr__(self, "g", 1.0 / self.circuit.clock.dim)
        if not 0.0 <= self.g <= 1.0:
            raise ValueError(f"g must lie in [0, 1], got {self.g}")
        if self.truncation_eps <= 0:
            raise ValueError("truncation_eps must be positive")
        n = self.circuit.clock.n_levels
        if self.seed_mixture is None:
            object.__setattr__(self, "seed_mixture", np.eye(n) / n)
        mix = np.asarray(self.seed_mixture, dtype=complex)
        if mix.shape != (n, n):
            raise ValueError(f"seed_mixture must be {n}x{n}, got {mix.shape}")
        if np.abs(mix - np.diag(np.diagonal(mix))).max() > 1e-12:
            raise ValueError("seed_mixture must be diagonal in the energy basis")
        if abs(np.trace(mix).real - 1.0) > 1e-10:
            raise ValueError("seed_mixture must have unit trace")
        if np.diagonal(mix).real.min() < -1e-12:
            raise ValueError("seed_mixture must be positive semidefinite")
        object.__setattr__(self, "seed_mixture", mix)

    def sigma(self):
        """CR input density for this query."""
        return projector(vacuum_clock(self.circuit.clock, self.omega))

    def seed_state(self):
        """Iteration seed ``g |0><0| + (1 - g) seed_mixture`` on the extended space."""
        d = self.circuit.clock.dim
        seed = np.zeros((d, d), dtype=complex)
        seed[0, 0] = self.g
        seed[1:, 1:] = (1.0 - self.g) * self.seed_mixture
        return seed


def cv_map(circuit, sigma, theta):
    """One trip of the loop state: ``tr_CR[U (sigma (x) theta) U^dag]``.

    Completely positive and trace preserving in ``theta``.  The vacuum
    population of ``theta`` is conserved exactly: an empty loop stays empty
    because nothing can knock the incoming system onto it.
    """
    d = circuit.clock.dim
    sigma = check_density(sigma, name="sigma")
    theta = check_density(theta, name="theta")
    if sigma.shape != (d, d) or theta.shape != (d, d):
        raise ValueError(f"inputs must be {d}x{d} for this circuit")
    u = circuit_unitary(circuit)
    big = u @ tensor(sigma, theta) @ dagger(u)
    return partial_trace(big, "cv", (d, d))


def output_map(circuit, sigma, theta):
    """Observable CR output ``tr_CV[U (sigma (x) theta) U^dag]`` for trapped ``theta``."""
    d = circuit.clock.dim
    sigma = check_density(sigma, name="sigma")
    theta = check_density(theta, name="theta")
    if sigma.shape != (d, d) or theta.shape != (d, d):
        raise ValueError(f"inputs must be {d}x{d} for this circuit")
    u = circuit_unitary(circuit)
    big = u @ tensor(sigma, theta) @ dagger(u)
    return partial_trace(big, "cr", (d, d))


def ecp_solve(query, tol=1e-10, max_iter=10_000):
    """Find the trapped state by iterating the loop map from the seed state.

    Equivalent-circuit picture: send the seed through the circuit over and
    over until successive iterates agree to ``tol`` in trace distance.  The
    successive-iterate distance is exactly the fixed-point residual of the
    current state, and the non-conserved sector contracts at rate ``omega``,
    so the distance to the true fixed point is at most ``tol / (1 - omega)``.

    Returns an :class:`EcpResult`; raises :class:`ConvergenceError` after
    ``max_iter`` trips.  The vacuum population of every iterate equals the
    seed's ``g``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if 0.0 < query.omega < 1.0:
        predicted = math.ceil(math.log(tol) / math.log(query.omega))
        if predicted > max_iter:
            warnings.warn(
                f"omega={query.omega} contracts slowly: ~{predicted} iterations "
                f"predicted but max_iter={max_iter}",
                stacklevel=2,
            )
    d = query.circuit.clock.dim
    u = circuit_unitary(query.circuit)
    sigma = query.sigma()
    theta = query.seed_state()
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        nxt = partial_trace(u @ tensor(sigma, theta) @ dagger(u), "cv", (d, d))
        residual = trace_distance(nxt, theta)
        theta = nxt
        if residual < tol:
            return EcpResult(state=theta, iterations=iteration, residual=residual)
    raise ConvergenceError(
        f"no fixed point within {max_iter} iterations (residual {residual:.3e})",
        residual=residual,
        iterations=max_iter,
    )


@dataclass(frozen=True)
class EcpResult:
    """Converged trapped state with the trip count and final residual."""

    state: np.ndarray
    iterations: int
    residual: float


def winding_weights(omega, g, truncation_eps):
    """Weights of the trapped winding spectrum, truncated and renormalized.

    Winding ``k >= 1`` carries weight proportional to ``omega**k``.  The
    series is cut at ``K = ceil(ln(eps)/ln(omega))`` so the discarded tail is
    below ``eps``, then the kept weights are rescaled to sum to ``1 - g``
    exactly.  At ``omega == 0`` only the single winding survives.
    """
    if omega == 0.0:
        return np.array([1.0 - g])
    if omega >= 1.0:
        raise ValueError("winding weights exist only for omega < 1")
    cutoff = max(1, math.ceil(math.log(truncation_eps) / math.log(omega)))
    weights = (1.0 - omega) * omega ** np.arange(cutoff)
    return (1.0 - g) * weights / weights.sum()


def analytic_cv(query):
    """Closed-form trapped state for the query.

    For ``omega < 1``: ``g |0><0|`` plus the geometric spectrum of wound
    clocks, one projector per winding of the loop delay.  For ``omega == 1``
    the loop never interacts with the input and any classical clock mixture
    is trapped; the query's ``seed_mixture`` fills that role.
    """
    _require_plain_circuit(query.circuit)
    spec = query.circuit.clock
    d = spec.dim
    theta = np.zeros((d, d), dtype=complex)
    theta[0, 0] = query.g
    if query.omega == 1.0:
        theta[1:, 1:] = (1.0 - query.g) * query.seed_mixture
        return theta
    weights = winding_weights(query.omega, query.g, query.truncation_eps)
    for k, weight in enumerate(weights, start=1):
        theta += weight * projector(evolved_clock(spec, k * query.circuit.delay))
    return theta


def analytic_output(query):
    """Closed-form CR output for the query's fixed point.

    With probability ``g`` the loop is empty and the input passes through
    untouched; each trapped winding otherwise swaps out, contributing its
    projector together with vacuum-clock coherences weighted by the overlap
    of the unevolved clock with that winding.  At ``omega == 1`` the input is
    pure vacuum and passes through regardless of the trapped state.
    """
    _require_plain_circuit(query.circuit)
    spec = query.circuit.clock
    d = spec.dim
    if query.omega == 1.0:
        return projector(basis_state(d, 0))
    vac = basis_state(d, 0)
    out = query.g * projector(vacuum_clock(spec, query.omega))
    weights = winding_weights(query.omega, query.g, query.truncation_eps)
    cross = np.sqrt(query.omega * (1.0 - query.omega))
    for k, weight in enumerate(weights, start=1):
        wound = evolved_clock(spec, k * query.circuit.delay)
        overlap = clock_overlap(spec, k * query.circuit.delay)
        block = query.omega * projector(vac) + (1.0 - query.omega) * projector(wound)
        block += cross * overlap * np.outer(vac, wound.conj())
        block += cross * np.conj(overlap) * np.outer(wound, vac.conj())
        out += weight * block
    return out


@dataclass(frozen=True)
class DctcClockProbabilities:
    """Probabilities of the unevolved and the first orthogonal clock.

    ``cv_*`` refer to the trapped state, ``out_*`` to the CR output.  The
    exact linear relations are ``out_unevolved = (1 - omega) * (g +
    cv_unevolved)`` and ``out_orthogonal = (1 - omega) * cv_orthogonal``: the
    pass-through branch contributes its clock content with weight
    ``g * (1 - omega)``, and every swapped-out winding is damped by the
    clock weight ``1 - omega`` of the input.
    """

    cv_unevolved: float
    cv_orthogonal: float
    out_unevolved: float
    out_orthogonal: float


def dctc_clock_probabilities(query):
    """Closed-form clock probabilities for the trapped state and the output.

    Each series term is the squared modulus of a clock overlap: winding ``k``
    overlaps the unevolved clock as ``overlap(k * delay)`` and the orthogonal
    clock as ``overlap(k * delay - t_perp)``.
    """
    _require_plain_circuit(query.circuit)
    spec = query.circuit.clock
    if query.omega == 1.0:
        # Any diagonal clock mixture meets every clock state with weight 1/N;
        # the vacuous input leaves the output clock-free.
        clock_weight = (1.0 - query.g) / spec.n_levels
        return DctcClockProbabilities(
            cv_unevolved=clock_weight,
            cv_orthogonal=clock_weight,
            out_unevolved=0.0,
            out_orthogonal=0.0,
        )
    weights = winding_weights(query.omega, query.g, query.truncation_eps)
    delay = query.circuit.delay
    t_perp = spec.t_perp
    cv_unevolved = 0.0
    cv_orthogonal = 0.0
    for k, weight in enumerate(weights, start=1):
        cv_unevolved += weight * abs(clock_overlap(spec, k * delay)) ** 2
        cv_orthogonal += weight * abs(clock_overlap(spec, k * delay - t_perp)) ** 2
    return DctcClockProbabilities(
        cv_unevolved=float(cv_unevolved),
        cv_orthogonal=float(cv_orthogonal),
        out_unevolved=float((1.0 - query.omega) * (query.g + cv_unevolved)),
        out_orthogonal=float((1.0 - query.omega) * cv_orthogonal),
    )


def cv_superoperator(circuit, sigma):
    """Matrix of the loop map in the row-major vectorization ``vec(X)[i*d+j] = X[i,j]``.

    Built from the Kraus decomposition induced by the CR input: for each CR
    basis outcome ``b`` and each eigenvector ``a`` of ``sigma``,
    ``K = sqrt(p_a) <b|U|a>`` acts on the CV factor, and the superoperator is
    ``sum K (x) conj(K)``.
    """
    d = circuit.clock.dim
    sigma = check_density(sigma, name="sigma")
    if sigma.shape != (d, d):
        raise ValueError(f"sigma must be {d}x{d} for this circuit")
    u4 = circuit_unitary(circuit).reshape(d, d, d, d)
    probs, vecs = np.linalg.eigh(sigma)
    mat = np.zeros((d * d, d * d), dtype=complex)
    for prob, vec in zip(probs, vecs.T):
        if prob < 1e-14:
            continue
        for b in range(d):
            kraus = np.sqrt(prob) * np.einsum("vaw,a->vw", u4[b], vec)
            mat += np.kron(kraus, kraus.conj())
    return mat


@dataclass(frozen=True)
class FixedPointFamily:
    """Affine family of trapped states fixed by the loop map.

    ``reference`` is one valid fixed density (the member closest to the
    maximally mixed state); adding any real combination of the traceless
    Hermitian ``directions`` stays inside the fixed set.  ``dimension`` is
    the affine dimension, i.e. ``len(directions)``.
    """

    dimension: int
    directions: list = field(default_factory=list)
    reference: np.ndarray | None = None
    degenerate_delay: bool = False


def is_degenerate_delay(circuit, atol=1e-9):
    """True when the delay is an integer multiple of ``N * t_perp``.

    At such delays every winding returns the clock to its starting ray, the
    winding spectrum collapses, and the fixed-point family enlarges to admit
    trapped vacuum-clock coherence.
    """
    cycle = circuit.clock.n_levels * circuit.clock.t_perp
    frac = (circuit.delay / cycle) % 1.0
    return min(frac, 1.0 - frac) < atol / cycle


def fixed_space(circuit, sigma, eig_tol=1e-9, residual_tol=1e-8):
    """Characterize every fixed point of the loop map for the given input.

    Vectorizes the map, extracts the eigenvalue-1 eigenspace, and intersects
    it with the Hermitian unit-trace slice.  The returned reference point and
    all direction-displaced members are checked against ``residual_tol``; a
    failure raises RuntimeError since it indicates an ill-conditioned
    eigen-decomposition.
    """
    d = circuit.clock.dim
    mat = cv_superoperator(circuit, sigma)
    eigvals, eigvecs = np.linalg.eig(mat)
    fixed = [
        eigvecs[:, idx].reshape(d, d)
        for idx in range(eigvals.size)
        if abs(eigvals[idx] - 1.0) <= eig_tol
    ]
    if not fixed:
        raise RuntimeError("eigen-analysis found no fixed point; the map should have one")

    # The fixed subspace is closed under the adjoint, so its Hermitian part
    # spans the same dimension over the reals.
    candidates = []
    for v in fixed:
        candidates.append(0.5 * (v + dagger(v)))
        candidates.append(0.5j * (v - dagger(v)))
    basis = _orthonormal_hermitian_basis(candidates, d)
    if len(basis) != len(fixed):
        raise RuntimeError(
            f"Hermitian span dimension {len(basis)} disagrees with "
            f"eigenspace dimension {len(fixed)}"
        )

    traces = np.array([np.trace(b).real for b in basis])
    # Reference: orthogonal projection of the maximally mixed state onto the
    # trace-1 slice of the fixed subspace.
    coords = np.array([np.trace(dagger(b) @ (np.eye(d) / d)).real for b in basis])
    coords += (1.0 - traces @ coords) / (traces @ traces) * traces
    reference = sum(c * b for c, b in zip(coords, basis))
    reference = 0.5 * (reference + dagger(reference))

    directions = _traceless_combinations(basis, traces)

    for name, member in [("reference", reference)] + [
        (f"direction {idx}", direction) for idx, direction in enumerate(directions)
    ]:
        mapped = (mat @ member.reshape(-1)).reshape(d, d)
        defect = np.abs(mapped - member).max()
        if defect > residual_tol:
            raise RuntimeError(
                f"fixed-point residual of {name} is {defect:.3e} > {residual_tol:.1e}"
            )

    return FixedPointFamily(
        dimension=len(directions),
        directions=directions,
        reference=reference,
        degenerate_delay=is_degenerate_delay(circuit),
    )


def _orthonormal_hermitian_basis(candidates, d, cutoff=1e-8):
    """Orthonormal Hermitian basis of the real span of ``candidates``."""
    rows = np.array([np.concatenate([c.real.ravel(), c.imag.ravel()]) for c in candidates])
    _, svals, vt = np.linalg.svd(rows, full_matrices=False)
    rank = int(np.sum(svals > cutoff * svals[0]))
    basis = []
    for row in vt[:rank]:
        mat = row[: d * d].reshape(d, d) + 1j * row[d * d :].reshape(d, d)
        basis.append(0.5 * (mat + dagger(mat)))
    return basis


def _traceless_combinations(basis, traces):
    """Orthonormal traceless directions inside span(basis)."""
    if len(basis) <= 1:
        return []
    _, _, vt = np.linalg.svd(traces.reshape(1, -1))
    null_rows = vt[1:]
    return [sum(c * b for c, b in zip(row, basis)) for row in null_rows]


def _require_plain_circuit(circuit):
    if circuit.t_in != 0.0 or circuit.t_out != 0.0:
        raise ValueError(
            "closed forms are derived for t_in == t_out == 0; "
            "use the numeric maps for nonzero inbound/outbound times"
        )
