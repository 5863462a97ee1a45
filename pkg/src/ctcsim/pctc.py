"""Postselected-teleportation engine.

In this prescription the loop is summed out of the circuit entirely: the
input ket is acted on by the CV-traced operator

    W = tr_CV[U] = trace(R_vac) |0><0| + identity_clock + R(delay)

and renormalized.  W is not unitary, the evolution is nonlinear in the
input, and inputs annihilated by W are forbidden: every history interferes
destructively and the prescription assigns them no output at all.

The module also covers the constrained scenario in which the delay is a
whole number of clock revolutions and the ground energy is tuned so the
revolution phase is -1.  There W collapses to ``(1 - N)|0><0|``: nothing but
vacuum can traverse the circuit, and an entangled record of what was sent in
is wiped to vacuum as well.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .clock import (
    clock_overlap,
    embed_clock_operator,
    evolution,
    evolved_clock,
    vacuum_extend,
)
from .gates import CircuitSpec
from .hilbert import basis_state

__all__ = [
    "ForbiddenInitialData",
    "ConstraintParams",
    "BipartiteState",
    "PctcObservables",
    "RecordExperimentResult",
    "reduced_operator",
    "pctc_apply",
    "pctc_normalization",
    "pctc_observables",
    "record_experiment",
]

# Post-selection norms below this are treated as exact destructive interference.
ZERO_NORM_TOL = 1e-12


class ForbiddenInitialData(RuntimeError):
    """The reduced operator annihilates the input: no history survives."""

    def __init__(self, message, squared_norm):
        super().__init__(message)
        self.squared_norm = squared_norm


@dataclass(frozen=True)
class ConstraintParams:
    """Integers selecting the evolution-suppressing circuit configuration.

    ``p >= 1`` makes the delay ``p * N * t_perp`` (``p`` full revolutions of
    the clock); ``q >= 0`` picks a ground energy ``pi * (1 + 2q) / delay``
    so each revolution contributes a global phase of -1.
    """

    p: int
    q: int = 0

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"p must be a positive integer, got {self.p}")
        if int(self.q) != self.q or self.q < 0:
            raise ValueError(f"q must be a nonnegative integer, got {self.q}")

    def delay(self, spec):
        return self.p * spec.n_levels * spec.t_perp

    def ground_energy(self, spec):
        return np.pi * (1 + 2 * self.q) / self.delay(spec)

    def circuit(self, spec):
        """Constrained circuit: induced delay plus the retuned clock."""
        retuned = replace(spec, e1=self.ground_energy(spec))
        return CircuitSpec(clock=retuned, delay=self.delay(spec))


def reduced_operator(circuit):
    """CV-traced circuit operator W on the vacuum-extended space.

    Closed form: ``trace(R_vac(delay))`` on the vacuum entry plus
    ``identity + R(delay)`` on the clock block.  Nonzero inbound/outbound
    times multiply clock rotations on the outside.  Generally non-unitary.
    """
    spec = circuit.clock
    rot = evolution(spec, circuit.delay)
    w = embed_clock_operator(np.eye(spec.n_levels) + rot)
    w[0, 0] = 1.0 + np.trace(rot)
    if circuit.t_in != 0.0 or circuit.t_out != 0.0:
        w = (
            vacuum_extend(evolution(spec, circuit.t_out))
            @ w
            @ vacuum_extend(evolution(spec, circuit.t_in))
        )
    return w


def pctc_apply(w, psi, zero_tol=ZERO_NORM_TOL):
    """Apply the reduced operator to a ket and renormalize.

    The global phase of the result is fixed by making its first
    non-negligible amplitude real and positive.  Raises
    :class:`ForbiddenInitialData` when ``||w psi||**2`` falls below
    ``zero_tol``.
    """
    psi = np.asarray(psi, dtype=complex)
    norm_in = np.linalg.norm(psi)
    if abs(norm_in - 1.0) > 1e-9:
        raise ValueError(f"input ket must be normalized, got norm {norm_in}")
    out = np.asarray(w, dtype=complex) @ psi
    squared = float(np.vdot(out, out).real)
    if squared < zero_tol:
        raise ForbiddenInitialData(
            f"post-selected norm {squared:.3e} vanishes: the input cannot "
            "traverse this circuit",
            squared_norm=squared,
        )
    out = out / np.sqrt(squared)
    return _fix_global_phase(out)


def pctc_normalization(circuit, omega):
    """Squared post-selection norm of the standard vacuum-weighted input.

    Closed form:

        omega * |trace(R_vac)|**2
        + (1 - omega) * (2 + 2 * Re trace(R) / N).
    """
    spec = circuit.clock
    _require_plain_circuit(circuit)
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must lie in [0, 1], got {omega}")
    tr_rot = np.exp(-1j * spec.energies() * circuit.delay).sum()
    vac_term = abs(1.0 + tr_rot) ** 2
    clock_term = 2.0 + 2.0 * tr_rot.real / spec.n_levels
    return float(omega * vac_term + (1.0 - omega) * clock_term)


@dataclass(frozen=True)
class PctcObservables:
    """Level populations and clock probabilities of the renormalized output."""

    populations: np.ndarray
    p_unevolved: float
    p_orthogonal: float


def pctc_observables(circuit, omega):
    """Closed-form populations and clock probabilities of the output state.

    Populations: the vacuum keeps ``omega |trace(R_vac)|**2`` and clock level
    ``n`` keeps ``(1 - omega) |1 + exp(-i E_n delay)|**2 / N``, all divided
    by the post-selection norm so they sum to 1.  The clock probabilities are
    squared overlaps of the output with the unevolved and the first
    orthogonal clock.  Unlike the Deutsch output these depend on the delay.

    Raises :class:`ForbiddenInitialData` when the post-selection norm
    vanishes.
    """
    spec = circuit.clock
    _require_plain_circuit(circuit)
    norm = pctc_normalization(circuit, omega)
    if norm < ZERO_NORM_TOL:
        raise ForbiddenInitialData(
            f"post-selected norm {norm:.3e} vanishes for omega={omega}",
            squared_norm=norm,
        )
    phases = np.exp(-1j * spec.energies() * circuit.delay)
    populations = np.empty(spec.dim)
    populations[0] = omega * abs(1.0 + phases.sum()) ** 2
    populations[1:] = (1.0 - omega) * np.abs(1.0 + phases) ** 2 / spec.n_levels
    populations /= norm
    p_unevolved = (1.0 - omega) * abs(1.0 + clock_overlap(spec, circuit.delay)) ** 2 / norm
    p_orthogonal = (
        (1.0 - omega)
        * abs(clock_overlap(spec, circuit.delay - spec.t_perp)) ** 2
        / norm
    )
    return PctcObservables(
        populations=populations,
        p_unevolved=float(p_unevolved),
        p_orthogonal=float(p_orthogonal),
    )


@dataclass(frozen=True)
class BipartiteState:
    """Pure state of record (x) CR, stored as its amplitude matrix."""

    amplitudes: np.ndarray

    @property
    def record_dim(self):
        return self.amplitudes.shape[0]

    @property
    def cr_dim(self):
        return self.amplitudes.shape[1]

    def schmidt_values(self):
        return np.linalg.svd(self.amplitudes, compute_uv=False)

    def schmidt_rank(self, tol=1e-10):
        """Number of Schmidt coefficients above ``tol``; 1 means a product state."""
        return int(np.sum(self.schmidt_values() > tol))

    def ket(self):
        """Flattened ket with the record factor first."""
        return self.amplitudes.reshape(-1)


@dataclass(frozen=True)
class RecordExperimentResult:
    output: BipartiteState
    schmidt_rank: int
    record_vacuum_prob: float


def record_experiment(circuit, constrained=None, omega=0.5):
    """Send half of an entangled record through the circuit.

    The input pairs a record copy with the CR channel,
    ``sqrt(omega)|0>|0> + sqrt(1-omega)|phi(0)>|phi(0)>``, and the circuit
    operator acts on the CR factor alone.  Generically the output stays
    entangled, so the record faithfully reports whether a clock was sent.
    Under the constrained configuration the output collapses to
    ``|0>|0>``: the record itself is rewritten to show that no clock was
    ever prepared.

    Args:
        circuit: base circuit; its clock sets ``N`` and the level spacing.
        constrained: optional :class:`ConstraintParams`; when given, the
            induced delay and ground energy replace the base circuit's.
        omega: vacuum weight of the record-CR input, in [0, 1].
    """
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must lie in [0, 1], got {omega}")
    if constrained is not None:
        circuit = constrained.circuit(circuit.clock)
    spec = circuit.clock
    w = reduced_operator(circuit)
    vac = basis_state(spec.dim, 0)
    phi = evolved_clock(spec, 0.0)
    amps = np.sqrt(omega) * np.outer(vac, vac) + np.sqrt(1.0 - omega) * np.outer(phi, phi)
    out = amps @ w.T
    squared = float(np.sum(np.abs(out) ** 2))
    if squared < ZERO_NORM_TOL:
        raise ForbiddenInitialData(
            f"post-selected norm {squared:.3e} vanishes for the record input",
            squared_norm=squared,
        )
    out = _fix_global_phase(out.reshape(-1) / np.sqrt(squared)).reshape(out.shape)
    state = BipartiteState(amplitudes=out)
    record_vacuum_prob = float(np.sum(np.abs(out[0, :]) ** 2))
    return RecordExperimentResult(
        output=state,
        schmidt_rank=state.schmidt_rank(),
        record_vacuum_prob=record_vacuum_prob,
    )


def _fix_global_phase(vec, tol=1e-12):
    """Rotate a ket so its first non-negligible amplitude is real positive."""
    for amp in vec:
        if abs(amp) > tol:
            return vec * (abs(amp) / amp)
    return vec


def _require_plain_circuit(circuit):
    if circuit.t_in != 0.0 or circuit.t_out != 0.0:
        raise ValueError(
            "closed forms are derived for t_in == t_out == 0; "
            "use reduced_operator plus pctc_apply for nonzero times"
        )
