"""Qudit clock states, their free evolution, and vacuum extensions.

The clock is an ``N``-level system with equally spaced energies
``E_n = e1 + (n - 1) * level_spacing`` for ``n = 1..N`` (units with hbar = 1).
Its canonical state weights every level equally, which makes the state evolve
into an orthogonal one after the orthogonalisation time

    t_perp = 2 * pi / (N * level_spacing).

Every state and operator here lives in an ``(N + 1)``-dimensional space whose
index 0 is a vacuum level of zero energy, representing the physical absence of
the clock.  Pure clock quantities keep amplitude 0 on the vacuum index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import unitarity_defect

__all__ = [
    "ClockSpec",
    "EvolvedClockLabel",
    "clock_state",
    "evolution",
    "vacuum_extend",
    "embed_clock_operator",
    "clock_overlap",
    "vacuum_clock",
    "evolved_clock",
]


@dataclass(frozen=True)
class ClockSpec:
    """Parameters of an equally spaced N-level clock.

    ``level_spacing`` defaults to ``2*pi/n_levels`` so that ``t_perp == 1``
    and delays can be read directly as multiples of the orthogonalisation
    time.  ``e1`` is the ground-level energy; it only contributes a global
    phase to clock evolution and defaults to 0.
    """

    n_levels: int
    e1: float = 0.0
    level_spacing: float | None = None

    def __post_init__(self):
        if int(self.n_levels) != self.n_levels or self.n_levels < 2:
            raise ValueError(f"clock needs an integer n_levels >= 2, got {self.n_levels}")
        object.__setattr__(self, "n_levels", int(self.n_levels))
        if self.level_spacing is None:
            object.__setattr__(self, "level_spacing", 2.0 * np.pi / self.n_levels)
        if self.level_spacing <= 0:
            raise ValueError(f"level_spacing must be positive, got {self.level_spacing}")

    @property
    def dim(self):
        """Dimension of the vacuum-extended space, N + 1."""
        return self.n_levels + 1

    @property
    def t_perp(self):
        """Orthogonalisation time 2*pi/(N * level_spacing)."""
        return 2.0 * np.pi / (self.n_levels * self.level_spacing)

    def energies(self):
        """Clock level energies ``E_1..E_N`` as an array of length N."""
        return self.e1 + self.level_spacing * np.arange(self.n_levels)


@dataclass(frozen=True)
class EvolvedClockLabel:
    """Label for the clock state after ``windings`` trips of duration ``delay``."""

    windings: int
    delay: float

    def __post_init__(self):
        if self.windings < 0:
            raise ValueError("windings must be a nonnegative integer")

    def state(self, spec):
        return evolved_clock(spec, self.windings * self.delay)


def clock_state(spec):
    """Equal-weight clock ket: amplitude ``1/sqrt(N)`` on levels 1..N, 0 on vacuum."""
    vec = np.zeros(spec.dim, dtype=complex)
    vec[1:] = 1.0 / np.sqrt(spec.n_levels)
    return vec


def evolved_clock(spec, t):
    """Clock ket freely evolved for time ``t``: amplitudes ``exp(-i E_n t)/sqrt(N)``."""
    vec = np.zeros(spec.dim, dtype=complex)
    vec[1:] = np.exp(-1j * spec.energies() * t) / np.sqrt(spec.n_levels)
    return vec


def evolution(spec, t):
    """Free-evolution unitary on the bare N-level clock subspace.

    Diagonal with entries ``exp(-i E_n t)``.  Powers compose exactly:
    ``evolution(spec, t) ** k == evolution(spec, k * t)``.
    """
    return np.diag(np.exp(-1j * spec.energies() * t))


def vacuum_extend(u, atol=1e-10):
    """Embed a clock-subspace unitary as ``diag(1, u)`` on the vacuum-extended space.

    The vacuum carries zero energy, so its entry is exactly 1.  Raises
    ValueError if ``u`` deviates from unitarity by more than ``atol``.
    """
    u = np.asarray(u, dtype=complex)
    defect = unitarity_defect(u)
    if defect > atol:
        raise ValueError(f"input is not unitary (defect {defect:.3e} > {atol:.1e})")
    n = u.shape[0]
    out = np.zeros((n + 1, n + 1), dtype=complex)
    out[0, 0] = 1.0
    out[1:, 1:] = u
    return out


def embed_clock_operator(m):
    """Embed a clock-subspace operator with a zero vacuum row and column.

    Unlike :func:`vacuum_extend` this leaves the vacuum entry at 0, which is
    what sums such as ``identity + rotation`` on the clock block require.
    """
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    out = np.zeros((n + 1, n + 1), dtype=complex)
    out[1:, 1:] = m
    return out


def clock_overlap(spec, dt):
    """Overlap ``<phi(t)|phi(t + dt)>`` of the clock with its evolved self.

    Closed form for the equally spaced spectrum:

        exp(-i e1 dt) / N * sum_n exp(-2j*pi*(n-1)/N * dt/t_perp)

    Independent of ``t``; equals ``trace(evolution(spec, dt)) / N``.  Vanishes
    at ``dt = k * t_perp`` for ``k = 1..N-1`` and returns to modulus 1 at
    ``dt = N * t_perp``.
    """
    return np.exp(-1j * spec.energies() * dt).sum() / spec.n_levels


def vacuum_clock(spec, omega):
    """Vacuum-weighted input ket ``sqrt(omega)|0> + sqrt(1-omega)|phi(0)>``.

    ``omega`` is the vacuum probability and must lie in [0, 1].  The result
    has unit norm.
    """
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must lie in [0, 1], got {omega}")
    vec = np.zeros(spec.dim, dtype=complex)
    vec[0] = np.sqrt(omega)
    vec[1:] = np.sqrt(1.0 - omega) / np.sqrt(spec.n_levels)
    return vec
