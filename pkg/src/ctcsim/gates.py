"""SWAP gates and the full circuit unitary of the vacuum-extended clock model.

The circuit couples a chronology-respecting (CR) channel to a
chronology-violating (CV) channel of the same ``N + 1`` dimension.  A
collision is a complete exchange, so the interaction is a SWAP between the
clock subspaces; the vacuum level is excluded from swapping because vacuum
and clock cannot collide.  After the exchange the CV channel free-evolves by
the loop delay.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clock import ClockSpec, evolution, vacuum_extend
from .hilbert import tensor

__all__ = ["CircuitSpec", "swap", "vacuum_swap", "circuit_unitary"]


@dataclass(frozen=True)
class CircuitSpec:
    """Clock parameters plus the loop delay and optional inbound/outbound times.

    ``delay`` is the proper time spent on the closed loop.  ``t_in`` and
    ``t_out`` are free-evolution times on the way in and out of the
    interaction region; every shipped closed form assumes they are zero, and
    nonzero values are applied as extra clock rotations on the CR channel.
    """

    clock: ClockSpec
    delay: float
    t_in: float = 0.0
    t_out: float = 0.0


def swap(n_levels):
    """SWAP on two bare N-level clock registers: ``S|i,j> = |j,i>``, ``S**2 = 1``."""
    if n_levels < 2:
        raise ValueError(f"n_levels must be >= 2, got {n_levels}")
    n = n_levels
    s = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            s[j * n + i, i * n + j] = 1.0
    return s


def vacuum_swap(n_levels):
    """SWAP on two vacuum-extended registers that leaves vacuum levels in place.

    Acts as the identity whenever either factor is the vacuum and exchanges
    clock levels otherwise.  A permutation, hence unitary, and an involution.
    """
    if n_levels < 2:
        raise ValueError(f"n_levels must be >= 2, got {n_levels}")
    d = n_levels + 1
    s = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            if a == 0 or b == 0:
                out_a, out_b = a, b
            else:
                out_a, out_b = b, a
            s[out_a * d + out_b, a * d + b] = 1.0
    return s


def circuit_unitary(spec):
    """Full circuit unitary on CR (x) CV.

    The vacuum-excluding SWAP acts first, then the CV side free-evolves by
    the loop delay.  Nonzero ``t_in``/``t_out`` wrap the product in clock
    rotations on the CR channel only.
    """
    n = spec.clock.n_levels
    d = n + 1
    ident = np.eye(d, dtype=complex)
    u = tensor(ident, vacuum_extend(evolution(spec.clock, spec.delay))) @ vacuum_swap(n)
    if spec.t_in != 0.0:
        u = u @ tensor(vacuum_extend(evolution(spec.clock, spec.t_in)), ident)
    if spec.t_out != 0.0:
        u = tensor(vacuum_extend(evolution(spec.clock, spec.t_out)), ident) @ u
    return u
