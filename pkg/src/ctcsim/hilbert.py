"""Dense complex linear algebra over finite-dimensional Hilbert spaces.

Conventions shared by the whole package:

* Kets are one-dimensional complex ``numpy`` arrays; operators are square
  two-dimensional ones.  All storage is dense.
* Composite spaces put the chronology-respecting (CR) factor first and the
  chronology-violating (CV) factor second, so a composite basis index reads
  ``row = cr * dim_cv + cv``.
* Basis index 0 of a single channel is the vacuum level; clock levels occupy
  indices 1..N.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "DEFAULT_MAX_ENTRIES",
    "basis_state",
    "dagger",
    "projector",
    "tensor",
    "partial_trace",
    "trace_distance",
    "fidelity_pure",
    "unitarity_defect",
    "is_hermitian",
    "check_density",
    "random_density",
]

# Cap on the entry count of a tensor-product result (dense desk-scale guard).
DEFAULT_MAX_ENTRIES = 2**20


def basis_state(dim, index):
    """Return the computational basis ket ``|index>`` of dimension ``dim``."""
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dimension {dim}")
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1.0
    return vec


def dagger(op):
    """Conjugate transpose."""
    return np.asarray(op).conj().T


def projector(vec):
    """Rank-one projector ``|vec><vec|``."""
    vec = np.asarray(vec, dtype=complex)
    return np.outer(vec, vec.conj())


def tensor(a, b, max_entries=DEFAULT_MAX_ENTRIES):
    """Kronecker product of two kets or two operators, CR factor first.

    Index convention: the first operand owns the slow (leading) index, so
    ``tensor(basis_state(2, 0), basis_state(2, 1))`` is basis index 1 of the
    dimension-4 composite space.

    Raises ValueError if the result would exceed ``max_entries`` entries.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise ValueError(
            f"tensor expects two kets or two operators, got shapes {a.shape} and {b.shape}"
        )
    if a.size * b.size > max_entries:
        raise ValueError(
            f"tensor result would hold {a.size * b.size} entries, "
            f"exceeding the cap of {max_entries}"
        )
    return np.kron(a, b)


def partial_trace(op, keep, dims):
    """Trace a bipartite operator down to one factor.

    Args:
        op: square operator on the composite CR (x) CV space.
        keep: ``"cr"`` keeps the first factor (traces over CV), ``"cv"``
            keeps the second (traces over CR).
        dims: pair ``(dim_cr, dim_cv)``.

    The trace of the result equals the trace of the input.
    """
    dim_cr, dim_cv = dims
    op = np.asarray(op, dtype=complex)
    expected = dim_cr * dim_cv
    if op.shape != (expected, expected):
        raise ValueError(
            f"operator shape {op.shape} does not match dims {dim_cr}x{dim_cv}"
        )
    four = op.reshape(dim_cr, dim_cv, dim_cr, dim_cv)
    if keep == "cr":
        return np.einsum("abcb->ac", four)
    if keep == "cv":
        return np.einsum("abad->bd", four)
    raise ValueError(f"keep must be 'cr' or 'cv', got {keep!r}")


def trace_distance(a, b):
    """Trace distance ``(1/2)*||a - b||_1`` between two density operators.

    Computed as half the sum of singular values of the difference.  Symmetric,
    zero iff the operators coincide, and at most 1 for valid densities.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return 0.5 * np.linalg.svd(a - b, compute_uv=False).sum()


def fidelity_pure(a, b, norm_tol=1e-9):
    """Squared overlap ``|<a|b>|**2`` of two normalized kets.

    Invariant under a global phase on either argument.  Raises ValueError if
    either input norm deviates from 1 by more than ``norm_tol``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    for name, vec in (("a", a), ("b", b)):
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > norm_tol:
            raise ValueError(f"state {name} is not normalized (norm {norm})")
    return abs(np.vdot(a, b)) ** 2


def unitarity_defect(u):
    """Max-norm deviation of ``u`` from unitarity, ``max |u^dag u - 1|``."""
    u = np.asarray(u, dtype=complex)
    return np.abs(dagger(u) @ u - np.eye(u.shape[0])).max()


def is_hermitian(op, atol=1e-12):
    op = np.asarray(op)
    return bool(np.abs(op - dagger(op)).max() <= atol)


def check_density(rho, atol=1e-10, name="density operator"):
    """Validate Hermiticity, unit trace, and positivity of a density matrix.

    Returns the input unchanged so it can be used inline.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"{name} must be square, got shape {rho.shape}")
    if np.abs(rho - dagger(rho)).max() > atol:
        raise ValueError(f"{name} is not Hermitian within {atol}")
    if abs(np.trace(rho).real - 1.0) > atol:
        raise ValueError(f"{name} trace {np.trace(rho)} differs from 1")
    smallest = np.linalg.eigvalsh(0.5 * (rho + dagger(rho))).min()
    if smallest < -atol:
        raise ValueError(f"{name} has negative eigenvalue {smallest}")
    return rho


def random_density(dim, rng):
    """Random full-rank density matrix drawn from the Ginibre ensemble."""
    gin = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = gin @ dagger(gin)
    return rho / np.trace(rho).real
