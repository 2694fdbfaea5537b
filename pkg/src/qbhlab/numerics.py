"""Dense real-symmetric eigensolver (cyclic Jacobi) and spectrum helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_SWEEPS = 100
REL_OFF_TOL = 1e-13


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in ascending order; ``vectors[:, k]`` belongs to ``values[k]``."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def n(self) -> int:
        return len(self.values)


def as_symmetric(a, *, exact: bool = True) -> np.ndarray:
    """Validate and return ``a`` as a float64 square symmetric array."""
    m = np.array(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        bad = np.argwhere(~np.isfinite(m))[0]
        raise ValueError(f"non-finite entry at {tuple(int(i) for i in bad)}")
    if exact and not np.array_equal(m, m.T):
        raise ValueError("matrix is not symmetric")
    return m


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off * off)))


def eigh(a, *, max_sweeps: int = MAX_SWEEPS, rel_tol: float = REL_OFF_TOL) -> EigenSystem:
    """Full eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps over all (p, q) pairs in row order until the off-diagonal Frobenius
    norm drops below ``rel_tol * ||A||_F``.

    Raises
    ------
    ValueError
        Non-finite or non-symmetric input.
    ConvergenceError
        Off-diagonal residual still above threshold after ``max_sweeps``.
    """
    a = as_symmetric(a).copy()
    n = a.shape[0]
    v = np.eye(n)
    frob = float(np.sqrt(np.sum(a * a)))
    target = rel_tol * frob
    # tiny rotations below this are skipped; they cannot move the result
    skip = np.finfo(float).tiny

    off = _off_norm(a)
    sweeps = 0
    while off > target:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps; "
                f"off-diagonal residual {off:.3e} (target {target:.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                app, aqq = a[p, p], a[q, q]
                tau = (aqq - app) / (2.0 * apq)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q]
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :]
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
        sweeps += 1
        off = _off_norm(a)

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    return EigenSystem(values=values[order], vectors=v[:, order])


def degeneracy_classes(values, tol: float) -> list[tuple[float, int]]:
    """Group ascending eigenvalues into (representative, multiplicity) clusters.

    A value joins the current cluster when it lies within ``tol`` of the
    cluster's first member.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if isinstance(values, EigenSystem):
        values = values.values
    classes: list[tuple[float, int]] = []
    for x in sorted(float(x) for x in values):
        if classes and x - classes[-1][0] <= tol:
            rep, mult = classes[-1]
            classes[-1] = (rep, mult + 1)
        else:
            classes.append((x, 1))
    return classes


def degeneracy_signature(values, tol: float = 1e-8) -> str:
    """Compact multiplicity string, e.g. ``"1-3-5"``."""
    return "-".join(str(m) for _, m in degeneracy_classes(values, tol))
