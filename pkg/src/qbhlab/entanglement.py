"""Single-site reduced density matrices and the entanglement measures built on them.

All logarithms are base 2, so entropies are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .effective import QbhParams, TwoSiteState, analytic_spectrum
from .numerics import eigh

NORM_TOL = 1e-9
CLIP = 1e-12

_R3 = 1.0 / math.sqrt(3.0)
_R2 = 1.0 / math.sqrt(2.0)

B3_SINGLET = TwoSiteState.from_terms({(1, -1): _R3, (-1, 1): _R3, (0, 0): -_R3})
B3_TRIPLET = TwoSiteState.from_terms({(1, -1): _R3, (-1, 1): _R3, (0, 0): _R3})
B2_TRIPLET = TwoSiteState.from_terms({(1, -1): _R2, (-1, 1): _R2})
QUBIT_SINGLET_UP = TwoSiteState.from_terms({(0, 1): _R2, (1, 0): -_R2})
QUBIT_SINGLET_DOWN = TwoSiteState.from_terms({(0, -1): _R2, (-1, 0): -_R2})


@dataclass(frozen=True)
class DensityMatrix3:
    entries: np.ndarray
    eta: np.ndarray


class Fidelities(NamedTuple):
    f_singlet: float
    f_triplet: float


class ProductProbabilities(NamedTuple):
    p_plus: float   # |<-1, +1|G>|^2
    p_minus: float  # |<+1, -1|G>|^2
    p0: float       # |<0, 0|G>|^2

    @property
    def ppm(self) -> float:
        return 0.5 * (self.p_plus + self.p_minus)


def _check_norm(state: TwoSiteState) -> None:
    if abs(state.norm - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalized (norm {state.norm:.12g})")


def _density(entries: np.ndarray) -> DensityMatrix3:
    entries = np.triu(entries) + np.triu(entries, 1).T
    return DensityMatrix3(entries=entries, eta=eigh(entries).values)


def reduce_left(state: TwoSiteState) -> DensityMatrix3:
    """Trace out the right well: rho[s, s'] = sum_t c[s, t] c[s', t]."""
    _check_norm(state)
    c = state.matrix
    return _density(c @ c.T)


def reduce_right(state: TwoSiteState) -> DensityMatrix3:
    _check_norm(state)
    c = state.matrix
    return _density(c.T @ c)


def _clipped(eta) -> np.ndarray:
    eta = np.asarray(eta, dtype=float)
    if np.any(eta < -CLIP):
        raise ValueError(f"density matrix has a negative eigenvalue {eta.min():.3e}")
    return np.where(eta < 0.0, 0.0, eta)


def _eigenvalues(rho) -> np.ndarray:
    return rho.eta if isinstance(rho, DensityMatrix3) else np.asarray(rho, dtype=float)


def entropy(rho) -> float:
    """Von Neumann entropy -sum eta log2 eta, with 0 log 0 = 0.

    Accepts a ``DensityMatrix3`` or a bare sequence of eigenvalues.
    """
    eta = _clipped(_eigenvalues(rho))
    nz = eta[eta > 0.0]
    return float(max(0.0, -np.sum(nz * np.log2(nz))))


def orbital_number(rho) -> float:
    """Effective number of occupied single-site orbitals, 1 / sum eta^2."""
    eta = _clipped(_eigenvalues(rho))
    return float(1.0 / np.sum(eta * eta))


def fidelities(state: TwoSiteState) -> Fidelities:
    _check_norm(state)
    a = state.amplitudes
    return Fidelities(
        f_singlet=float(np.dot(B3_SINGLET.amplitudes, a) ** 2),
        f_triplet=float(np.dot(B3_TRIPLET.amplitudes, a) ** 2),
    )


def product_probabilities(state: TwoSiteState) -> ProductProbabilities:
    _check_norm(state)
    return ProductProbabilities(
        p_plus=state.amplitude(-1, 1) ** 2,
        p_minus=state.amplitude(1, -1) ** 2,
        p0=state.amplitude(0, 0) ** 2,
    )


def analytic_entanglement(p: QbhParams) -> tuple[float, float]:
    """Closed-form (entropy, orbital number) of the S^z=0 ground state ||0;->>.

    Uses E = E_{0;-} <= 0, delta and (lambda + tan theta) only. The two
    eigenvalue weights are |E|/delta (split evenly over sigma = +-1) and
    2 (lambda + tan)^2 / (delta |E|) on sigma = 0; at E = 0 the second weight
    is its limit 1.
    """
    spec = analytic_spectrum(p)
    e, delta = spec.e0_minus, spec.delta
    s2 = (p.lam + p.tan_theta) ** 2
    if e == 0.0:
        # product state |0,0>
        return 0.0, 1.0
    w_mid = 2.0 * s2 / (delta * abs(e))
    ent = (e / delta) * math.log2(abs(e) / (2.0 * delta))
    if w_mid > 0.0:
        ent += (2.0 * s2 / (delta * e)) * math.log2(w_mid)
    k = 2.0 * delta**2 * e**2 / (8.0 * s2 * s2 + e**4)
    return max(0.0, ent), k
