"""Two-site spin-1 Bose-Hubbard dimer with two particles, and its mapping to the QBH model.

Modes are ordered (L,-1), (L,0), (L,+1), (R,-1), (R,0), (R,+1). ``u0`` and
``u2`` are the on-site pair energies in the total-spin S=0 and S=2 collision
channels. In the ``n(n-1)`` / ``S^2 - 2n`` form of the interaction they enter as

    (u0 + 2 u2) / 3 * n(n-1) / 2  +  (u2 - u0) / 3 * (S^2 - 2n) / 2,

which puts an S=0 pair at ``u0`` and an S=2 pair at ``u2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .effective import SZ_TOTAL, QbhParams, build_qbh_hamiltonian
from .numerics import eigh

N_PARTICLES = 2
SIGMAS = (-1, 0, 1)
MODES = tuple((site, s) for site in ("L", "R") for s in SIGMAS)
VALIDITY_RATIO = 0.1
# minimum unit-filling weight for a state to count as part of the low manifold
MANIFOLD_WEIGHT = 0.9


@dataclass(frozen=True)
class HubbardParams:
    t: float
    u0: float
    u2: float
    field: float = 0.0

    def __post_init__(self):
        for name in ("t", "u0", "u2", "field"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.t < 0:
            raise ValueError("t must be nonnegative (its phase is gauged away)")
        if self.u0 <= 0 or self.u2 <= 0:
            raise ValueError("u0 and u2 must be positive (repulsive regime)")
        if self.field < 0:
            raise ValueError("field must be nonnegative")


@dataclass(frozen=True)
class EffectiveCouplings:
    j0: float
    j1: float
    j2: float
    lambda_out: int
    theta_out: float
    h_out: float
    valid: bool

    @property
    def qbh(self) -> QbhParams:
        return QbhParams(self.lambda_out, self.theta_out, self.h_out)


def enumerate_basis(n_particles: int = N_PARTICLES) -> list[tuple[int, ...]]:
    """All 6-mode occupation tuples with ``n_particles`` bosons, lexicographic."""
    states = [occ for occ in itertools.product(range(n_particles + 1), repeat=len(MODES))
              if sum(occ) == n_particles]
    return sorted(states)


BASIS = enumerate_basis()
INDEX = {occ: i for i, occ in enumerate(BASIS)}


def _hop(i: int, j: int) -> np.ndarray:
    """Matrix of a^dagger_i a_j on the fixed-N basis (sqrt(n) factors included)."""
    m = np.zeros((len(BASIS), len(BASIS)))
    for col, occ in enumerate(BASIS):
        if occ[j] == 0:
            continue
        amp = math.sqrt(occ[j])
        new = list(occ)
        new[j] -= 1
        amp *= math.sqrt(new[i] + 1)
        new[i] += 1
        m[INDEX[tuple(new)], col] += amp
    return m


_HOPS = {(i, j): _hop(i, j) for i in range(len(MODES)) for j in range(len(MODES))}

# spin-1 matrices in the (-1, 0, 1) basis; F^y = i * _FY_IM with _FY_IM real
_FZ = np.diag([-1.0, 0.0, 1.0])
_FP = np.zeros((3, 3))
_FP[1, 0] = _FP[2, 1] = math.sqrt(2.0)
_FX = (_FP + _FP.T) / 2.0
_FY_IM = -(_FP - _FP.T) / 2.0


def _site_operator(site: str, f: np.ndarray) -> np.ndarray:
    off = 0 if site == "L" else 3
    out = np.zeros((len(BASIS), len(BASIS)))
    for a in range(3):
        for b in range(3):
            if f[a, b] != 0.0:
                out += f[a, b] * _HOPS[(off + a, off + b)]
    return out


def number_operator(site: str) -> np.ndarray:
    return _site_operator(site, np.eye(3))


def spin_operators(site: str) -> dict[str, np.ndarray]:
    """Real matrices for S^x, S^z and the real part Y of S^y = i Y."""
    return {"x": _site_operator(site, _FX), "y_im": _site_operator(site, _FY_IM),
            "z": _site_operator(site, _FZ)}


def spin_squared(site: str) -> np.ndarray:
    s = spin_operators(site)
    # (S^y)^2 = (iY)^2 = -Y^2
    return s["x"] @ s["x"] - s["y_im"] @ s["y_im"] + s["z"] @ s["z"]


def total_sz() -> np.ndarray:
    return spin_operators("L")["z"] + spin_operators("R")["z"]


def interaction_coefficients(u0: float, u2: float) -> tuple[float, float]:
    """Prefactors of n(n-1)/2 and (S^2 - 2n)/2 giving channel energies u0, u2."""
    return (u0 + 2.0 * u2) / 3.0, (u2 - u0) / 3.0


def build_hubbard_hamiltonian(p: HubbardParams) -> np.ndarray:
    dim = len(BASIS)
    h = np.zeros((dim, dim))
    for s in range(3):
        h -= p.t * (_HOPS[(s, 3 + s)] + _HOPS[(3 + s, s)])
    c_n, c_s = interaction_coefficients(p.u0, p.u2)
    eye = np.eye(dim)
    for site in ("L", "R"):
        n = number_operator(site)
        h += 0.5 * c_n * (n @ (n - eye))
        h += 0.5 * c_s * (spin_squared(site) - 2.0 * n)
    h -= p.field * total_sz()
    return np.triu(h) + np.triu(h, 1).T


def unit_filling_projector() -> np.ndarray:
    """Diagonal 0/1 mask of basis states with one particle in each well."""
    return np.array([1.0 if sum(occ[:3]) == 1 else 0.0 for occ in BASIS])


def map_to_effective(p: HubbardParams) -> EffectiveCouplings:
    """Second-order superexchange couplings and the matching dimensionless QBH parameters."""
    t2 = p.t * p.t
    j1 = -2.0 * t2 / p.u2
    j2 = -2.0 * t2 / (3.0 * p.u2) - 4.0 * t2 / (3.0 * p.u0)
    j0 = j1 - j2
    if j1 == 0.0:
        raise ValueError("t = 0 gives J1 = 0; dimensionless parameters are undefined")
    scale = abs(j1)
    return EffectiveCouplings(
        j0=j0, j1=j1, j2=j2,
        lambda_out=1 if j1 > 0 else -1,
        theta_out=math.atan(j2 / scale),
        h_out=p.field / scale,
        valid=p.t < VALIDITY_RATIO * min(p.u0, p.u2),
    )


@dataclass(frozen=True)
class SpectrumComparison:
    max_deviation: float
    offset_used: float
    hubbard_levels: np.ndarray
    effective_levels: np.ndarray


def hubbard_low_levels(p: HubbardParams) -> np.ndarray:
    """The nine lowest Hubbard eigenvalues, checked to be the unit-filling manifold.

    Each must carry at least ``MANIFOLD_WEIGHT`` of its norm on singly occupied
    wells; otherwise doubly occupied states have mixed in or dropped below.
    """
    es = eigh(build_hubbard_hamiltonian(p))
    weights = unit_filling_projector() @ (es.vectors ** 2)
    if np.any(weights[:9] < MANIFOLD_WEIGHT):
        raise ValueError(
            "fewer than 9 Hubbard states lie below the charge gap; reduce t "
            f"(t={p.t}, u0={p.u0}, u2={p.u2}, field={p.field})"
        )
    return es.values[:9]


def compare_spectra(p: HubbardParams) -> SpectrumComparison:
    """Deviation between the Hubbard low manifold and the second-order QBH spectrum.

    Both 9-tuples are shifted to zero mean before comparison. The deviation is
    in units of |J1| (absolute energy units when t = 0, where J1 vanishes).
    """
    hub = hubbard_low_levels(p)
    if p.t == 0.0:
        eff = np.sort(-p.field * np.diag(SZ_TOTAL))
        scale = 1.0
    else:
        c = map_to_effective(p)
        scale = abs(c.j1)
        eff = eigh(build_qbh_hamiltonian(c.qbh, biquadratic="operator")).values * scale
    offset = float(np.mean(hub) - np.mean(eff))
    dev = float(np.max(np.abs((hub - np.mean(hub)) - (eff - np.mean(eff))))) / scale
    return SpectrumComparison(max_deviation=dev, offset_used=offset,
                              hubbard_levels=hub, effective_levels=eff)
