"""Two-site spin-1 quadratic-biquadratic Heisenberg (QBH) model.

H = lambda * S_L.S_R + tan(theta) * Q - h * (S^z_L + S^z_R)

Basis order: index = 3 * (sigma_left + 1) + (sigma_right + 1), sigma in {-1, 0, 1}.

Two choices exist for the biquadratic matrix ``Q``:

``"elementwise"`` (default)
    Entry-wise square of the S_L.S_R matrix in the product basis. This is the
    form whose closed-form spectrum, mixing angles and mirror-symmetric
    ground states are used throughout this package (``analytic_spectrum``).
``"operator"``
    The matrix product (S_L.S_R)^2. It is SU(2) invariant and is what second
    order perturbation theory yields from the Bose-Hubbard dimer, so the
    Hubbard comparison uses it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import eigh

SIGMAS = (-1, 0, 1)
SECTORS = (2, 1, 0, -1, -2)
THETA_MARGIN = 1e-9
BIQUADRATIC_FORMS = ("elementwise", "operator")
DEGENERACY_TOL = 1e-12


def basis_index(sigma_left: int, sigma_right: int) -> int:
    if sigma_left not in SIGMAS or sigma_right not in SIGMAS:
        raise ValueError(f"spin projections must be in {SIGMAS}")
    return 3 * (sigma_left + 1) + (sigma_right + 1)


BASIS = tuple((sl, sr) for sl in SIGMAS for sr in SIGMAS)
TOTAL_SZ = np.array([sl + sr for sl, sr in BASIS])


@dataclass(frozen=True)
class QbhParams:
    lam: int
    theta: float
    h: float = 0.0

    def __post_init__(self):
        if self.lam not in (1, -1):
            raise ValueError(f"lambda must be +1 or -1, got {self.lam!r}")
        if not math.isfinite(self.theta) or abs(self.theta) >= math.pi / 2 - THETA_MARGIN:
            raise ValueError(f"theta must lie in (-pi/2, pi/2), got {self.theta!r}")
        if not math.isfinite(self.h) or self.h < 0:
            raise ValueError(f"h must be a finite nonnegative field, got {self.h!r}")
        object.__setattr__(self, "lam", int(self.lam))

    @property
    def tan_theta(self) -> float:
        return math.tan(self.theta)


@dataclass(frozen=True)
class TwoSiteState:
    """Real amplitudes over the nine |sigma_L, sigma_R> product states."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=float).reshape(9)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], float]) -> "TwoSiteState":
        """Build a state from ``{(sigma_L, sigma_R): coefficient}``, normalized."""
        amps = np.zeros(9)
        for (sl, sr), c in terms.items():
            amps[basis_index(sl, sr)] += c
        return cls(amps / np.linalg.norm(amps))

    @property
    def matrix(self) -> np.ndarray:
        """3x3 array c[sigma_L, sigma_R] (rows/cols ordered -1, 0, 1)."""
        return self.amplitudes.reshape(3, 3)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, sigma_left: int, sigma_right: int) -> float:
        return float(self.amplitudes[basis_index(sigma_left, sigma_right)])

    def mirrored(self) -> "TwoSiteState":
        return TwoSiteState(self.matrix.T.copy())


@dataclass(frozen=True)
class AnalyticSpectrum:
    e_plus2: float
    e_minus2: float
    e1_plus: float
    e1_minus: float
    em1_plus: float
    em1_minus: float
    e00: float
    e0_plus: float
    e0_minus: float
    delta: float
    alpha_plus: float
    alpha_minus: float

    def energies(self) -> list[float]:
        return [self.e_plus2, self.e_minus2, self.e1_plus, self.e1_minus,
                self.em1_plus, self.em1_minus, self.e00, self.e0_plus, self.e0_minus]

    def sector_minimum(self, sz: int) -> float:
        return {
            2: self.e_plus2,
            1: min(self.e1_plus, self.e1_minus),
            0: self.e0_minus,
            -1: min(self.em1_plus, self.em1_minus),
            -2: self.e_minus2,
        }[sz]


@dataclass(frozen=True)
class GroundState:
    energy: float
    sz: int
    state: TwoSiteState
    degenerate_sectors: tuple[int, ...] = field(default=())
    multiplicity: int = 1

    @property
    def degenerate(self) -> bool:
        return self.multiplicity > 1


def _spin_dot_matrix() -> np.ndarray:
    # S_L.S_R = Sz Sz + (S+ S- + S- S+)/2; spin-1 ladder elements are sqrt(2)
    m = np.zeros((9, 9))
    for sl, sr in BASIS:
        i = basis_index(sl, sr)
        m[i, i] = sl * sr
        if sl < 1 and sr > -1:
            m[basis_index(sl + 1, sr - 1), i] += 1.0
        if sl > -1 and sr < 1:
            m[basis_index(sl - 1, sr + 1), i] += 1.0
    return m


SPIN_DOT = _spin_dot_matrix()
SZ_TOTAL = np.diag(TOTAL_SZ.astype(float))


def biquadratic_matrix(form: str = "elementwise") -> np.ndarray:
    if form == "elementwise":
        return SPIN_DOT * SPIN_DOT
    if form == "operator":
        return SPIN_DOT @ SPIN_DOT
    raise ValueError(f"unknown biquadratic form {form!r}; choose from {BIQUADRATIC_FORMS}")


def build_qbh_hamiltonian(p: QbhParams, biquadratic: str = "elementwise") -> np.ndarray:
    h = p.lam * SPIN_DOT + p.tan_theta * biquadratic_matrix(biquadratic) - p.h * SZ_TOTAL
    # symmetrize exactly; every term is symmetric up to rounding in the sum
    return np.triu(h) + np.triu(h, 1).T


def sector_indices(sz: int) -> list[int]:
    return [i for i, s in enumerate(TOTAL_SZ) if s == sz]


def sector_decompose(a) -> dict[int, np.ndarray]:
    """Split a 9x9 QBH matrix into its total-S^z blocks (sizes 1, 2, 3, 2, 1)."""
    a = np.asarray(a, dtype=float)
    if a.shape != (9, 9):
        raise ValueError(f"expected a 9x9 matrix, got {a.shape}")
    cross = TOTAL_SZ[:, None] != TOTAL_SZ[None, :]
    if np.any(a[cross] != 0.0):
        i, j = np.argwhere(cross & (a != 0.0))[0]
        raise ValueError(
            f"matrix couples S^z={TOTAL_SZ[i]} and S^z={TOTAL_SZ[j]} at ({i}, {j}); "
            "the Hamiltonian builder is corrupted"
        )
    return {sz: a[np.ix_(sector_indices(sz), sector_indices(sz))].copy() for sz in SECTORS}


def _sz0_pair(lam: int, t: float) -> tuple[float, float, float]:
    """(E_{0;+}, E_{0;-}, delta), avoiding cancellation in the smaller root."""
    s = lam + t
    d = -lam + t
    delta = math.sqrt(9.0 * s * s - 4.0 * lam * t)
    # E+ * E- = -2 (lam + tan)^2
    if d >= 0:
        e_plus = (d + delta) / 2.0
        e_minus = -2.0 * s * s / e_plus if e_plus != 0 else 0.0
    else:
        e_minus = (d - delta) / 2.0
        e_plus = -2.0 * s * s / e_minus
    return e_plus, e_minus, delta


def analytic_spectrum(p: QbhParams) -> AnalyticSpectrum:
    lam, t, h = p.lam, p.tan_theta, p.h
    s = lam + t
    e_plus, e_minus, delta = _sz0_pair(lam, t)
    if delta <= 0.0:
        raise ArithmeticError(f"gap parameter vanished at {p}; mixing angles undefined")
    alpha_plus = math.acos(math.sqrt(min(1.0, abs(e_plus) / delta)))
    alpha_minus = math.acos(math.sqrt(min(1.0, abs(e_minus) / delta)))
    return AnalyticSpectrum(
        e_plus2=s - 2 * h,
        e_minus2=s + 2 * h,
        e1_plus=s - h,
        e1_minus=-s - h,
        em1_plus=s + h,
        em1_minus=-s + h,
        e00=-lam + t,
        e0_plus=e_plus,
        e0_minus=e_minus,
        delta=delta,
        alpha_plus=alpha_plus,
        alpha_minus=alpha_minus,
    )


def _sz0_mixed_state(spec: AnalyticSpectrum, lam: int, t: float, upper: bool) -> TwoSiteState:
    """||0;+>> or ||0;->> with a nonnegative symmetric (|-1,1>+|1,-1>) component.

    Eigenvector of [[-lam+tan, sqrt2 (lam+tan)], [sqrt2 (lam+tan), 0]]:
    the |0,0> amplitude over the symmetric amplitude equals sqrt2 (lam+tan) / E.
    """
    e = spec.e0_plus if upper else spec.e0_minus
    alpha = spec.alpha_plus if upper else spec.alpha_minus
    cos_a, sin_a = math.cos(alpha), math.sin(alpha)
    if e != 0.0:
        sign = math.copysign(1.0, (lam + t) / e) if lam + t != 0.0 else 0.0
    else:
        sign = 1.0
    amps = np.zeros(9)
    amps[basis_index(-1, 1)] = amps[basis_index(1, -1)] = cos_a / math.sqrt(2.0)
    amps[basis_index(0, 0)] = sign * sin_a
    return TwoSiteState(amps / np.linalg.norm(amps))


def analytic_eigenstates(p: QbhParams) -> list[tuple[float, int, TwoSiteState]]:
    """Closed-form eigenpairs ``(energy, S^z, state)`` for the elementwise form."""
    spec = analytic_spectrum(p)
    r2 = 1.0 / math.sqrt(2.0)
    out = [
        (spec.e_plus2, 2, TwoSiteState.from_terms({(1, 1): 1.0})),
        (spec.e_minus2, -2, TwoSiteState.from_terms({(-1, -1): 1.0})),
        (spec.e1_plus, 1, TwoSiteState.from_terms({(0, 1): r2, (1, 0): r2})),
        (spec.e1_minus, 1, TwoSiteState.from_terms({(0, 1): r2, (1, 0): -r2})),
        (spec.em1_plus, -1, TwoSiteState.from_terms({(0, -1): r2, (-1, 0): r2})),
        (spec.em1_minus, -1, TwoSiteState.from_terms({(0, -1): r2, (-1, 0): -r2})),
        (spec.e00, 0, TwoSiteState.from_terms({(-1, 1): r2, (1, -1): -r2})),
        (spec.e0_plus, 0, _sz0_mixed_state(spec, p.lam, p.tan_theta, upper=True)),
        (spec.e0_minus, 0, _sz0_mixed_state(spec, p.lam, p.tan_theta, upper=False)),
    ]
    return out


def _tie_order(sz: int) -> tuple[int, int]:
    # smallest |S^z| first, then positive before negative
    return (abs(sz), -sz)


def ground_state(p: QbhParams, tol: float = DEGENERACY_TOL) -> GroundState:
    """Global ground state from the closed-form eigensystem.

    Ties across sectors resolve to the smallest |S^z| (positive first); ties
    inside the S^z=0 sector resolve to the mirror-even ||0;->>.
    """
    pairs = analytic_eigenstates(p)
    e_min = min(e for e, _, _ in pairs)
    window = tol * max(1.0, abs(e_min))
    tied = [(e, sz, st) for e, sz, st in pairs if e - e_min <= window]
    sectors = sorted({sz for _, sz, _ in tied}, key=_tie_order)
    chosen = sectors[0]
    candidates = [(e, st) for e, sz, st in tied if sz == chosen]
    if chosen == 0 and len(candidates) > 1:
        # ||0;->> is listed last; it is the mirror-even member of the tie
        energy, state = candidates[-1]
    else:
        energy, state = min(candidates, key=lambda c: c[0])
    degenerate = tuple(sectors) if len(tied) > 1 else ()
    return GroundState(energy=energy, sz=chosen, state=state,
                       degenerate_sectors=degenerate, multiplicity=len(tied))


def sector_ground_state(p: QbhParams, sz: int = 0) -> GroundState:
    """Lowest state inside one S^z sector (closed form)."""
    pairs = [(e, s, st) for e, s, st in analytic_eigenstates(p) if s == sz]
    e_min = min(e for e, _, _ in pairs)
    window = DEGENERACY_TOL * max(1.0, abs(e_min))
    tied = [(e, st) for e, _, st in pairs if e - e_min <= window]
    energy, state = tied[-1] if sz == 0 else min(tied, key=lambda c: c[0])
    return GroundState(energy=energy, sz=sz, state=state,
                       degenerate_sectors=(sz,) if len(tied) > 1 else (),
                       multiplicity=len(tied))


MIRROR = np.zeros((9, 9))
for _sl, _sr in BASIS:
    MIRROR[basis_index(_sr, _sl), basis_index(_sl, _sr)] = 1.0


def numeric_sector_ground_state(a, sz: int = 0, tol: float = 1e-9) -> tuple[float, TwoSiteState, int]:
    """Lowest eigenpair of one sector by Jacobi, independent of the closed forms.

    A degenerate lowest level is resolved to its mirror-even member (left-right
    swap eigenvalue +1). Returns ``(energy, state, multiplicity)``.
    """
    blocks = sector_decompose(a)
    idx = sector_indices(sz)
    es = eigh(blocks[sz])
    e0 = es.values[0]
    window = tol * max(1.0, abs(e0))
    k = int(np.sum(es.values - e0 <= window))
    vecs = np.zeros((9, k))
    vecs[idx, :] = es.vectors[:, :k]
    if k > 1:
        parity = vecs.T @ MIRROR @ vecs
        pes = eigh(np.triu(parity) + np.triu(parity, 1).T)
        vec = vecs @ pes.vectors[:, -1]
    else:
        vec = vecs[:, 0]
    sym = vec[basis_index(-1, 1)] + vec[basis_index(1, -1)]
    lead = sym if abs(sym) > 1e-14 else vec[np.argmax(np.abs(vec))]
    if lead < 0:
        vec = -vec
    return float(e0), TwoSiteState(vec / np.linalg.norm(vec)), k
