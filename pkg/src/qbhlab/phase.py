"""Ground-state phase diagram, level crossings and figure-data sweeps."""

from __future__ import annotations

import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import effective as eff
from .effective import QbhParams, analytic_spectrum, build_qbh_hamiltonian
from .entanglement import (entropy, fidelities, orbital_number,
                           product_probabilities, reduce_left)
from .numerics import degeneracy_classes, eigh

SCAN_SAMPLES = 1000
TIE_TOL = 1e-12
DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class SweepSpec:
    lam: int
    theta_min: float
    theta_max: float
    theta_steps: int
    h_min: float = 0.0
    h_max: float = 0.0
    h_steps: int = 1

    def __post_init__(self):
        if self.lam not in (1, -1):
            raise ValueError("lambda must be +1 or -1")
        lim = math.pi / 2 - eff.THETA_MARGIN
        if not (-lim < self.theta_min <= self.theta_max < lim):
            raise ValueError("need -pi/2 < theta_min <= theta_max < pi/2")
        if not (0.0 <= self.h_min <= self.h_max):
            raise ValueError("need 0 <= h_min <= h_max")
        if self.theta_steps < 1 or self.h_steps < 1:
            raise ValueError("grid steps must be >= 1")

    @property
    def thetas(self) -> np.ndarray:
        return grid(self.theta_min, self.theta_max, self.theta_steps)

    @property
    def hs(self) -> np.ndarray:
        return grid(self.h_min, self.h_max, self.h_steps)


@dataclass(frozen=True)
class PhasePoint:
    theta: float
    h: float
    sz: int
    energy: float
    magnetization: float
    degenerate: bool


@dataclass(frozen=True)
class GroundStateReport:
    lam: int
    theta: float
    h: float
    sz: int
    energy: float
    magnetization: float
    degenerate: bool
    degenerate_sectors: tuple[int, ...]
    multiplicity: int
    amplitudes: tuple[float, ...]
    entropy: float
    k: float
    f_s: float
    f_t: float
    p0: float
    p_plus: float
    p_minus: float
    is_global_ground: bool = True

    @property
    def ppm(self) -> float:
        return 0.5 * (self.p_plus + self.p_minus)


def grid(lo: float, hi: float, steps: int) -> np.ndarray:
    """Inclusive uniform grid; a single step yields ``[lo]``."""
    if steps < 1:
        raise ValueError("grid steps must be >= 1")
    if steps == 1:
        return np.array([float(lo)])
    return np.linspace(lo, hi, steps)


def _threads() -> int:
    try:
        n = int(os.environ.get("QBH_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def _ordered_map(fn, items):
    items = list(items)
    n = min(_threads(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def sector_minima(p: QbhParams) -> dict[int, float]:
    spec = analytic_spectrum(p)
    return {sz: spec.sector_minimum(sz) for sz in eff.SECTORS}


def classify(p: QbhParams, verify: bool = False) -> PhasePoint:
    """Ground sector from the closed-form sector minima.

    Ties within ``TIE_TOL`` go to the smallest |S^z| (positive first). With
    ``verify`` the energy is re-checked against a Jacobi diagonalization.
    """
    minima = sector_minima(p)
    e_min = min(minima.values())
    window = TIE_TOL * max(1.0, abs(e_min))
    tied = sorted((sz for sz, e in minima.items() if e - e_min <= window),
                  key=lambda sz: (abs(sz), -sz))
    sz = tied[0]
    if verify:
        es = eigh(build_qbh_hamiltonian(p))
        if abs(es.values[0] - e_min) > 1e-10 * max(1.0, abs(e_min)):
            raise AssertionError(
                f"closed-form ground energy {e_min!r} disagrees with numeric {es.values[0]!r} at {p}")
    return PhasePoint(theta=p.theta, h=p.h, sz=sz, energy=minima[sz],
                      magnetization=float(sz), degenerate=len(tied) > 1)


def sweep(spec: SweepSpec, verify_fraction: float = 0.0, seed: int = 1) -> list[list[PhasePoint]]:
    """Row-major grid: ``result[i][j]`` is (theta_i, h_j)."""
    hs = spec.hs
    rng = random.Random(seed)
    checks = [[rng.random() < verify_fraction for _ in hs] for _ in spec.thetas]

    def row(item):
        i, theta = item
        return [classify(QbhParams(spec.lam, float(theta), float(h)), verify=checks[i][j])
                for j, h in enumerate(hs)]

    return _ordered_map(row, enumerate(spec.thetas))


def boundaries_1d(lam: int, theta: float, h_max: float, tol: float = 1e-10,
                  samples: int = SCAN_SAMPLES) -> list[float]:
    """Fields in [0, h_max] where the ground sector changes, each within ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if h_max <= 0:
        return []

    def sz_at(h: float) -> int:
        return classify(QbhParams(lam, theta, h)).sz

    hs = np.linspace(0.0, h_max, samples + 1)
    labels = [sz_at(float(h)) for h in hs]
    found: list[float] = []

    def resolve(a: float, end: float, sa: int, s_end: int) -> None:
        b = end
        while b - a > tol:
            m = 0.5 * (a + b)
            if sz_at(m) == sa:
                a = m
            else:
                b = m
        found.append(0.5 * (a + b))
        s_b = sz_at(b)
        if s_b != s_end:
            # another crossing inside the same scan bracket
            resolve(b, end, s_b, s_end)

    for k in range(samples):
        if labels[k] != labels[k + 1]:
            resolve(float(hs[k]), float(hs[k + 1]), labels[k], labels[k + 1])
    return found


def magnetization_jumps(lam: int, theta: float, crossings: list[float], tol: float) -> list[tuple[int, int]]:
    out = []
    for h in crossings:
        lo = classify(QbhParams(lam, theta, max(0.0, h - 10 * tol))).sz
        hi = classify(QbhParams(lam, theta, h + 10 * tol)).sz
        out.append((lo, hi))
    return out


@dataclass(frozen=True)
class SpectrumRow:
    x: float
    energies: tuple[float, ...]
    classes: tuple[tuple[float, int], ...]

    @property
    def signature(self) -> str:
        return "-".join(str(m) for _, m in self.classes)


def spectrum_sweep(lam: int, axis: str, fixed: float, values) -> list[SpectrumRow]:
    """Nine closed-form energies along ``theta`` (at field ``fixed``) or ``h`` (at angle ``fixed``)."""
    if axis not in ("theta", "h"):
        raise ValueError("axis must be 'theta' or 'h'")

    def row(x):
        x = float(x)
        p = QbhParams(lam, x, fixed) if axis == "theta" else QbhParams(lam, fixed, x)
        e = sorted(analytic_spectrum(p).energies())
        return SpectrumRow(x=x, energies=tuple(e),
                           classes=tuple(degeneracy_classes(e, DEGENERACY_TOL)))

    return _ordered_map(row, values)


def ground_state_report(p: QbhParams, sector: int | None = None) -> GroundStateReport:
    """Full ground-state report; ``sector`` restricts to one S^z block."""
    global_gs = eff.ground_state(p)
    gs = global_gs if sector is None else eff.sector_ground_state(p, sector)
    st = gs.state
    rho = reduce_left(st)
    fid = fidelities(st)
    probs = product_probabilities(st)
    is_global = sector is None or (
        abs(gs.energy - global_gs.energy) <= TIE_TOL * max(1.0, abs(global_gs.energy)))
    return GroundStateReport(
        lam=p.lam, theta=p.theta, h=p.h, sz=gs.sz, energy=gs.energy,
        magnetization=float(gs.sz), degenerate=gs.degenerate,
        degenerate_sectors=gs.degenerate_sectors, multiplicity=gs.multiplicity,
        amplitudes=tuple(float(a) for a in st.amplitudes),
        entropy=entropy(rho), k=orbital_number(rho),
        f_s=fid.f_singlet, f_t=fid.f_triplet,
        p0=probs.p0, p_plus=probs.p_plus, p_minus=probs.p_minus,
        is_global_ground=is_global,
    )


def entanglement_sweep(lam: int, thetas, h: float = 0.0) -> list[GroundStateReport]:
    """S^z=0 sector ground-state reports along theta; flags where it is the global ground state."""
    return _ordered_map(lambda th: ground_state_report(QbhParams(lam, float(th), h), sector=0),
                        thetas)


def numeric_entanglement(p: QbhParams) -> tuple[float, float]:
    """(entropy, orbital number) of the S^z=0 ground state via Jacobi and partial trace."""
    _, st, _ = eff.numeric_sector_ground_state(build_qbh_hamiltonian(p), 0)
    rho = reduce_left(st)
    return entropy(rho), orbital_number(rho)

