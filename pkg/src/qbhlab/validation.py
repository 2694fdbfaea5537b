"""Self-check suites run by ``qbhlab validate``."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import effective as eff
from . import entanglement as ent
from .effective import QbhParams, analytic_eigenstates, analytic_spectrum, build_qbh_hamiltonian
from .hubbard import HubbardParams, compare_spectra
from .numerics import eigh
from .phase import boundaries_1d, magnetization_jumps

THETA_LIM = math.pi / 2 - 1e-6


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _random_params(rng: np.random.Generator, n: int, with_field: bool = True):
    lams = rng.choice([-1, 1], size=n)
    thetas = rng.uniform(-THETA_LIM, THETA_LIM, size=n)
    hs = rng.uniform(0.0, 4.0, size=n) if with_field else np.zeros(n)
    return [QbhParams(int(l), float(t), float(h)) for l, t, h in zip(lams, thetas, hs)]


def spectrum_agreement(rng, n: int) -> SuiteResult:
    worst = 0.0
    for p in _random_params(rng, n):
        closed = np.sort(analytic_spectrum(p).energies())
        worst = max(worst, float(np.max(np.abs(closed - eigh(build_qbh_hamiltonian(p)).values))))
    return SuiteResult("spectrum-agreement", worst <= 1e-10, f"max |dE| = {worst:.3e} over {n} draws")


def eigenstate_residuals(rng, n: int) -> SuiteResult:
    worst = 0.0
    for p in _random_params(rng, n):
        ham = build_qbh_hamiltonian(p)
        scale = max(1.0, float(np.max(np.abs(ham))))
        for e, _, st in analytic_eigenstates(p):
            r = ham @ st.amplitudes - e * st.amplitudes
            worst = max(worst, float(np.max(np.abs(r))) / scale)
    return SuiteResult("eigenstates", worst <= 1e-10, f"max relative residual = {worst:.3e}")


def sector_conservation(rng, n: int) -> SuiteResult:
    worst = 0.0
    for p in _random_params(rng, n):
        ham = build_qbh_hamiltonian(p)
        comm = ham @ eff.SZ_TOTAL - eff.SZ_TOTAL @ ham
        worst = max(worst, float(np.max(np.abs(comm))))
        eff.sector_decompose(ham)
    return SuiteResult("sector-conservation", worst == 0.0, f"max |[H, Sz]| = {worst:.3e}")


def field_symmetry(rng, n: int) -> SuiteResult:
    worst = 0.0
    for p in _random_params(rng, n):
        ham = build_qbh_hamiltonian(p)
        flipped = ham + 2.0 * p.h * eff.SZ_TOTAL
        worst = max(worst, float(np.max(np.abs(eigh(ham).values - eigh(flipped).values))))
    return SuiteResult("field-symmetry", worst <= 1e-10, f"max spectral difference h vs -h = {worst:.3e}")


def entropy_oracle(rng, n: int) -> SuiteResult:
    """Closed-form S, K against Jacobi + partial trace, plus fixed reference points."""
    params = _random_params(rng, n, with_field=False)
    params += [QbhParams(1, -math.pi / 4), QbhParams(-1, math.pi / 4), QbhParams(1, 0.0)]
    worst = 0.0
    for p in params:
        s_cf, k_cf = ent.analytic_entanglement(p)
        _, st, _ = eff.numeric_sector_ground_state(build_qbh_hamiltonian(p), 0)
        rho = ent.reduce_left(st)
        worst = max(worst, abs(s_cf - ent.entropy(rho)), abs(k_cf - ent.orbital_number(rho)))
    refs = [
        (ent.entropy([1 / 3, 1 / 3, 1 / 3]), math.log2(3)),
        (ent.entropy([0.0, 0.0, 1.0]), 0.0),
        (ent.entropy([0.5, 0.5, 0.0]), 1.0),
    ]
    worst = max([worst] + [abs(a - b) for a, b in refs])
    return SuiteResult("entropy-oracle", worst <= 1e-9, f"max |closed form - numeric| = {worst:.3e}")


def left_right_symmetry(rng, n: int) -> SuiteResult:
    worst = 0.0
    for p in _random_params(rng, n):
        for _, _, st in analytic_eigenstates(p):
            worst = max(worst, float(np.max(np.abs(ent.reduce_left(st).eta - ent.reduce_right(st).eta))))
    return SuiteResult("left-right-symmetry", worst <= 1e-12, f"max eigenvalue difference = {worst:.3e}")


def bell_overlap(rng, n: int) -> SuiteResult:
    ov = float(np.dot(ent.B3_SINGLET.amplitudes, ent.B3_TRIPLET.amplitudes))
    return SuiteResult("bell-overlap", abs(ov - 1 / 3) <= 1e-14, f"<B_S|B_T> = {ov:.15f}")


def phase_boundaries(rng, n: int) -> SuiteResult:
    b = boundaries_1d(1, 0.0, 3.0, tol=1e-10)
    jumps = magnetization_jumps(1, 0.0, b, 1e-10)
    ok = len(b) == 2 and abs(b[0] - 1.0) <= 1e-9 and abs(b[1] - 2.0) <= 1e-9 and jumps == [(0, 1), (1, 2)]
    return SuiteResult("phase-boundaries", ok, f"crossings {b}, jumps {jumps}")


def hubbard_scaling(rng, n: int) -> SuiteResult:
    devs = [compare_spectra(HubbardParams(t, 1.0, 1.0)).max_deviation for t in (0.04, 0.02, 0.01)]
    ratios = [devs[0] / devs[1], devs[1] / devs[2]]
    ok = all(3.0 <= r <= 5.0 for r in ratios)
    return SuiteResult("hubbard-scaling", ok,
                       "deviations " + ", ".join(f"{d:.3e}" for d in devs)
                       + "; ratios " + ", ".join(f"{r:.3f}" for r in ratios))


SUITES = (spectrum_agreement, eigenstate_residuals, sector_conservation, field_symmetry,
          entropy_oracle, left_right_symmetry, bell_overlap, phase_boundaries, hubbard_scaling)


def run_validation(seed: int = 1, samples: int = 1000) -> dict:
    results = []
    for i, suite in enumerate(SUITES):
        # one stream per suite so suites stay reproducible on their own
        rng = np.random.default_rng([seed, i])
        try:
            res = suite(rng, samples)
        except Exception as exc:  # a crashing suite is a failing suite
            res = SuiteResult(suite.__name__.replace("_", "-"), False, f"error: {exc}")
        results.append(res)
    return {
        "seed": seed,
        "samples": samples,
        "passed": all(r.passed for r in results),
        "suites": [asdict(r) for r in results],
    }
