"""Two spin-1 bosons in a double well: exact diagonalization, phase diagram, entanglement."""

from .effective import (AnalyticSpectrum, GroundState, QbhParams, TwoSiteState, analytic_eigenstates,
                        analytic_spectrum, build_qbh_hamiltonian, ground_state, sector_decompose)
from .entanglement import (analytic_entanglement, entropy, fidelities, orbital_number,
                           product_probabilities, reduce_left, reduce_right)
from .hubbard import (EffectiveCouplings, HubbardParams, build_hubbard_hamiltonian, compare_spectra,
                      enumerate_basis, map_to_effective)
from .numerics import EigenSystem, degeneracy_classes, eigh
from .phase import (GroundStateReport, PhasePoint, SweepSpec, boundaries_1d, classify,
                    entanglement_sweep, ground_state_report, spectrum_sweep, sweep)

__version__ = "0.1.0"
