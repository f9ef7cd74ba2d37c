"""Optical-circuit compilation and Gaussian dynamics for lattice scalar fields.

The pipeline: build a quadratic lattice Hamiltonian (``models``), compile
it into beam-splitter / squeezer / phase-shifter parameters with all time
dependence in one phase layer (``compiler``), push Gaussian states through
the reconstructed symplectic maps (``engine``), and compare entanglement
growth and correlation spreading against quasi-particle predictions
(``predict``) including light-cone front classification for long-range
couplings (``lightcone``).
"""

from .compiler import (
    CoherentReduction,
    IneligibleHamiltonianError,
    OTACircuit,
    coherent_reduction,
    compile,
    evolution_matrix,
    givens_qr,
    trotter_evolution,
)
from .engine import (
    GaussianState,
    coherent_state,
    evolve,
    renyi2_entropy,
    renyi2_mutual_information,
    restrict,
    symplectic_spectrum,
    vacuum_state,
)
from .lightcone import (
    CorrelationGrid,
    FrontFit,
    NoFrontError,
    classify_front,
    classify_grid,
    correlation_front,
    fit_front,
)
from .models import (
    HamiltonianMatrix,
    curved_spacetime_hamiltonian,
    fractional_hamiltonian,
    nonrelativistic_hamiltonian,
    prequench_hamiltonian,
    relativistic_hamiltonian,
)
from .predict import (
    DispersionTable,
    QuenchPrediction,
    dispersion,
    entropy_density,
    entropy_finite,
    entropy_infinite,
    group_velocity,
    mutual_information_finite,
    mutual_information_infinite,
    populations,
    quench_prediction,
)
from .sympcore import (
    beam_splitter_gate,
    bs_array,
    complex_squeezer_gate,
    is_symplectic,
    phase_shift_gate,
    squeezer_gate,
    symplectic_form,
)

__version__ = "0.1.0"

__all__ = [
    "CoherentReduction",
    "CorrelationGrid",
    "DispersionTable",
    "FrontFit",
    "GaussianState",
    "HamiltonianMatrix",
    "IneligibleHamiltonianError",
    "NoFrontError",
    "OTACircuit",
    "QuenchPrediction",
    "beam_splitter_gate",
    "bs_array",
    "classify_front",
    "classify_grid",
    "coherent_reduction",
    "coherent_state",
    "compile",
    "complex_squeezer_gate",
    "correlation_front",
    "curved_spacetime_hamiltonian",
    "dispersion",
    "entropy_density",
    "entropy_finite",
    "entropy_infinite",
    "evolution_matrix",
    "evolve",
    "fit_front",
    "fractional_hamiltonian",
    "givens_qr",
    "group_velocity",
    "is_symplectic",
    "mutual_information_finite",
    "mutual_information_infinite",
    "nonrelativistic_hamiltonian",
    "phase_shift_gate",
    "populations",
    "prequench_hamiltonian",
    "quench_prediction",
    "relativistic_hamiltonian",
    "renyi2_entropy",
    "renyi2_mutual_information",
    "restrict",
    "squeezer_gate",
    "symplectic_form",
    "symplectic_spectrum",
    "trotter_evolution",
    "vacuum_state",
]
