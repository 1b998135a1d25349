"""Selective atom-oscillator interactions and Fock-pair gate synthesis."""

from .spaces import (
    HilbertSpace,
    StateVector,
    annihilation,
    atomic_sigma,
    basis_state,
    creation,
    fidelity,
    number_operator,
    product_state,
    purity,
    reduced_oscillator_state,
    tensor,
)
from .hamiltonians import (
    EffectiveParams,
    RamanParams,
    SelectiveParts,
    decompose_effective,
    effective_detuning,
    effective_hamiltonian,
    full_hamiltonian,
    multiquantum_coupling_element,
    multiquantum_hamiltonian,
    selective_hamiltonian,
)
from .propagator import Propagator, evolve, unitary_of
from .gates import (
    GateParams,
    atom_minus,
    atom_plus,
    closed_form_rotation,
    combined_echo_coupling,
    echo_factors,
    induced_oscillator_unitary,
    leakage,
    pair_gate,
    rotation_matrix,
    spin_flip,
)
from .synthesis import (
    CircuitPlan,
    ExecutionReport,
    PlanStep,
    commutation_check,
    execute_plan,
    load_plan,
    plan_from_dict,
    plan_general_state,
    plan_superposition,
    plan_to_dict,
    save_plan,
)
from .validation import CheckResult, run_validation

__all__ = [
    "HilbertSpace",
    "StateVector",
    "annihilation",
    "atomic_sigma",
    "basis_state",
    "creation",
    "fidelity",
    "number_operator",
    "product_state",
    "purity",
    "reduced_oscillator_state",
    "tensor",
    "EffectiveParams",
    "RamanParams",
    "SelectiveParts",
    "decompose_effective",
    "effective_detuning",
    "effective_hamiltonian",
    "full_hamiltonian",
    "multiquantum_coupling_element",
    "multiquantum_hamiltonian",
    "selective_hamiltonian",
    "Propagator",
    "evolve",
    "unitary_of",
    "GateParams",
    "atom_minus",
    "atom_plus",
    "closed_form_rotation",
    "combined_echo_coupling",
    "echo_factors",
    "induced_oscillator_unitary",
    "leakage",
    "pair_gate",
    "rotation_matrix",
    "spin_flip",
    "CircuitPlan",
    "ExecutionReport",
    "PlanStep",
    "commutation_check",
    "execute_plan",
    "load_plan",
    "plan_from_dict",
    "plan_general_state",
    "plan_superposition",
    "plan_to_dict",
    "save_plan",
    "CheckResult",
    "run_validation",
]

__version__ = "0.1.0"
