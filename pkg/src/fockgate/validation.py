"""Numerical identity checks behind the `validate` command.

Each check measures a defect (a max-norm deviation or an infidelity) and
compares it against a bound.  Bounds are overridable so that a deliberately
unattainable tolerance demonstrates the reporting path, and a self-test mode
corrupts the dispersive phase to prove the closed-form equivalence check has
teeth.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .gates import (
    GateParams,
    atom_minus,
    atom_plus,
    closed_form_rotation,
    combined_echo_coupling,
    echo_factors,
    pair_gate,
    spin_flip,
)
from .hamiltonians import (
    RamanParams,
    decompose_effective,
    effective_hamiltonian,
    full_hamiltonian,
    selective_hamiltonian,
)
from .propagator import Propagator
from .spaces import (
    HilbertSpace,
    annihilation,
    creation,
    hermiticity_defect,
    max_abs,
    product_state,
    purity,
    reduced_oscillator_state,
    tensor,
)

DEFAULT_TOLERANCES = {
    "algebraic": 1e-12,
    "propagation": 1e-10,
    "closed_form_infidelity": 1e-9,
    "purity_deficit": 1e-9,
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.value < self.bound

    def describe(self) -> str:
        tag = "pass" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: measured {self.value:.3e}, bound {self.bound:.1e}"


def run_validation(
    p: RamanParams,
    space: HilbertSpace,
    tolerances: dict | None = None,
    corrupt_theta0: bool = False,
    seed: int = 0,
) -> list[CheckResult]:
    """Run the identity suite for a two-level space; returns one result per check."""
    tol = dict(DEFAULT_TOLERANCES)
    if tolerances:
        tol.update({k: float(v) for k, v in tolerances.items() if k in DEFAULT_TOLERANCES})
    rng = np.random.default_rng(seed)
    results: list[CheckResult] = []
    algebraic = tol["algebraic"]
    propagation = tol["propagation"]

    nf = space.fock_cutoff
    a, ad = annihilation(nf), creation(nf)

    num = ad @ a
    results.append(
        CheckResult("ladder number operator", max_abs(num - np.diag(np.arange(nf))), algebraic)
    )
    comm = (a @ ad - ad @ a)[: nf - 1, : nf - 1] - np.eye(nf - 1)
    results.append(CheckResult("ladder commutator below guard level", max_abs(comm), algebraic))

    h_eff = effective_hamiltonian(p, space)
    results.append(CheckResult("effective model hermiticity", hermiticity_defect(h_eff), algebraic))
    space3 = HilbertSpace(3, nf)
    results.append(
        CheckResult(
            "three-level model hermiticity",
            hermiticity_defect(full_hamiltonian(p, space3)),
            algebraic,
        )
    )

    parts = decompose_effective(p, space)
    sel = selective_hamiltonian(p, space)
    results.append(
        CheckResult(
            "decomposition reproduces selective model",
            max_abs(parts.dispersive + parts.pair_energy + parts.pair_coupling - sel),
            algebraic,
        )
    )

    results.append(
        CheckResult(
            "pair terms commute",
            max_abs(parts.pair_energy @ parts.pair_coupling - parts.pair_coupling @ parts.pair_energy),
            algebraic,
        )
    )
    gp = GateParams.from_raman(p, m=max(p.m, 1), phi=0.7)
    factors = echo_factors(gp, p, space)
    results.append(
        CheckResult(
            "coupling commutes with flipped coupling",
            max_abs(
                parts.pair_coupling @ factors.flipped_coupling
                - factors.flipped_coupling @ parts.pair_coupling
            ),
            algebraic,
        )
    )

    pulse = parts.pair_energy + parts.pair_coupling
    flip = tensor(spin_flip(2), np.eye(nf))
    lhs = flip @ Propagator(pulse).unitary(gp.tau) @ flip
    rhs = Propagator(factors.flipped_pulse).unitary(gp.tau)
    results.append(CheckResult("spin-echo conjugation identity", max_abs(lhs - rhs), propagation))

    theta0 = gp.theta0
    coupling_at_theta0 = decompose_effective(replace(p, theta=theta0, m=gp.m), space).pair_coupling
    combined = (coupling_at_theta0 + flip @ coupling_at_theta0 @ flip) * gp.tau
    results.append(
        CheckResult(
            "combined echo coupling projector form",
            max_abs(combined - combined_echo_coupling(gp, space, theta0)),
            propagation,
        )
    )

    # closed-form equivalence on sampled gates
    worst = 0.0
    for _ in range(24):
        m = int(rng.integers(1, min(5, nf - 2) + 1))
        phi = float(rng.uniform(0.0, 2.0 * np.pi))
        z = rng.normal(size=4)
        alpha = complex(z[0], z[1])
        beta = complex(z[2], z[3])
        nrm = np.hypot(abs(alpha), abs(beta))
        alpha, beta = alpha / nrm, beta / nrm
        g_m = GateParams.from_raman(p, m=m, phi=phi)
        U = pair_gate(g_m, p, space, model="ideal")
        osc = np.zeros(nf, dtype=complex)
        osc[m - 1], osc[m] = alpha, beta
        out = U @ product_state(space, atom_plus(2), osc).amplitudes
        g_cf = replace(g_m, theta0=-g_m.theta0) if corrupt_theta0 else g_m
        pair = closed_form_rotation(alpha, beta, g_cf)
        expect = np.zeros(nf, dtype=complex)
        expect[m - 1], expect[m] = pair
        ref = product_state(space, atom_plus(2), expect).amplitudes
        worst = max(worst, 1.0 - float(np.abs(np.vdot(ref, out)) ** 2))
    results.append(
        CheckResult("closed-form rotation infidelity", worst, tol["closed_form_infidelity"])
    )

    worst_unit = 0.0
    for model, sp in (("ideal", space), ("effective", space), ("full", space3)):
        U = pair_gate(gp, p, sp, model=model)
        worst_unit = max(worst_unit, max_abs(U.conj().T @ U - np.eye(sp.dim)))
    results.append(CheckResult("gate unitarity across models", worst_unit, propagation))

    worst_purity = 0.0
    for atom in (atom_plus(2), atom_minus(2)):
        osc = np.zeros(nf, dtype=complex)
        osc[gp.m - 1], osc[gp.m] = 0.6, 0.8
        out = pair_gate(gp, p, space, "ideal") @ product_state(space, atom, osc).amplitudes
        worst_purity = max(worst_purity, 1.0 - purity(reduced_oscillator_state(out, space)))
    results.append(
        CheckResult("disentanglement purity deficit", worst_purity, tol["purity_deficit"])
    )

    return results
