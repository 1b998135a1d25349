"""Compile target oscillator states into sequences of pair gates and run them.

A target with support on Fock levels 0..N compiles to at most N gates applied
in ascending pair order {0,1}, {1,2}, ..., {N-1,N}: gate j splits the
amplitude riding at level j-1, freezing the share that belongs at j-1 and
carrying the rest upward.  The rotation angles come from the target moduli
(descending accumulation, so gate j sees the combined weight of levels >= j);
the per-gate pulse-phase offsets come from an exact phase ledger, because
each gate contributes -i factors and dispersive phases (theta0 on the lower
pair level, a global 2*eta) that the bare magnitude recipe ignores.

The ledger can book phases for two device models: "ideal" (gates touch
nothing outside their pair) and "effective" (spectator Fock levels n pick up
the echoed dispersive phase eta + n*theta0 per gate).  Leakage through the
detuned exchange channels is not correctable by phases and caps the executed
fidelity of the effective model at roughly 1 - few*(|Omega_L|/g)^2 per gate.

The atom is re-prepared in |+> between gates; since an ideal gate returns the
atom exactly to |+>, this reset is bookkeeping rather than back-action.
Gates on disjoint pairs commute, so a plan may be annotated with parallel
groups; execution remains sequential per group member in any order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .gates import GateParams, atom_plus, induced_oscillator_unitary, pair_gate
from .hamiltonians import RamanParams
from .spaces import HilbertSpace, purity, reduced_oscillator_state

PHASE_MODELS = ("ideal", "effective")


@dataclass(frozen=True)
class PlanStep:
    gate: GateParams
    phase_correction: float = 0.0


@dataclass
class CircuitPlan:
    """Ordered pair-gate sequence preparing ``target`` from the vacuum."""

    steps: list[PlanStep]
    target: np.ndarray | None = None
    schedule: str = "sequential"
    phase_model: str = "ideal"

    def __post_init__(self):
        if self.schedule not in ("sequential", "parallel-groups"):
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if self.phase_model not in PHASE_MODELS:
            raise ValueError(f"unknown phase model {self.phase_model!r}")
        if self.target is not None:
            self.target = np.asarray(self.target, dtype=complex)

    def __len__(self) -> int:
        return len(self.steps)

    def pairs(self) -> list[tuple[int, int]]:
        return [s.gate.pair for s in self.steps]

    def parallel_groups(self) -> list[list[int]]:
        """Greedy grouping of step indices into mutually disjoint-pair groups.

        Order within the plan is preserved inside each group; no claim of a
        minimal number of groups is made.
        """
        groups: list[list[int]] = []
        occupied: list[set[int]] = []
        for i, step in enumerate(self.steps):
            levels = set(step.gate.pair)
            placed = False
            for g, occ in zip(groups, occupied):
                if not occ & levels:
                    g.append(i)
                    occ |= levels
                    placed = True
                    break
            if not placed:
                groups.append([i])
                occupied.append(set(levels))
        return groups


@dataclass
class ExecutionReport:
    fidelity: float
    leakage: float
    guard_population: float
    step_purities: list[float] = field(default_factory=list)
    step_atom_overlaps: list[float] = field(default_factory=list)


def _spectator_phase(phase_model: str, gp: GateParams, level: int) -> float:
    """Phase a non-pair Fock level accumulates during one gate."""
    if phase_model == "ideal":
        return 0.0
    return -(gp.eta + level * gp.theta0)


def _compile_ladder(
    target: np.ndarray,
    p: RamanParams,
    phase_model: str,
    phis: list[float] | None = None,
) -> CircuitPlan:
    """Angles from target moduli (or given), pulse-phase offsets from the ledger."""
    if phase_model not in PHASE_MODELS:
        raise ValueError(f"unknown phase model {phase_model!r}")
    t = np.asarray(target, dtype=complex)
    nrm = np.linalg.norm(t)
    if not math.isclose(nrm, 1.0, rel_tol=0.0, abs_tol=1e-9):
        raise ValueError(f"target norm {nrm} != 1")
    nonzero = np.nonzero(np.abs(t) > 1e-12)[0]
    if len(nonzero) == 0:
        raise ValueError("target has no support")
    top = int(nonzero[-1])
    if top == 0:
        return CircuitPlan(steps=[], target=t.copy(), phase_model=phase_model)

    # rotation angles: gate j acts on pair {j-1, j}; cos(phi_j) is the share
    # of the remaining weight that stays at level j-1
    if phis is None:
        phis = []
        for j in range(1, top + 1):
            remaining = float(np.linalg.norm(t[j - 1 :]))
            ratio = min(1.0, abs(t[j - 1]) / remaining)
            phis.append(float(np.arccos(ratio)))
    elif len(phis) != top:
        raise ValueError(f"need {top} angles, got {len(phis)}")

    gates = [GateParams.from_raman(p, m=j, phi=phis[j - 1]) for j in range(1, top + 1)]

    # phase ledger: solve per-gate chi so every frozen level ends at the
    # target phase up to one global constant
    future = [0.0] * (top + 1)  # spectator phase level i gains after its freeze
    for i in range(top + 1):
        freeze_gate = min(i + 1, top)  # level i frozen after gate i+1 (level top: gate top)
        future[i] = sum(
            _spectator_phase(phase_model, gates[j - 1], i)
            for j in range(freeze_gate + 1, top + 1)
        )

    chis = [0.0] * top
    moving_base = 0.0  # chi-free phase of the moving amplitude
    chi_sum = 0.0
    global_phase: float | None = None
    for j in range(1, top + 1):
        gp = gates[j - 1]
        # level j-1 freezes here with phase: moving + (-2 eta + theta0) + future spectator phases
        frozen = moving_base + chi_sum + (-2.0 * gp.eta + gp.theta0) + future[j - 1]
        if abs(t[j - 1]) > 1e-12:
            if global_phase is None:
                global_phase = frozen - float(np.angle(t[j - 1]))
            else:
                # steer with the previous gate's offset, which multiplies the
                # amplitude that arrived at level j-1
                correction = (float(np.angle(t[j - 1])) + global_phase) - frozen
                chis[j - 2] += correction
                chi_sum += correction
        moving_base += -2.0 * gp.eta - 0.5 * math.pi
    # moving amplitude ends at level `top`
    final_phase = moving_base + chi_sum
    if global_phase is None:
        global_phase = final_phase - float(np.angle(t[top]))
    else:
        chis[top - 1] += (float(np.angle(t[top])) + global_phase) - final_phase

    steps = [
        PlanStep(gate=gp, phase_correction=chi)
        for gp, chi in zip(gates, chis)
        if gp.phi > 1e-15
    ]
    return CircuitPlan(steps=steps, target=t.copy(), phase_model=phase_model)


def plan_general_state(
    target: np.ndarray, p: RamanParams, phase_model: str = "ideal"
) -> CircuitPlan:
    """Plan preparing an arbitrary normalized oscillator state from |0>.

    Plan length is at most the highest occupied level; zero-amplitude
    interior levels cost a full-transfer gate, zero-angle gates are elided.
    """
    return _compile_ladder(target, p, phase_model)


def plan_superposition(
    alpha: complex, beta: complex, n: int, p: RamanParams, phase_model: str = "ideal"
) -> CircuitPlan:
    """Plan preparing alpha|0> + beta|n> from |0>.

    Exactly n gates when beta != 0: the first rotates by arccos|alpha| on
    {0,1}, the rest climb with full pi/2 transfers.
    """
    if n < 0 or (n == 0 and abs(beta) > 0):
        raise ValueError(f"cannot place the excited component at level n={n}")
    nrm = abs(alpha) ** 2 + abs(beta) ** 2
    if not math.isclose(nrm, 1.0, rel_tol=0.0, abs_tol=1e-9):
        raise ValueError(f"|alpha|^2 + |beta|^2 = {nrm}, expected 1")
    target = np.zeros(max(n + 1, 1), dtype=complex)
    target[0] = alpha
    if n > 0:
        target[n] = beta
    if abs(beta) < 1e-12:
        return CircuitPlan(steps=[], target=target, phase_model=phase_model)
    phis = [float(np.arccos(min(1.0, abs(alpha))))] + [0.5 * math.pi] * (n - 1)
    return _compile_ladder(target, p, phase_model, phis=phis)


def execute_plan(
    plan: CircuitPlan,
    initial: np.ndarray,
    model: str,
    p: RamanParams,
    space: HilbertSpace | None = None,
) -> tuple[np.ndarray, ExecutionReport]:
    """Run a plan on an oscillator state, re-preparing the atom per gate.

    Returns the final oscillator state and a report; fidelity is measured
    against the plan target (padded to the working cutoff) when one is set,
    otherwise against the initial state.
    """
    initial = np.asarray(initial, dtype=complex)
    if space is None:
        atom_dim = 3 if model == "full" else 2
        max_m = max((s.gate.m for s in plan.steps), default=0)
        cutoff = max(len(initial), max_m + 2)
        space = HilbertSpace(atom_dim, cutoff)
    if len(initial) > space.fock_cutoff:
        raise ValueError("initial state longer than the Fock cutoff")
    for step in plan.steps:
        if step.gate.m + 2 > space.fock_cutoff:
            raise ValueError(
                f"plan touches level {step.gate.m} but cutoff is {space.fock_cutoff}"
            )

    osc = np.zeros(space.fock_cutoff, dtype=complex)
    osc[: len(initial)] = initial
    osc = osc / np.linalg.norm(osc)
    plus = atom_plus(space.atom_dim)

    purities: list[float] = []
    atom_overlaps: list[float] = []
    for step in plan.steps:
        U = pair_gate(step.gate, p, space, model=model, phase_offset=step.phase_correction)
        joint = U @ np.kron(plus, osc)
        rho = reduced_oscillator_state(joint, space)
        purities.append(purity(rho))
        # projective reset of the atom to |+>
        branch = np.kron(plus.conj(), np.eye(space.fock_cutoff)) @ joint
        weight = float(np.linalg.norm(branch))
        atom_overlaps.append(weight**2)
        if weight == 0.0:
            raise ArithmeticError("atom reset branch has zero weight")
        osc = branch / weight

    if plan.target is not None:
        ref = np.zeros(space.fock_cutoff, dtype=complex)
        ref[: len(plan.target)] = plan.target
        support = np.nonzero(np.abs(ref) > 1e-12)[0]
    else:
        ref = np.zeros(space.fock_cutoff, dtype=complex)
        ref[: len(initial)] = initial / np.linalg.norm(initial)
        support = np.nonzero(np.abs(ref) > 1e-12)[0]

    fid = float(np.abs(np.vdot(ref, osc)) ** 2)
    pops = np.abs(osc) ** 2
    leak = float(np.sum(pops) - np.sum(pops[support]))
    report = ExecutionReport(
        fidelity=fid,
        leakage=leak,
        guard_population=float(pops[space.guard_level]),
        step_purities=purities,
        step_atom_overlaps=atom_overlaps,
    )
    return osc, report


def commutation_check(
    ga: GateParams, gb: GateParams, p: RamanParams, space: HilbertSpace
) -> float:
    """Max-norm of the commutator of the two induced oscillator unitaries.

    Built under the ideal model with the atom in |+>; vanishes (to round-off)
    exactly when the two pairs are disjoint.
    """
    plus = atom_plus(space.atom_dim)
    ra = induced_oscillator_unitary(pair_gate(ga, p, space, "ideal"), space, plus)
    rb = induced_oscillator_unitary(pair_gate(gb, p, space, "ideal"), space, plus)
    comm = ra @ rb - rb @ ra
    return float(np.max(np.abs(comm)))


def plan_to_dict(plan: CircuitPlan) -> dict:
    doc = {
        "schedule": plan.schedule,
        "phase_model": plan.phase_model,
        "steps": [
            {
                "m": s.gate.m,
                "k": s.gate.k,
                "phi": s.gate.phi,
                "theta0": s.gate.theta0,
                "tau": s.gate.tau,
                "phase_correction": s.phase_correction,
            }
            for s in plan.steps
        ],
    }
    if plan.target is not None:
        doc["target"] = [[float(c.real), float(c.imag)] for c in plan.target]
    if plan.schedule == "parallel-groups":
        doc["groups"] = plan.parallel_groups()
    return doc


def plan_from_dict(doc: dict) -> CircuitPlan:
    steps = []
    for raw in doc["steps"]:
        m, k, phi, tau = raw["m"], raw.get("k", 1), raw["phi"], raw["tau"]
        element = phi / tau if tau != 0.0 else 0.0
        ratio = math.sqrt(math.factorial(m) / math.factorial(m - k))
        lam = element / ratio if ratio else 0.0
        gate = GateParams(
            m=m, tau=tau, lam=lam, theta0=raw["theta0"], phi=phi, eta=m * raw["theta0"], k=k
        )
        steps.append(PlanStep(gate=gate, phase_correction=raw.get("phase_correction", 0.0)))
    target = None
    if "target" in doc:
        target = np.array([complex(re, im) for re, im in doc["target"]])
    return CircuitPlan(
        steps=steps,
        target=target,
        schedule=doc.get("schedule", "sequential"),
        phase_model=doc.get("phase_model", "ideal"),
    )


def save_plan(plan: CircuitPlan, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(plan_to_dict(plan), fh, indent=2)


def load_plan(path) -> CircuitPlan:
    with open(path, "r", encoding="utf-8") as fh:
        return plan_from_dict(json.load(fh))
