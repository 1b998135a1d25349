"""Hamiltonian builders for level-selective atom-oscillator coupling.

Physical picture: a driven Raman configuration where ground level |g> couples
to a far-detuned upper level |h> through the quantized mode (strength g) and
an intermediate level |e> couples to |h> through a classical drive (strength
|Omega_L|, phase theta), both detuned by delta.  Adiabatic elimination of |h>
leaves a two-level atom exchanging quanta with the oscillator at the reduced
rate lambda = g*|Omega_L|/delta, on top of photon-number-dependent dispersive
shifts g^2*n/delta.  An engineered Stark shift on |e> puts exactly one doublet
{|g,m>, |e,m-1>} on resonance; all other doublets are detuned by
g^2*(n-m)/delta, which dominates lambda when g >> |Omega_L|.

All builders return dense complex matrices on the joint space (atom-major
ordering) and are Hermitian by construction.  hbar = 1 throughout; every
coefficient is an angular frequency.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .spaces import (
    HilbertSpace,
    annihilation,
    atomic_sigma,
    creation,
    number_operator,
    tensor,
)

SELECTIVITY_RATIO_WARN = 0.2


@dataclass(frozen=True)
class RamanParams:
    """Physical couplings of the driven Raman configuration.

    g: atom-mode coupling (taken real).
    omega_l: magnitude of the classical drive |Omega_L|.
    theta: drive phase in radians.
    delta: common detuning of both transitions from |h>; must be nonzero.
    m: Fock level selected by the engineered shift.
    include_shift: whether the three-level builder applies the engineered
        Stark shift (g^2*m - |Omega_L|^2)/delta to |e>.  The two-level
        effective builder always assumes it.
    """

    g: float
    omega_l: float
    theta: float = 0.0
    delta: float = 20.0
    m: int = 1
    include_shift: bool = True

    def __post_init__(self):
        if self.delta == 0.0:
            raise ValueError("delta must be nonzero")
        if self.omega_l < 0.0:
            raise ValueError(f"omega_l must be >= 0, got {self.omega_l}")
        if self.m < 0:
            raise ValueError(f"m must be >= 0, got {self.m}")
        r = self.selectivity_ratio
        if r > SELECTIVITY_RATIO_WARN:
            warnings.warn(
                f"selectivity ratio |Omega_L|/g = {r:.3g} > {SELECTIVITY_RATIO_WARN}; "
                "doublet selectivity degrades as this ratio grows",
                stacklevel=2,
            )

    @property
    def coupling(self) -> float:
        """Selective exchange rate lambda = g*|Omega_L|/delta."""
        return self.g * self.omega_l / self.delta

    @property
    def dispersive_rate(self) -> float:
        """Per-quantum dispersive shift g^2/delta."""
        return self.g**2 / self.delta

    @property
    def engineered_shift(self) -> float:
        """Stark shift applied to |e> to select the doublet at Fock level m."""
        return (self.g**2 * self.m - self.omega_l**2) / self.delta

    @property
    def selectivity_ratio(self) -> float:
        return self.omega_l / self.g if self.g != 0.0 else math.inf


@dataclass(frozen=True)
class EffectiveParams:
    """Derived two-level model coefficients."""

    lam: float
    theta: float
    m: int
    delta: float

    @classmethod
    def from_raman(cls, p: RamanParams) -> "EffectiveParams":
        return cls(lam=p.coupling, theta=p.theta, m=p.m, delta=p.delta)


def _require_cutoff(space: HilbertSpace, m: int):
    if space.fock_cutoff < m + 2:
        raise ValueError(
            f"fock_cutoff {space.fock_cutoff} too small for selected level m={m}; "
            f"need at least m + 2 = {m + 2} (guard level)"
        )


def full_hamiltonian(p: RamanParams, space: HilbertSpace) -> np.ndarray:
    """Three-level rotating-frame Hamiltonian with explicit |h>.

    Static frame chosen so that the couplings are time independent: |h> sits
    at -delta, which reproduces the +g^2*n/delta dispersive shifts of the
    eliminated model for delta > 0.  Couplings: g*(|h><g| a + h.c.) and
    |Omega_L|*(e^{i theta}|h><e| + h.c.); the engineered shift acts on |e>
    when include_shift is set.
    """
    if space.atom_dim != 3:
        raise ValueError(f"full model needs atom_dim = 3, got {space.atom_dim}")
    _require_cutoff(space, p.m)
    nf = space.fock_cutoff
    a = annihilation(nf)
    ident = np.eye(nf, dtype=complex)
    H = -p.delta * tensor(atomic_sigma("h", "h", 3), ident)
    H += p.g * (tensor(atomic_sigma("h", "g", 3), a) + tensor(atomic_sigma("g", "h", 3), creation(nf)))
    drive = p.omega_l * np.exp(1j * p.theta)
    H += drive * tensor(atomic_sigma("h", "e", 3), ident)
    H += np.conj(drive) * tensor(atomic_sigma("e", "h", 3), ident)
    if p.include_shift:
        H += p.engineered_shift * tensor(atomic_sigma("e", "e", 3), ident)
    return H


def effective_hamiltonian(p: RamanParams, space: HilbertSpace) -> np.ndarray:
    """Two-level model after eliminating |h>.

    (g^2/delta) a†a on |g>, the shifted constant g^2*m/delta on |e>, and the
    exchange term lambda*(e^{i theta} |g><e| a† + h.c.) coupling every doublet
    {|g,n>, |e,n-1>}.
    """
    if space.atom_dim != 2:
        raise ValueError(f"effective model needs atom_dim = 2, got {space.atom_dim}")
    _require_cutoff(space, p.m)
    nf = space.fock_cutoff
    rate = p.dispersive_rate
    H = rate * tensor(atomic_sigma("g", "g", 2), number_operator(nf))
    H += rate * p.m * tensor(atomic_sigma("e", "e", 2), np.eye(nf, dtype=complex))
    lam = p.coupling
    H += lam * np.exp(1j * p.theta) * tensor(atomic_sigma("g", "e", 2), creation(nf))
    H += lam * np.exp(-1j * p.theta) * tensor(atomic_sigma("e", "g", 2), annihilation(nf))
    return H


def selective_hamiltonian(p: RamanParams, space: HilbertSpace) -> np.ndarray:
    """Effective model with the off-resonant exchange terms projected out.

    Keeps the dispersive diagonal and only the resonant doublet coupling
    {|g,m>, |e,m-1>}.  Built by zeroing the detuned couplings of the exact
    effective operator, so it provides a construction route independent of
    the term-by-term decomposition.
    """
    if p.m < 1:
        raise ValueError(f"selective model needs m >= 1, got {p.m}")
    H = effective_hamiltonian(p, space)
    for n in range(1, space.fock_cutoff):
        if n == p.m:
            continue
        i_g = space.index("g", n)
        i_e = space.index("e", n - 1)
        H[i_g, i_e] = 0.0
        H[i_e, i_g] = 0.0
    return H


class SelectiveParts(NamedTuple):
    """Term-by-term split of the selective-regime Hamiltonian."""

    dispersive: np.ndarray    # diagonal shifts on Fock levels outside {m-1, m}
    pair_energy: np.ndarray   # self-energy on the four states {g,e} x {m-1, m}
    pair_coupling: np.ndarray # resonant exchange inside {|g,m>, |e,m-1>}


def decompose_effective(p: RamanParams, space: HilbertSpace) -> SelectiveParts:
    """Split the selective-regime dynamics into its three commout-friendly parts.

    dispersive + pair_energy + pair_coupling reproduces
    ``selective_hamiltonian`` entrywise.  Relative to the exact effective
    operator the sum omits only the detuned exchange terms (those are the
    leakage channels; see ``selectivity residual`` tests).
    """
    if space.atom_dim != 2:
        raise ValueError(f"decomposition needs atom_dim = 2, got {space.atom_dim}")
    if p.m < 1:
        raise ValueError(f"decomposition needs m >= 1, got {p.m}")
    _require_cutoff(space, p.m)
    nf = space.fock_cutoff
    rate = p.dispersive_rate
    m = p.m

    dispersive = np.zeros((space.dim, space.dim), dtype=complex)
    for n in range(nf):
        if n in (m - 1, m):
            continue
        dispersive[space.index("g", n), space.index("g", n)] = rate * n
        dispersive[space.index("e", n), space.index("e", n)] = rate * m

    pair_energy = np.zeros_like(dispersive)
    for atom in ("g", "e"):
        for n in (m - 1, m):
            idx = space.index(atom, n)
            pair_energy[idx, idx] = rate * m
    idx_gm1 = space.index("g", m - 1)
    pair_energy[idx_gm1, idx_gm1] -= rate

    pair_coupling = np.zeros_like(dispersive)
    amp = p.coupling * np.sqrt(m) * np.exp(1j * p.theta)
    pair_coupling[space.index("g", m), space.index("e", m - 1)] = amp
    pair_coupling[space.index("e", m - 1), space.index("g", m)] = np.conj(amp)

    return SelectiveParts(dispersive, pair_energy, pair_coupling)


def effective_detuning(n: int, p: RamanParams) -> float:
    """Detuning g^2*(n-m)/delta of doublet {|g,n>, |e,n-1>}; zero at n = m."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return p.dispersive_rate * (n - p.m)


def multiquantum_hamiltonian(
    k: int, lam_k: float, theta: float, m: int, space: HilbertSpace
) -> np.ndarray:
    """k-quantum exchange coupling lam_k*(e^{i theta}|g><e| a†^k + h.c.).

    Selects doublets {|g,n>, |e,n-k>}; the chosen one is {|g,m>, |e,m-k>} with
    matrix element lam_k*sqrt(m!/(m-k)!).  lam_k is a free rate (for trapped
    ions it follows from the sideband expansion; it is not derived here).
    The raising term carries e^{i theta} so the operator is Hermitian for any
    phase.  Fock levels below k are annihilated by a^k and stay uncoupled.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if m < k:
        raise ValueError(f"no doublet {{|g,{m}>, |e,{m - k}>}}: need m >= k")
    if space.atom_dim != 2:
        raise ValueError(f"multiquantum model needs atom_dim = 2, got {space.atom_dim}")
    if space.fock_cutoff < m + 1:
        raise ValueError(f"fock_cutoff {space.fock_cutoff} too small for m={m}")
    a_k = np.linalg.matrix_power(annihilation(space.fock_cutoff), k)
    raise_term = lam_k * np.exp(1j * theta) * tensor(atomic_sigma("g", "e", 2), a_k.conj().T)
    return raise_term + raise_term.conj().T


def multiquantum_coupling_element(lam_k: float, m: int, k: int) -> float:
    """|<g,m|H|e,m-k>| = lam_k*sqrt(m!/(m-k)!)."""
    if m < k:
        raise ValueError(f"need m >= k, got m={m}, k={k}")
    return lam_k * math.sqrt(math.factorial(m) / math.factorial(m - k))
