"""Physical constants, coupling strengths, polarization geometry, and the
graviton-oscillator interaction Hamiltonian.

All angular frequencies are rad/s internally; the CLI owns any Hz
conversion.  The single oscillator-mass parameter ``mu`` doubles as the
"reduced mass" -- the model has one oscillator, so there is only one mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import FockSpace, Operator, annihilator


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 values by default; overridable for sensitivity studies."""

    G: float = 6.67430e-11  # m^3 kg^-1 s^-2
    hbar: float = 1.054571817e-34  # J s
    c: float = 2.99792458e8  # m/s

    def __post_init__(self):
        if self.G <= 0 or self.hbar <= 0 or self.c <= 0:
            raise ValueError("physical constants must be strictly positive")


CODATA2018 = PhysicalConstants()


def default_polarization() -> tuple[float, float]:
    """The equal-split polarization pair (1/sqrt(2), 1/sqrt(2))."""
    s = 1.0 / math.sqrt(2.0)
    return (s, s)


def polarization_constraint(n) -> float:
    """P_11(n)^2 for the transverse projector P_ij = delta_ij - n_i n_j.

    This is the value that e1^2 + e2^2 must take for a wave propagating
    along the unit vector ``n``; propagation along u3 gives exactly 1.
    """
    n = np.asarray(n, dtype=float)
    if n.shape != (3,):
        raise ValueError(f"propagation direction must be a 3-vector, got shape {n.shape}")
    if abs(float(np.linalg.norm(n)) - 1.0) > 1e-12:
        raise ValueError(f"propagation direction must be a unit vector, |n| = {np.linalg.norm(n)}")
    p11 = 1.0 - n[0] * n[0]
    return float(p11 * p11)


_E_DEFAULT = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class SystemParams:
    """Oscillator, graviton-mode, and polarization parameters.

    ``mu`` may be omitted when only the witness magnitude is needed; the
    zero-point length is then unavailable.  ``t = 0`` is allowed (the
    witness vanishes there); negative times are not.
    """

    omega_m: float  # oscillator angular frequency, rad/s
    omega_k: float  # graviton-mode angular frequency, rad/s
    t: float  # evolution time, s
    e1: float = _E_DEFAULT  # polarization component e^1_11
    e2: float = _E_DEFAULT  # polarization component e^2_11
    n: tuple[float, float, float] = (0.0, 0.0, 1.0)  # propagation direction
    mu: float | None = None  # oscillator mass, kg

    def __post_init__(self):
        if self.omega_m <= 0 or self.omega_k <= 0:
            raise ValueError("frequencies must be strictly positive")
        if self.t < 0:
            raise ValueError("evolution time must be nonnegative")
        if self.mu is not None and self.mu <= 0:
            raise ValueError("oscillator mass must be strictly positive")
        object.__setattr__(self, "n", tuple(float(x) for x in self.n))
        target = polarization_constraint(self.n)
        actual = self.e1 * self.e1 + self.e2 * self.e2
        if abs(actual - target) > 1e-9:
            raise ValueError(
                f"polarization components violate the completeness relation: "
                f"e1^2 + e2^2 = {actual}, expected P_11(n)^2 = {target}"
            )


@dataclass(frozen=True)
class DimensionlessCouplings:
    """Derived coupling energies and the dimensionless evolution weights."""

    C1p: float  # coupling energy C'_1, J
    C2p: float  # coupling energy C'_2, J
    eps1: float  # C'_1 t / hbar
    eps2: float  # C'_2 t / hbar
    Omega: float  # witness rate 2|C'_1 + C'_2| / hbar, 1/s
    delta_zpf: float | None  # zero-point length, m (None when mu unknown)


def coupling(constants: PhysicalConstants, params: SystemParams) -> tuple[float, float]:
    """Single-mode coupling energies (C'_1, C'_2) in joules.

    C'_lambda = sqrt(G hbar^3 omega_k^6 / (64 pi^2 c^5 omega_m^2)) * e_lambda.
    """
    prefactor = math.sqrt(
        constants.G
        * constants.hbar**3
        * params.omega_k**6
        / (64.0 * math.pi**2 * constants.c**5 * params.omega_m**2)
    )
    return (prefactor * params.e1, prefactor * params.e2)


def rate_Omega(constants: PhysicalConstants, params: SystemParams) -> float:
    """Witness rate Omega = sqrt(G hbar omega_k^6 / (16 pi^2 c^5 omega_m^2)) |e1+e2|.

    Identical (to rounding) to 2|C'_1 + C'_2| / hbar from :func:`coupling`.
    """
    return math.sqrt(
        constants.G
        * constants.hbar
        * params.omega_k**6
        / (16.0 * math.pi**2 * constants.c**5 * params.omega_m**2)
    ) * abs(params.e1 + params.e2)


def zpf(constants: PhysicalConstants, mu: float, omega_m: float) -> float:
    """Zero-point length sqrt(hbar / (2 mu omega_m))."""
    if mu <= 0 or omega_m <= 0:
        raise ValueError("mass and frequency must be strictly positive")
    return math.sqrt(constants.hbar / (2.0 * mu * omega_m))


def omega_m_from_zpf(constants: PhysicalConstants, mu: float, delta_zpf: float) -> float:
    """Inverse of :func:`zpf`: omega_m = hbar / (2 mu delta_zpf^2)."""
    if mu <= 0 or delta_zpf <= 0:
        raise ValueError("mass and zero-point length must be strictly positive")
    return constants.hbar / (2.0 * mu * delta_zpf**2)


def derive_couplings(constants: PhysicalConstants, params: SystemParams) -> DimensionlessCouplings:
    """All derived coupling quantities for one parameter point."""
    c1p, c2p = coupling(constants, params)
    scale = params.t / constants.hbar
    delta = None if params.mu is None else zpf(constants, params.mu, params.omega_m)
    return DimensionlessCouplings(
        C1p=c1p,
        C2p=c2p,
        eps1=c1p * scale,
        eps2=c2p * scale,
        Omega=rate_Omega(constants, params),
        delta_zpf=delta,
    )


def build_H1_H2(space: FockSpace) -> tuple[Operator, Operator]:
    """The dimensionless Hamiltonian factors H_i = (g_i + g_i†) X^2, X = b + b†."""
    b = annihilator(space, "m")
    x = b + b.adjoint()
    xsq = x @ x
    h_pair = []
    for mode in ("g1", "g2"):
        g = annihilator(space, mode)
        h_pair.append((g + g.adjoint()) @ xsq)
    return h_pair[0], h_pair[1]


def build_hamiltonian(space: FockSpace, C1p: float, C2p: float) -> Operator:
    """Interaction Hamiltonian C'_1 H_1 + C'_2 H_2 on the given space."""
    h1, h2 = build_H1_H2(space)
    return C1p * h1 + C2p * h2
