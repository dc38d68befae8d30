"""Truncated three-mode Fock space: basis indexing, states, and ladder operators.

The three modes are the two graviton polarizations (``g1``, ``g2``) and the
matter oscillator (``m``), always in that order.  A cutoff ``c`` keeps the
occupations ``0..c-1``, so the per-mode dimension equals the cutoff and the
composite dimension is the product of the three cutoffs.  The occupation
triple ``(n1, n2, n3)`` lives at row-major index ``n1*c2*c3 + n2*c3 + n3``.

Everything here is a dense complex matrix or vector; at the dimensions this
package uses (<= ~10^3) dense storage wins over sparse bookkeeping.  Values
are treated as immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MODES = ("g1", "g2", "m")

# Tolerance used wherever a state is required to be normalized.
NORM_TOL = 1e-8


@dataclass(frozen=True)
class FockSpace:
    """Composite Hilbert space of the two graviton modes and the oscillator."""

    cutoffs: tuple[int, int, int]

    def __post_init__(self):
        if len(self.cutoffs) != 3:
            raise ValueError(f"expected three cutoffs, got {len(self.cutoffs)}")
        if any(int(c) != c or c < 1 for c in self.cutoffs):
            raise ValueError(f"cutoffs must be positive integers, got {self.cutoffs}")
        object.__setattr__(self, "cutoffs", tuple(int(c) for c in self.cutoffs))

    @property
    def dim(self) -> int:
        c1, c2, c3 = self.cutoffs
        return c1 * c2 * c3

    def axis(self, mode: str) -> int:
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
        return MODES.index(mode)

    def index(self, occupations) -> int:
        """Row-major basis index of an occupation triple."""
        c1, c2, c3 = self.cutoffs
        n1, n2, n3 = occupations
        for n, c, mode in zip((n1, n2, n3), self.cutoffs, MODES):
            if not 0 <= n < c:
                raise ValueError(
                    f"occupation {n} out of range [0, {c}) for mode {mode}"
                )
        return n1 * (c2 * c3) + n2 * c3 + n3

    def occupations(self, index: int) -> tuple[int, int, int]:
        """Occupation triple at a basis index; inverse of :meth:`index`."""
        if not 0 <= index < self.dim:
            raise ValueError(f"basis index {index} out of range [0, {self.dim})")
        _, c2, c3 = self.cutoffs
        n1, rem = divmod(int(index), c2 * c3)
        n2, n3 = divmod(rem, c3)
        return (n1, n2, n3)


def make_space(c1: int, c2: int, c3: int) -> FockSpace:
    """Build the composite space with the given per-mode cutoffs."""
    return FockSpace((c1, c2, c3))


def _check_same_space(a, b):
    if a.space != b.space:
        raise ValueError(
            f"space mismatch: {a.space.cutoffs} vs {b.space.cutoffs}"
        )


@dataclass
class StateVector:
    """Complex amplitude vector over the occupation basis of a space.

    ``normalized`` tags whether the state is meant to be unit norm; the
    perturbative evolution returns states explicitly tagged unnormalized.
    """

    space: FockSpace
    amp: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        amp = np.asarray(self.amp, dtype=complex)
        if amp.shape != (self.space.dim,):
            raise ValueError(
                f"amplitude vector has shape {amp.shape}, expected ({self.space.dim},)"
            )
        self.amp = amp

    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))

    def overlap(self, other: "StateVector") -> complex:
        """Inner product <self|other>."""
        _check_same_space(self, other)
        return complex(np.vdot(self.amp, other.amp))


@dataclass
class Operator:
    """Dense operator on the composite space."""

    space: FockSpace
    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        d = self.space.dim
        if mat.shape != (d, d):
            raise ValueError(f"matrix has shape {mat.shape}, expected ({d}, {d})")
        self.mat = mat

    def adjoint(self) -> "Operator":
        return Operator(self.space, self.mat.conj().T)

    def apply(self, state: StateVector) -> StateVector:
        _check_same_space(self, state)
        return StateVector(self.space, self.mat @ state.amp, normalized=False)

    def expect(self, state: StateVector) -> complex:
        """<psi| self |psi> for the given state."""
        _check_same_space(self, state)
        return complex(np.vdot(state.amp, self.mat @ state.amp))

    def __add__(self, other: "Operator") -> "Operator":
        _check_same_space(self, other)
        return Operator(self.space, self.mat + other.mat)

    def __sub__(self, other: "Operator") -> "Operator":
        _check_same_space(self, other)
        return Operator(self.space, self.mat - other.mat)

    def __neg__(self) -> "Operator":
        return Operator(self.space, -self.mat)

    def __matmul__(self, other: "Operator") -> "Operator":
        """Matrix product in written order."""
        _check_same_space(self, other)
        return Operator(self.space, self.mat @ other.mat)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.space, self.mat * complex(scalar))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Operator":
        if int(n) != n or n < 0:
            raise ValueError(f"operator power must be a non-negative integer, got {n}")
        return Operator(self.space, np.linalg.matrix_power(self.mat, int(n)))


def identity(space: FockSpace) -> Operator:
    return Operator(space, np.eye(space.dim, dtype=complex))


def vacuum(space: FockSpace) -> StateVector:
    """The ground state |000>."""
    amp = np.zeros(space.dim, dtype=complex)
    amp[0] = 1.0
    return StateVector(space, amp)


def basis_state(space: FockSpace, occupations) -> StateVector:
    """The basis state with the given occupation triple."""
    amp = np.zeros(space.dim, dtype=complex)
    amp[space.index(occupations)] = 1.0
    return StateVector(space, amp)


def _single_mode_annihilator(c: int) -> np.ndarray:
    # a|n> = sqrt(n)|n-1> on occupations 0..c-1
    m = np.zeros((c, c), dtype=complex)
    for n in range(1, c):
        m[n - 1, n] = np.sqrt(n)
    return m


def annihilator(space: FockSpace, mode: str) -> Operator:
    """Single-mode annihilation operator embedded in the composite space."""
    k = space.axis(mode)
    factors = [np.eye(c, dtype=complex) for c in space.cutoffs]
    factors[k] = _single_mode_annihilator(space.cutoffs[k])
    return Operator(space, np.kron(np.kron(factors[0], factors[1]), factors[2]))


def creator(space: FockSpace, mode: str) -> Operator:
    return annihilator(space, mode).adjoint()


def number_op(space: FockSpace, mode: str) -> Operator:
    a = annihilator(space, mode)
    return a.adjoint() @ a


@dataclass
class Ensemble:
    """Convex mixture of pure states, as (weight, state) pairs.

    Mixtures of biseparable products are exactly representable this way and
    expectation values reduce to convex combinations, so no density matrix
    is ever materialized.
    """

    components: tuple

    def __post_init__(self):
        comps = tuple((float(w), psi) for w, psi in self.components)
        if not comps:
            raise ValueError("ensemble needs at least one component")
        if any(w < 0 for w, _ in comps):
            raise ValueError("ensemble weights must be nonnegative")
        total = sum(w for w, _ in comps)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"ensemble weights sum to {total}, expected 1")
        space = comps[0][1].space
        for _, psi in comps:
            if psi.space != space:
                raise ValueError("ensemble components live on different spaces")
            if abs(psi.norm() - 1.0) > NORM_TOL:
                raise ValueError("ensemble components must be normalized")
        self.components = comps

    @property
    def space(self) -> FockSpace:
        return self.components[0][1].space

    def expect(self, op: Operator) -> complex:
        return sum(w * op.expect(psi) for w, psi in self.components)
