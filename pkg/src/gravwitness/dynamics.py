"""Exact unitary evolution and first-order perturbative evolution from the vacuum.

Two input scales are supported on purpose: dimensionless weights
(eps1, eps2) of order 1e-2..1e-4 for every accuracy test, and physical
parameters mapped through :mod:`gravwitness.model` for figure reproduction
(eps of order 1e-43: representable, but second-order effects there are far
below double precision resolution, which is why the accuracy tests use the
dimensionless scale).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import MODES, FockSpace, Operator, StateVector, make_space, vacuum
from .model import build_H1_H2

DEFAULT_CUTOFFS = (4, 4, 8)
LEAKAGE_THRESHOLD = 1e-8

_SQRT2 = math.sqrt(2.0)


class CutoffTooSmallError(RuntimeError):
    """Raised when evolution leaks probability onto a top occupation level."""

    def __init__(self, mode: str, leakage: float, threshold: float):
        super().__init__(
            f"cutoff too small for mode {mode}: top-level probability "
            f"{leakage:.3e} exceeds {threshold:.1e}"
        )
        self.mode = mode
        self.leakage = leakage
        self.threshold = threshold


def default_space() -> FockSpace:
    return make_space(*DEFAULT_CUTOFFS)


@lru_cache(maxsize=None)
def hamiltonian_pair(space: FockSpace) -> tuple[Operator, Operator]:
    """Cached (H1, H2) for a space; safe because spaces are frozen values."""
    return build_H1_H2(space)


def expm(mat: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a truncated Taylor series.

    The input is halved until its 1-norm is at most 0.5, the series is
    truncated once a term's norm drops below 1e-16, and the result is
    squared back up.  Adequate and simple at the dimensions used here.
    """
    mat = np.asarray(mat, dtype=complex)
    norm = np.linalg.norm(mat, 1)
    squarings = 0
    if norm > 0.5:
        squarings = int(math.ceil(math.log2(norm / 0.5)))
        mat = mat / (2.0**squarings)
    dim = mat.shape[0]
    result = np.eye(dim, dtype=complex)
    term = np.eye(dim, dtype=complex)
    for k in range(1, 64):
        term = term @ mat / k
        result += term
        if np.linalg.norm(term, 1) < 1e-16:
            break
    else:  # pragma: no cover - norm <= 0.5 converges in ~20 terms
        raise RuntimeError("matrix exponential series failed to converge")
    for _ in range(squarings):
        result = result @ result
    return result


def top_level_leakage(state: StateVector) -> dict[str, float]:
    """Probability sitting on the top occupation level of each mode."""
    prob = np.abs(state.amp) ** 2
    grid = prob.reshape(state.space.cutoffs)
    return {
        "g1": float(grid[-1, :, :].sum()),
        "g2": float(grid[:, -1, :].sum()),
        "m": float(grid[:, :, -1].sum()),
    }


def evolve_exact(
    eps1: float,
    eps2: float,
    space: FockSpace | None = None,
    leakage_threshold: float = LEAKAGE_THRESHOLD,
) -> tuple[StateVector, dict[str, float]]:
    """exp(-i(eps1 H1 + eps2 H2)) |vacuum>, plus the leakage diagnostic.

    Raises CutoffTooSmallError when any mode's top-level probability
    exceeds ``leakage_threshold``; no silent renormalization ever happens.
    """
    if space is None:
        space = default_space()
    h1, h2 = hamiltonian_pair(space)
    u = expm(-1j * (eps1 * h1.mat + eps2 * h2.mat))
    state = StateVector(space, u[:, 0].copy(), normalized=True)
    leakage = top_level_leakage(state)
    worst = max(MODES, key=lambda mode: leakage[mode])
    if leakage[worst] > leakage_threshold:
        raise CutoffTooSmallError(worst, leakage[worst], leakage_threshold)
    return state, leakage


def evolve_first_order(eps1: float, eps2: float, space: FockSpace | None = None) -> StateVector:
    """First-order state |000> - i[eps1(|100> + sqrt2|102>) + eps2(|010> + sqrt2|012>)].

    Exact at this order and deliberately unnormalized (squared norm
    1 + 3 eps1^2 + 3 eps2^2); every other amplitude is exactly zero.
    """
    if space is None:
        space = default_space()
    c1, c2, c3 = space.cutoffs
    if c1 < 2 or c2 < 2 or c3 < 3:
        raise ValueError(
            f"cutoffs {space.cutoffs} too small for the first-order state; need >= (2, 2, 3)"
        )
    amp = np.zeros(space.dim, dtype=complex)
    amp[space.index((0, 0, 0))] = 1.0
    amp[space.index((1, 0, 0))] = -1j * eps1
    amp[space.index((1, 0, 2))] = -1j * eps1 * _SQRT2
    amp[space.index((0, 1, 0))] = -1j * eps2
    amp[space.index((0, 1, 2))] = -1j * eps2 * _SQRT2
    return StateVector(space, amp, normalized=False)


def expect_first_order(op: Operator, hamiltonian: Operator, scale: float = 1.0) -> complex:
    """First-order vacuum expectation <0|O|0> + i*scale*<0|[H, O]|0>.

    ``scale`` is t/hbar when ``hamiltonian`` carries energy units, or 1
    when it is already the dimensionless eps1*H1 + eps2*H2.
    """
    if op.space != hamiltonian.space:
        raise ValueError("operator and Hamiltonian live on different spaces")
    o, h = op.mat, hamiltonian.mat
    ho = h[0, :] @ o[:, 0]
    oh = o[0, :] @ h[:, 0]
    return complex(o[0, 0] + 1j * scale * (ho - oh))


@dataclass(frozen=True)
class OrderFit:
    """Fitted log-log slope of a scaling sequence."""

    exponent: float
    r2: float
    samples: tuple


def fit_leading_order(evaluate, eps_grid) -> OrderFit:
    """Least-squares slope of log(value) vs log(eps) over the grid."""
    eps = [float(e) for e in eps_grid]
    if len(eps) < 3:
        raise ValueError(f"need at least 3 grid points to fit, got {len(eps)}")
    values = [float(evaluate(e)) for e in eps]
    if any(v <= 0 for v in values):
        raise ValueError(f"cannot fit leading order: nonpositive values in {values}")
    log_e = np.log(eps)
    log_v = np.log(values)
    slope, intercept = np.polyfit(log_e, log_v, 1)
    fitted = slope * log_e + intercept
    ss_res = float(np.sum((log_v - fitted) ** 2))
    ss_tot = float(np.sum((log_v - log_v.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return OrderFit(
        exponent=float(slope),
        r2=r2,
        samples=tuple(zip(eps, values)),
    )


def extrapolate_to_zero(xs, ys) -> float:
    """Richardson-style polynomial extrapolation of samples (x, y) to x = 0.

    Neville's scheme evaluated at zero; with a geometric grid this removes
    the leading error terms order by order.
    """
    xs = [float(x) for x in xs]
    p = [float(y) for y in ys]
    n = len(xs)
    if n != len(p) or n < 2:
        raise ValueError("need matching x/y samples, at least two")
    for level in range(1, n):
        for i in range(n - level):
            p[i] = (xs[i] * p[i + 1] - xs[i + level] * p[i]) / (xs[i] - xs[i + level])
    return p[0]
