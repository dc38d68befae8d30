"""Separability inequality, full-inseparability values, and the genuine
tripartite witnesses on perturbative and arbitrary states.

The probe operator is A = (1 + g1)(1 + g2) b^2.  Per bipartition, the
factor of A supported on the singleton side is A^(1) and the rest is
A^(2); the inseparability value is then

    I = |<A^(1) A^(2)>| - sqrt(<A^(1)† A^(1)> <A^(2)† A^(2)>),

positive I for all three splits meaning full inseparability.  The witness
G1 subtracts all three square-root terms (valid for biseparable mixtures),
G2 only the largest (valid for pure biseparable states); positive G2
certifies genuine tripartite entanglement.

Every <M†M> is computed as the squared norm of M|psi>, which is
nonnegative by construction and immune to cancellation at tiny couplings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from . import opdsl
from .fock import Ensemble, FockSpace, Operator, StateVector, annihilator, identity
from .model import PhysicalConstants, SystemParams, derive_couplings, rate_Omega
from .dynamics import expect_first_order, hamiltonian_pair, make_space

NORM_TOL = 1e-8


class Bipartition(Enum):
    """The three splits of the tripartite system, named singleton|rest."""

    G1_VS_G2M = "g1|g2m"
    G2_VS_G1M = "g2|g1m"
    M_VS_G1G2 = "m|g1g2"

    @property
    def singleton(self) -> str:
        return {"g1|g2m": "g1", "g2|g1m": "g2", "m|g1g2": "m"}[self.value]


# Operator split of A per bipartition, in DSL form: (singleton side, rest).
_SPLIT_TEXT = {
    Bipartition.G1_VS_G2M: ("1 + g1", "(1 + g2)*b^2"),
    Bipartition.G2_VS_G1M: ("1 + g2", "(1 + g1)*b^2"),
    Bipartition.M_VS_G1G2: ("b^2", "(1 + g1)*(1 + g2)"),
}


@dataclass
class _WitnessOps:
    a: Operator  # (1+g1)(1+g2) b^2
    e1: Operator  # 1+g1
    e2: Operator  # 1+g2
    e12: Operator  # (1+g1)(1+g2)
    b2: Operator  # b^2
    e2b2: Operator  # (1+g2) b^2
    e1b2: Operator  # (1+g1) b^2


@lru_cache(maxsize=None)
def _witness_ops(space: FockSpace) -> _WitnessOps:
    for bipartition, (lo, hi) in _SPLIT_TEXT.items():
        singleton = {bipartition.singleton}
        rest = {"g1", "g2", "m"} - singleton
        if not opdsl.support(opdsl.parse(lo)) <= singleton:
            raise ValueError(f"split {lo!r} strays outside mode {singleton}")
        if not opdsl.support(opdsl.parse(hi)) <= rest:
            raise ValueError(f"split {hi!r} strays outside modes {rest}")
    one = identity(space)
    e1 = one + annihilator(space, "g1")
    e2 = one + annihilator(space, "g2")
    b = annihilator(space, "m")
    b2 = b @ b
    return _WitnessOps(
        a=e1 @ e2 @ b2,
        e1=e1,
        e2=e2,
        e12=e1 @ e2,
        b2=b2,
        e2b2=e2 @ b2,
        e1b2=e1 @ b2,
    )


def witness_operator_A(space: FockSpace) -> Operator:
    """The probe operator (1 + g1)(1 + g2) b^2."""
    return _witness_ops(space).a


@dataclass(frozen=True)
class WitnessReport:
    """All witness ingredients evaluated on one state or ensemble."""

    lhs_abs: float  # |<(1+g1)(1+g2)b^2>|
    o1: float  # sqrt(<(1+g1†)(1+g1)> <(1+g2†)(1+g2) b†² b²>)
    o2: float  # sqrt(<(1+g2†)(1+g2)> <(1+g1†)(1+g1) b†² b²>)
    o3: float  # sqrt(<(1+g1†)(1+g1)(1+g2†)(1+g2)> <b†² b²>)
    g1_value: float  # lhs_abs - (o1 + o2 + o3)
    g2_value: float  # lhs_abs - max(o1, o2, o3)
    insep: dict  # Bipartition -> I value

    @classmethod
    def from_ingredients(cls, lhs_abs: float, o1: float, o2: float, o3: float) -> "WitnessReport":
        return cls(
            lhs_abs=lhs_abs,
            o1=o1,
            o2=o2,
            o3=o3,
            g1_value=lhs_abs - (o1 + o2 + o3),
            g2_value=lhs_abs - max(o1, o2, o3),
            insep={
                Bipartition.G1_VS_G2M: lhs_abs - o1,
                Bipartition.G2_VS_G1M: lhs_abs - o2,
                Bipartition.M_VS_G1G2: lhs_abs - o3,
            },
        )


def _sq_norm(op: Operator, amp: np.ndarray) -> float:
    v = op.mat @ amp
    return float(np.real(np.vdot(v, v)))


def report_on_state(psi: StateVector) -> WitnessReport:
    """Witness report for one normalized state."""
    if abs(psi.norm() - 1.0) > NORM_TOL:
        raise ValueError(f"state not normalized: |psi| = {psi.norm()!r}")
    ops = _witness_ops(psi.space)
    amp = psi.amp
    lhs = abs(complex(np.vdot(amp, ops.a.mat @ amp)))
    s_e1 = _sq_norm(ops.e1, amp)
    s_e2 = _sq_norm(ops.e2, amp)
    s_e12 = _sq_norm(ops.e12, amp)
    s_b2 = _sq_norm(ops.b2, amp)
    s_e2b2 = _sq_norm(ops.e2b2, amp)
    s_e1b2 = _sq_norm(ops.e1b2, amp)
    return WitnessReport.from_ingredients(
        lhs_abs=lhs,
        o1=math.sqrt(s_e1 * s_e2b2),
        o2=math.sqrt(s_e2 * s_e1b2),
        o3=math.sqrt(s_e12 * s_b2),
    )


def report_on_ensemble(ensemble: Ensemble) -> WitnessReport:
    """Witness report for a convex mixture; expectations are weight-averaged."""
    ops = _witness_ops(ensemble.space)
    lhs_acc = 0.0 + 0.0j
    sq_acc = np.zeros(6)
    for weight, psi in ensemble.components:
        amp = psi.amp
        lhs_acc += weight * complex(np.vdot(amp, ops.a.mat @ amp))
        sq_acc += weight * np.array(
            [
                _sq_norm(ops.e1, amp),
                _sq_norm(ops.e2, amp),
                _sq_norm(ops.e12, amp),
                _sq_norm(ops.b2, amp),
                _sq_norm(ops.e2b2, amp),
                _sq_norm(ops.e1b2, amp),
            ]
        )
    s_e1, s_e2, s_e12, s_b2, s_e2b2, s_e1b2 = sq_acc
    return WitnessReport.from_ingredients(
        lhs_abs=abs(lhs_acc),
        o1=math.sqrt(s_e1 * s_e2b2),
        o2=math.sqrt(s_e2 * s_e1b2),
        o3=math.sqrt(s_e12 * s_b2),
    )


_FIRST_ORDER_SPACE = make_space(2, 2, 3)


def first_order_report(eps1: float, eps2: float, space: FockSpace | None = None) -> WitnessReport:
    """Witness report at strict first perturbative order.

    Every ingredient goes through the first-order expectation machinery
    (no closed-form shortcut); the result equals 2|eps1 + eps2| for the
    left-hand side with all square-root terms vanishing.
    """
    if space is None:
        space = _FIRST_ORDER_SPACE
    h1, h2 = hamiltonian_pair(space)
    h = eps1 * h1 + eps2 * h2
    ops = _witness_ops(space)
    lhs = abs(expect_first_order(ops.a, h))

    def mtm_expect(op: Operator) -> float:
        value = expect_first_order(op.adjoint() @ op, h)
        return max(float(value.real), 0.0)

    s_e1 = mtm_expect(ops.e1)
    s_e2 = mtm_expect(ops.e2)
    s_e12 = mtm_expect(ops.e12)
    s_b2 = mtm_expect(ops.b2)
    s_e2b2 = mtm_expect(ops.e2b2)
    s_e1b2 = mtm_expect(ops.e1b2)
    return WitnessReport.from_ingredients(
        lhs_abs=lhs,
        o1=math.sqrt(s_e1 * s_e2b2),
        o2=math.sqrt(s_e2 * s_e1b2),
        o3=math.sqrt(s_e12 * s_b2),
    )


def first_order_report_physical(
    constants: PhysicalConstants, params: SystemParams
) -> WitnessReport:
    """First-order report driven by physical parameters via eps_i = C'_i t / hbar."""
    derived = derive_couplings(constants, params)
    return first_order_report(derived.eps1, derived.eps2)


def analytic_witness(constants: PhysicalConstants, params: SystemParams) -> float:
    """Closed-form witness magnitude G = Omega * t."""
    return rate_Omega(constants, params) * params.t
