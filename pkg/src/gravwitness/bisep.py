"""Random biseparable states and mixtures to falsify the witness.

Product states across a bipartition can never violate the matching
separability inequality, and biseparable mixtures can never make the
sum-form witness positive, so every sampled input here must leave the
detector silent.  Sampling draws isotropic complex Gaussian vectors and
normalizes (uniform on the sphere); each sample derives its own RNG
stream from (seed, tags...) so results are independent of execution
order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import Ensemble, FockSpace, StateVector
from .witness import Bipartition, WitnessReport, report_on_ensemble, report_on_state

TOLERANCE = 1e-10

_BIPARTITIONS = tuple(Bipartition)


class FalsificationError(AssertionError):
    """A biseparable input made a witness positive beyond tolerance."""

    def __init__(self, invariant: str, value: float, seed, state=None):
        super().__init__(
            f"falsification failure: {invariant} = {value!r} exceeds {TOLERANCE} "
            f"for sample seed {seed}"
        )
        self.invariant = invariant
        self.value = value
        self.seed = seed
        self.state = state


def _seed_tuple(seed) -> tuple[int, ...]:
    if isinstance(seed, (int, np.integer)):
        return (int(seed),)
    return tuple(int(s) for s in seed)


def _gaussian_unit(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_pure_product(space: FockSpace, bipartition: Bipartition, seed) -> StateVector:
    """Random pure state that is a product across the given bipartition.

    Independent Gaussian unit vectors on the singleton factor and on the
    pair factor, tensored back in mode order.  Deterministic given seed.
    """
    rng = np.random.default_rng(_seed_tuple(seed))
    k = space.axis(bipartition.singleton)
    cutoffs = space.cutoffs
    others = [axis for axis in range(3) if axis != k]
    single = _gaussian_unit(rng, cutoffs[k])
    pair = _gaussian_unit(rng, cutoffs[others[0]] * cutoffs[others[1]])
    pair = pair.reshape(cutoffs[others[0]], cutoffs[others[1]])
    amp = np.multiply.outer(single, pair)  # axes (k, others[0], others[1])
    amp = np.moveaxis(amp, (0, 1, 2), (k, others[0], others[1]))
    return StateVector(space, amp.reshape(-1), normalized=True)


def random_biseparable_ensemble(space: FockSpace, per_class: int, seed) -> Ensemble:
    """Mixture of 3*per_class pure products, per_class from each bipartition class.

    Weights are random, positive, and sum to one.
    """
    if per_class < 1:
        raise ValueError(f"per_class must be >= 1, got {per_class}")
    base = _seed_tuple(seed)
    states = []
    for class_index, bipartition in enumerate(_BIPARTITIONS):
        for j in range(per_class):
            states.append(random_pure_product(space, bipartition, base + (class_index, j)))
    rng = np.random.default_rng(base + (len(_BIPARTITIONS),))
    weights = rng.random(len(states))
    weights /= weights.sum()
    # nudge the last weight so the sum is exactly representable as 1
    weights[-1] += 1.0 - weights.sum()
    return Ensemble(tuple(zip(weights, states)))


@dataclass(frozen=True)
class FalsificationSummary:
    """Maxima observed over all sampled biseparable inputs (all should be <= 0)."""

    cutoffs: tuple
    seed: int
    n_products: int
    n_ensembles: int
    per_class: int
    max_insep: dict  # Bipartition -> max I over matching product states
    max_g2_pure: float  # max G2 over all pure biseparable samples
    max_g1_ensembles: float  # max G1 over sampled mixtures (the proven bound)
    max_g2_ensembles: float  # measured on mixtures but not asserted
    violations: int

    def as_text(self) -> str:
        lines = [
            f"falsification run: seed={self.seed} cutoffs={self.cutoffs}",
            f"  product states per bipartition: {self.n_products}",
            f"  biseparable ensembles: {self.n_ensembles} (x{3 * self.per_class} components)",
        ]
        for bipartition in _BIPARTITIONS:
            lines.append(
                f"  max I({bipartition.value}) on products: {self.max_insep[bipartition]:.3e}"
            )
        lines += [
            f"  max G2 on pure biseparables: {self.max_g2_pure:.3e}",
            f"  max G1 on ensembles: {self.max_g1_ensembles:.3e}",
            f"  max G2 on ensembles (logged, not asserted): {self.max_g2_ensembles:.3e}",
            f"  violations: {self.violations}",
        ]
        return "\n".join(lines)

    def as_csv(self) -> str:
        header = (
            "seed,n_products,n_ensembles,per_class,"
            "max_i_g1_g2m,max_i_g2_g1m,max_i_m_g1g2,"
            "max_g2_pure,max_g1_ensembles,max_g2_ensembles,violations"
        )
        row = ",".join(
            repr(v)
            for v in (
                self.seed,
                self.n_products,
                self.n_ensembles,
                self.per_class,
                self.max_insep[Bipartition.G1_VS_G2M],
                self.max_insep[Bipartition.G2_VS_G1M],
                self.max_insep[Bipartition.M_VS_G1G2],
                self.max_g2_pure,
                self.max_g1_ensembles,
                self.max_g2_ensembles,
                self.violations,
            )
        )
        return header + "\n" + row + "\n"


def falsification_run(
    space: FockSpace,
    n_products: int = 1000,
    n_ensembles: int = 500,
    seed: int = 1,
    per_class: int = 1,
) -> FalsificationSummary:
    """Assert the witness never fires on sampled biseparable inputs.

    Checks, in order: I <= tol on products of each bipartition, G2 <= tol
    on the same pure biseparables, and G1 <= tol on random biseparable
    mixtures.  G2 on mixtures is measured and reported but not asserted;
    only the rigorously derived bounds gate the run.  Raises
    FalsificationError naming the offending sample on any violation.
    """
    if n_products < 1 or n_ensembles < 1:
        raise ValueError("sample counts must be >= 1")
    base = (int(seed),)
    max_insep = {bipartition: -np.inf for bipartition in _BIPARTITIONS}
    max_g2_pure = -np.inf
    for class_index, bipartition in enumerate(_BIPARTITIONS):
        for k in range(n_products):
            sample_seed = base + (0, class_index, k)
            psi = random_pure_product(space, bipartition, sample_seed)
            report = report_on_state(psi)
            i_value = report.insep[bipartition]
            if i_value > TOLERANCE:
                raise FalsificationError(
                    f"I({bipartition.value}) on a product state", i_value, sample_seed, psi
                )
            if report.g2_value > TOLERANCE:
                raise FalsificationError(
                    "G2 on a pure biseparable state", report.g2_value, sample_seed, psi
                )
            max_insep[bipartition] = max(max_insep[bipartition], i_value)
            max_g2_pure = max(max_g2_pure, report.g2_value)
    max_g1_ens = -np.inf
    max_g2_ens = -np.inf
    for k in range(n_ensembles):
        sample_seed = base + (1, k)
        ensemble = random_biseparable_ensemble(space, per_class, sample_seed)
        report = report_on_ensemble(ensemble)
        if report.g1_value > TOLERANCE:
            raise FalsificationError(
                "G1 on a biseparable ensemble", report.g1_value, sample_seed, ensemble
            )
        max_g1_ens = max(max_g1_ens, report.g1_value)
        max_g2_ens = max(max_g2_ens, report.g2_value)
    return FalsificationSummary(
        cutoffs=space.cutoffs,
        seed=int(seed),
        n_products=n_products,
        n_ensembles=n_ensembles,
        per_class=per_class,
        max_insep=max_insep,
        max_g2_pure=float(max_g2_pure),
        max_g1_ensembles=float(max_g1_ens),
        max_g2_ensembles=float(max_g2_ens),
        violations=0,
    )
