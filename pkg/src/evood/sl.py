"""Subjective-logic opinion algebra over Dirichlet evidence.

A multinomial opinion assigns a belief mass to each of K classes plus an
explicit uncertainty mass, with beliefs + uncertainty = 1.  Opinions map
bijectively to Dirichlet concentrations alpha = evidence + base_rate * W,
where W is the non-informative prior weight.  We use the subjective-logic
defaults throughout: uniform base rates 1/K and W = K, so alpha = r + 1.

Everything here is a pure function of its inputs; values are immutable
after construction.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

_TOL = 1e-12


def _as_vector(x, name: str) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise DomainError(f"{name} must be a 1-D vector, got shape {v.shape}")
    return v


@dataclass(frozen=True)
class Opinion:
    """Belief masses, uncertainty mass, and base rates over K classes.

    Invariants: sum(beliefs) + uncertainty = 1, sum(base_rates) = 1, K >= 2.
    """

    beliefs: np.ndarray
    uncertainty: float
    base_rates: np.ndarray

    def __post_init__(self):
        b = _as_vector(self.beliefs, "beliefs")
        a = _as_vector(self.base_rates, "base_rates")
        object.__setattr__(self, "beliefs", b)
        object.__setattr__(self, "base_rates", a)
        object.__setattr__(self, "uncertainty", float(self.uncertainty))
        if b.shape[0] < 2:
            raise DomainError(f"an opinion needs K >= 2 classes, got K={b.shape[0]}")
        if a.shape != b.shape:
            raise DomainError(f"base_rates shape {a.shape} != beliefs shape {b.shape}")
        if np.any(b < 0) or self.uncertainty < 0:
            raise DomainError("belief and uncertainty masses must be nonnegative")
        if abs(b.sum() + self.uncertainty - 1.0) > _TOL:
            raise DomainError(
                f"beliefs + uncertainty must sum to 1, got {b.sum() + self.uncertainty!r}"
            )
        if np.any(a <= 0) or abs(a.sum() - 1.0) > _TOL:
            raise DomainError("base_rates must be positive and sum to 1")

    @property
    def num_classes(self) -> int:
        return self.beliefs.shape[0]


@dataclass(frozen=True)
class DirichletParams:
    """Per-class Dirichlet concentrations with alpha_j >= 1.

    Evidence r = alpha - 1, strength S = sum(alpha), prior weight W = K.
    """

    alpha: np.ndarray

    def __post_init__(self):
        a = _as_vector(self.alpha, "alpha")
        object.__setattr__(self, "alpha", a)
        if a.shape[0] < 2:
            raise DomainError(f"need K >= 2 classes, got K={a.shape[0]}")
        if np.any(a < 1.0):
            raise DomainError(f"alpha must be >= 1 elementwise (nonnegative evidence), got {a}")

    @property
    def num_classes(self) -> int:
        return self.alpha.shape[0]

    @property
    def evidence(self) -> np.ndarray:
        return self.alpha - 1.0

    @property
    def strength(self) -> float:
        return float(self.alpha.sum())

    @property
    def prior_weight(self) -> float:
        return float(self.num_classes)


def uniform_base_rates(k: int) -> np.ndarray:
    return np.full(k, 1.0 / k)


def opinion_from_evidence(evidence, base_rates=None) -> Opinion:
    """Map an evidence vector to an opinion: b = r/S, u = W/S, S = sum(r) + W.

    The prior weight W equals K regardless of the base rates.
    """
    r = _as_vector(evidence, "evidence")
    k = r.shape[0]
    if k < 2:
        raise DomainError(f"need K >= 2 classes, got K={k}")
    if np.any(r < 0):
        raise DomainError(f"evidence must be nonnegative, got {r}")
    a = uniform_base_rates(k) if base_rates is None else _as_vector(base_rates, "base_rates")
    if a.shape[0] != k:
        raise DomainError(f"base_rates has {a.shape[0]} entries for K={k} classes")
    w = float(k)
    s = r.sum() + w
    beliefs = r / s
    return Opinion(beliefs=beliefs, uncertainty=w / s, base_rates=a)


def projected_probability(op: Opinion) -> np.ndarray:
    """p_j = b_j + a_j * u."""
    return op.beliefs + op.base_rates * op.uncertainty


def expected_probability(d: DirichletParams) -> np.ndarray:
    """Mean of the Dirichlet: E_j = alpha_j / S."""
    return d.alpha / d.strength


def vacuity(d: DirichletParams) -> float:
    """Uncertainty from lack of evidence: W/S. 1 with no evidence, -> 0 as
    evidence grows."""
    return d.prior_weight / d.strength


def mass_balance(b_j: float, b_i: float) -> float:
    """Relative balance of two belief masses: 1 - |b_j-b_i|/(b_j+b_i), or 0
    when either mass is zero. Symmetric."""
    if b_j < 0 or b_i < 0:
        raise DomainError("belief masses must be nonnegative")
    if b_j * b_i == 0.0:
        return 0.0
    return 1.0 - abs(b_j - b_i) / (b_j + b_i)


def dissonance(d: DirichletParams) -> float:
    """Uncertainty from conflicting evidence.

    Sum over classes i of  b_i * sum_{j!=i} b_j Bal(b_j, b_i) / sum_{j!=i} b_j.
    A term whose denominator is zero contributes 0, which continuously
    extends the formula to one-sided opinions (zero conflict).
    """
    b = opinion_from_evidence(d.evidence).beliefs
    k = b.shape[0]
    total = 0.0
    for i in range(k):
        denom = b.sum() - b[i]
        if denom == 0.0 or b[i] == 0.0:
            continue
        num = sum(b[j] * mass_balance(b[j], b[i]) for j in range(k) if j != i)
        total += b[i] * num / denom
    return total


def shannon_entropy(p, normalized: bool = False) -> float:
    """-sum p ln p, with 0 ln 0 = 0; divided by ln K when normalized."""
    pv = _as_vector(p, "p")
    if np.any(pv < 0) or abs(pv.sum() - 1.0) > 1e-9:
        raise DomainError(f"p must be a probability vector, got {pv}")
    nz = pv[pv > 0]
    h = float(-(nz * np.log(nz)).sum())
    if normalized:
        h /= math.log(pv.shape[0])
    return h
