"""Pre- and post-selected ensembles: ABL probabilities and weak values.

Time evolution between the two selections is taken to be the identity;
callers wanting a Hamiltonian should evolve the states themselves.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .hilbert import (
    STRUCT_TOL,
    HilbertError,
    SpectralObservable,
    StateVector,
    as_operator,
    commutator_norm,
    inner,
    matrix_element,
)

EPS_OVERLAP = 1e-8
WEAK_TOL = 1e-9
# probability slack for is_definite; amplitudes of the other branches stay
# below 1e-10 relative, which keeps the weak value within 1e-9 of the eigenvalue
DEFINITE_TOL = 1e-20


class PPSError(ValueError):
    pass


class InconsistentPPSError(PPSError):
    """Every outcome branch has zero amplitude to reach the post-selection."""


@dataclass(frozen=True, eq=False)
class PPSEnsemble:
    pre: StateVector
    post: StateVector
    eps_overlap: float = EPS_OVERLAP
    overlap: complex = field(init=False)

    def __post_init__(self):
        if self.pre.dim != self.post.dim:
            raise PPSError(f"pre dim {self.pre.dim} != post dim {self.post.dim}")
        ov = inner(self.post, self.pre)
        if abs(ov) <= self.eps_overlap:
            raise PPSError(f"|<post|pre>| = {abs(ov):.3g} is below {self.eps_overlap:g}")
        object.__setattr__(self, "overlap", ov)

    @property
    def dim(self) -> int:
        return self.pre.dim

    def amplitude(self, op: np.ndarray) -> complex:
        """``<post| op |pre>``."""
        return matrix_element(self.post, op, self.pre)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Discrete distribution over outcome labels (eigenvalues or tuples of them)."""

    entries: tuple[tuple[Hashable, float], ...]

    def __post_init__(self):
        probs = np.array([p for _, p in self.entries])
        if np.any(probs < -1e-12) or abs(probs.sum() - 1) > 1e-10:
            raise PPSError(f"invalid distribution {self.entries}")

    def prob(self, label) -> float:
        key = _label(label)
        for lab, p in self.entries:
            if lab == key:
                return p
        return 0.0

    def as_dict(self) -> dict:
        return dict(self.entries)

    def products(self) -> "OutcomeDistribution":
        """Distribution of the product of the outcomes in each tuple label."""
        acc: dict[float, float] = {}
        for lab, p in self.entries:
            key = float(np.prod(lab)) if isinstance(lab, tuple) else float(lab)
            acc[key] = acc.get(key, 0.0) + p
        return OutcomeDistribution(tuple(sorted(acc.items(), key=lambda kv: -kv[0])))


def _label(x):
    if isinstance(x, (tuple, list)):
        return tuple(float(v) for v in x)
    return float(x)


def _check_dim(pps: PPSEnsemble, dim: int):
    if dim != pps.dim:
        raise PPSError(f"observable dim {dim} != PPS dim {pps.dim}")


def abl(pps: PPSEnsemble, obs: SpectralObservable) -> OutcomeDistribution:
    """Ideal-measurement outcome probabilities between pre- and post-selection."""
    _check_dim(pps, obs.dim)
    weights = [abs(pps.amplitude(p)) ** 2 for _, p in obs.spectrum]
    total = sum(weights)
    if total <= 1e-300:
        raise InconsistentPPSError(f"inconsistent PPS/observable: {obs.name}")
    return OutcomeDistribution(tuple((lam, w / total) for (lam, _), w in zip(obs.spectrum, weights)))


def weak_value(pps: PPSEnsemble, op) -> complex:
    """``<post|A|pre> / <post|pre>``; accepts an operator or a SpectralObservable."""
    if isinstance(op, SpectralObservable):
        op = op.op
    op = as_operator(op)
    _check_dim(pps, op.shape[0])
    return pps.amplitude(op) / pps.overlap


def is_definite(pps: PPSEnsemble, obs: SpectralObservable, tol: float = DEFINITE_TOL) -> float | None:
    """Eigenvalue found with certainty by an ideal measurement, or ``None``."""
    entries = abl(pps, obs).entries
    for k, (lam, _) in enumerate(entries):
        if sum(p for j, (_, p) in enumerate(entries) if j != k) <= tol:
            return lam
    return None


def sequential_distribution(pps: PPSEnsemble, chain: Sequence[SpectralObservable]) -> OutcomeDistribution:
    """Joint outcome distribution for ideal measurements made in ``chain`` order.

    Each outcome tuple (b1, ..., bn) is weighted by
    ``|<post| P_bn ... P_b1 |pre>|^2``; every tuple of eigenvalues is listed,
    including impossible ones.
    """
    if not chain:
        raise PPSError("empty measurement chain")
    for obs in chain:
        _check_dim(pps, obs.dim)
    labels, weights = [], []
    for combo in itertools.product(*(obs.spectrum for obs in chain)):
        v = pps.pre.amps
        for _, p in combo:
            v = p @ v
        labels.append(tuple(lam for lam, _ in combo))
        weights.append(abs(np.vdot(pps.post.amps, v)) ** 2)
    total = sum(weights)
    if total <= 1e-300:
        raise InconsistentPPSError("inconsistent PPS/chain: " + ", ".join(o.name for o in chain))
    return OutcomeDistribution(tuple((lab, w / total) for lab, w in zip(labels, weights)))


@dataclass(frozen=True)
class ProductRuleAudit:
    a_weak: complex
    b_weak: complex
    ab_weak: complex
    violation: bool
    joint: OutcomeDistribution

    @property
    def gap(self) -> float:
        return abs(self.ab_weak - self.a_weak * self.b_weak)


def product_rule_audit(
    pps: PPSEnsemble, a: SpectralObservable, b: SpectralObservable, tol: float = WEAK_TOL
) -> ProductRuleAudit:
    """Compare ``(AB)_w`` with ``A_w * B_w`` for a commuting pair."""
    if commutator_norm(a.op, b.op) > STRUCT_TOL:
        raise PPSError(f"{a.name} and {b.name} do not commute")
    aw, bw = weak_value(pps, a.op), weak_value(pps, b.op)
    abw = weak_value(pps, a.op @ b.op)
    return ProductRuleAudit(aw, bw, abw, abs(abw - aw * bw) > tol, sequential_distribution(pps, [a, b]))


def expectation_decomposition(
    pre: StateVector, op, basis: Sequence[StateVector], tol: float = STRUCT_TOL
) -> float:
    """Expectation of ``op`` in ``pre`` rebuilt from weak values over a post-selection basis.

    Sum over basis states of ``|<f|pre>|^2 Re(A_w(f))``. Basis states nearly
    orthogonal to ``pre`` have an ill-conditioned weak value; for those the
    term is evaluated with the overlap cancelled.
    """
    op = as_operator(op, pre.dim)
    if any(f.dim != pre.dim for f in basis):
        raise PPSError("basis dimension mismatch")
    gram = np.array([[np.vdot(f.amps, g.amps) for g in basis] for f in basis])
    if len(basis) != pre.dim or not np.allclose(gram, np.eye(pre.dim), atol=tol, rtol=0):
        raise PPSError("basis is not orthonormal and complete")
    total = 0.0
    for f in basis:
        ov = inner(f, pre)
        if abs(ov) > EPS_OVERLAP:
            total += abs(ov) ** 2 * weak_value(PPSEnsemble(pre, f), op).real
        else:
            total += (np.conj(ov) * matrix_element(f, op, pre)).real
    return float(total)


__all__ = [
    "EPS_OVERLAP",
    "HilbertError",
    "InconsistentPPSError",
    "OutcomeDistribution",
    "PPSEnsemble",
    "PPSError",
    "ProductRuleAudit",
    "abl",
    "expectation_decomposition",
    "is_definite",
    "product_rule_audit",
    "sequential_distribution",
    "weak_value",
]
