"""Von Neumann pointer coupled to a pre/post-selected system.

The pointer lives on a momentum grid. Coupling ``-lam * Q * A`` shifts the
pointer momentum by ``lam * a`` in each eigenspace of ``A``, so after
post-selection the pointer amplitude is

    phi(P) = sum_a <post|Pi_a|pre> g(P - lam * a)

with ``g`` the initial Gaussian, ``g(P) ~ exp(-P**2 / (2 * spread**2))``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import NamedTuple, TextIO

import numpy as np

from .hilbert import SpectralObservable
from .pps import PPSEnsemble

# samples are drawn in fixed-size chunks, each from its own stream keyed by
# (seed, chunk index), so output does not depend on how chunks are scheduled
CHUNK = 1 << 16
MARGIN = 6.0


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class PointerConfig:
    lam: float
    half_width: float = 10.0
    points: int = 4096
    spread: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.lam):
            raise GridError("coupling must be finite")
        if self.points < 16:
            raise GridError(f"need at least 16 grid points, got {self.points}")
        if self.half_width <= 0 or self.spread <= 0:
            raise GridError("half_width and spread must be positive")
        if self.half_width / self.points >= self.spread / 4:
            raise GridError(
                f"grid too coarse: half_width/points = {self.half_width / self.points:.3g} "
                f">= spread/4 = {self.spread / 4:.3g}"
            )

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.points)

    def check_range(self, eigenvalues) -> None:
        reach = abs(self.lam) * max(abs(a) for a in eigenvalues) + MARGIN * self.spread
        if reach > self.half_width:
            raise GridError(
                f"pointer shift {abs(self.lam) * max(abs(a) for a in eigenvalues):.3g} plus "
                f"{MARGIN:g} spreads exceeds half_width {self.half_width:g}"
            )


def gaussian(p: np.ndarray, spread: float = 1.0) -> np.ndarray:
    """Initial pointer amplitude, normalized so that the integral of its square is 1."""
    return (np.pi * spread**2) ** -0.25 * np.exp(-(p**2) / (2 * spread**2))


@dataclass(frozen=True, eq=False)
class PointerDistribution:
    grid: np.ndarray
    density: np.ndarray
    post_selection_probability: float

    def cdf(self) -> np.ndarray:
        steps = 0.5 * (self.density[1:] + self.density[:-1]) * np.diff(self.grid)
        c = np.concatenate([[0.0], np.cumsum(steps)])
        return c / c[-1]

    def mass_between(self, lo: float, hi: float) -> float:
        c = self.cdf()
        return float(np.interp(hi, self.grid, c) - np.interp(lo, self.grid, c))


def exact_pointer_distribution(
    pps: PPSEnsemble, obs: SpectralObservable, cfg: PointerConfig
) -> PointerDistribution:
    cfg.check_range(obs.eigenvalues)
    p = cfg.grid
    phi = np.zeros_like(p, dtype=complex)
    for a, proj in obs.spectrum:
        phi += pps.amplitude(proj) * gaussian(p - cfg.lam * a, cfg.spread)
    dens = np.abs(phi) ** 2
    norm = np.trapezoid(dens, p)
    if norm <= 0:
        raise GridError("post-selection has zero probability on this grid")
    return PointerDistribution(p, dens / norm, float(norm))


def pointer_mean(dist: PointerDistribution) -> float:
    return float(np.trapezoid(dist.grid * dist.density, dist.grid))


def _inverse_cdf(dist: PointerDistribution):
    c = dist.cdf()
    keep = np.concatenate([[True], np.diff(c) > 0])
    return c[keep], dist.grid[keep]


def sample_pointer(
    pps: PPSEnsemble, obs: SpectralObservable, cfg: PointerConfig, n: int, seed: int = 0
) -> np.ndarray:
    """Draw ``n`` pointer readings by inverse-CDF sampling on the grid.

    Uses numpy's PCG64 with one ``SeedSequence(seed, spawn_key=(chunk,))``
    stream per chunk of ``CHUNK`` draws.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    cdf, grid = _inverse_cdf(exact_pointer_distribution(pps, obs, cfg))
    out = np.empty(n)
    for k, start in enumerate(range(0, n, CHUNK)):
        size = min(CHUNK, n - start)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(k,))))
        out[start : start + size] = np.interp(rng.random(size), cdf, grid)
    return out


class WeakEstimate(NamedTuple):
    value: float
    stderr: float
    n: int


def weak_value_estimate(samples, lam: float, spread: float = 1.0) -> WeakEstimate:
    """Pointer mean over coupling, with standard error ``spread / (|lam| sqrt(n))``."""
    if lam == 0:
        raise ValueError("coupling lam must be nonzero")
    s = np.asarray(samples, dtype=float)
    return WeakEstimate(float(s.mean() / lam), float(spread / (abs(lam) * np.sqrt(s.size))), int(s.size))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_exact_csv(dist: PointerDistribution, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["P", "density"])
    for p, d in zip(dist.grid, dist.density):
        w.writerow([_fmt(p), _fmt(d)])


def sample_histogram(samples, cfg: PointerConfig) -> tuple[np.ndarray, np.ndarray]:
    """Counts on bins whose edges are the grid points; returns (bin centres, counts)."""
    edges = cfg.grid
    counts, _ = np.histogram(samples, bins=edges)
    return 0.5 * (edges[1:] + edges[:-1]), counts


def write_sampled_csv(samples, cfg: PointerConfig, out: TextIO) -> None:
    centres, counts = sample_histogram(samples, cfg)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["P", "count"])
    for p, c in zip(centres, counts):
        w.writerow([_fmt(p), int(c)])


def to_csv_text(writer, *args) -> str:
    buf = io.StringIO()
    writer(*args, buf)
    return buf.getvalue()
