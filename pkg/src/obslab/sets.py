"""Measurable time sets and spatial sets with closed-form integrals.

Time sets are finite unions of disjoint intervals; spatial sets are finite
unions of axis-aligned cells (optionally carrying a per-axis product
structure).  Every measure, Fourier moment, dyadic density value and
spatial Gramian entry is computed from trigonometric antiderivatives, so
the only error anywhere is floating-point rounding.  Fat Cantor sets
(stage k removes the middle r^k fraction of the base length from each
surviving interval) provide nowhere-dense positive-measure time sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConfigError, DomainError, EmptySetError
from .spectral import SpectralModel, axis_tables, _EXP, _SIN, _COS


@dataclass(frozen=True)
class TimeSet:
    """Sorted disjoint intervals (a_i, b_i), a_i < b_i <= a_{i+1}."""

    intervals: np.ndarray  # (m, 2) float

    @property
    def starts(self) -> np.ndarray:
        return self.intervals[:, 0]

    @property
    def ends(self) -> np.ndarray:
        return self.intervals[:, 1]

    @property
    def measure(self) -> float:
        return float(np.sum(self.ends - self.starts))

    def to_dict(self) -> dict:
        return {"intervals": [[float(a), float(b)] for a, b in self.intervals]}


def timeset_from_intervals(pairs) -> TimeSet:
    """Canonicalize a list of (a, b) pairs: sort, merge overlaps."""
    cleaned = []
    for a, b in pairs:
        a, b = float(a), float(b)
        if not a < b:
            raise ConfigError(f"interval ({a}, {b}) needs a < b")
        cleaned.append((a, b))
    if not cleaned:
        raise EmptySetError("time set needs at least one interval")
    cleaned.sort()
    merged = [list(cleaned[0])]
    for a, b in cleaned[1:]:
        if a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return TimeSet(np.array(merged, dtype=np.float64))


def timeset_from_dict(desc: dict) -> TimeSet:
    extra = set(desc) - {"intervals"}
    if extra:
        raise ConfigError(f"unknown time-set fields: {sorted(extra)}")
    return timeset_from_intervals(desc["intervals"])


def translate(E: TimeSet, c: float) -> TimeSet:
    return TimeSet(E.intervals + float(c))


def fat_cantor(depth: int, ratio: float, base=(0.0, 1.0)) -> TimeSet:
    """Smith-Volterra-Cantor set: 2^depth intervals, positive measure.

    Stage k removes the open middle piece of length |base| * ratio^k from
    each of the 2^(k-1) intervals surviving stage k-1.  Residual measure
    is |base| * (1 - sum_{k=1..depth} 2^(k-1) ratio^k), which must stay
    positive.
    """
    if not (isinstance(depth, (int, np.integer)) and depth >= 0):
        raise ConfigError(f"depth must be a nonnegative integer, got {depth!r}")
    if not 0.0 < ratio < 0.5:
        raise ConfigError("ratio must lie in (0, 1/2)")
    lo, hi = float(base[0]), float(base[1])
    if not lo < hi:
        raise ConfigError("base interval needs lo < hi")
    total = hi - lo

    intervals = [(lo, hi)]
    for k in range(1, depth + 1):
        removal = total * ratio ** k
        new_len = 0.5 * ((intervals[0][1] - intervals[0][0]) - removal)
        if new_len <= 0.0:
            raise ConfigError(
                f"stage {k} removal exhausts the set (depth={depth}, ratio={ratio})")
        nxt = []
        for a, b in intervals:
            nxt.append((a, a + new_len))
            nxt.append((b - new_len, b))
        intervals = nxt
    return TimeSet(np.array(intervals, dtype=np.float64))


def fat_cantor_measure(depth: int, ratio: float, base=(0.0, 1.0)) -> float:
    """Closed-form residual measure of `fat_cantor`."""
    total = float(base[1]) - float(base[0])
    removed = sum(2 ** (k - 1) * ratio ** k for k in range(1, depth + 1))
    return total * (1.0 - removed)


def timeset_moment(E: TimeSet, theta: float) -> complex:
    """Fourier moment of E: integral over E of exp(-i theta t) dt.

    Satisfies T(0) = |E|, T(-theta) = conj(T(theta)), |T| <= |E|.
    """
    return complex(_kernels.moment_matrix(E.starts, E.ends,
                                          np.array([float(theta)]))[0])


# -- dyadic density ------------------------------------------------------------


@dataclass(frozen=True)
class DensityProfile:
    """Samples of f_n(s) = 1 - 2^(n-1) |E intersect [s - 2^-n, s + 2^-n]|."""

    n: int
    samples: np.ndarray
    values: np.ndarray


def density_profile(E: TimeSet, n: int, samples) -> DensityProfile:
    """Exact dyadic density values at the given sample points."""
    if not n >= 1:
        raise ConfigError("density depth n must be >= 1")
    s = np.asarray(samples, dtype=np.float64).ravel()
    half = 2.0 ** (-n)
    meas = _kernels.window_measures(E.starts, E.ends, s, half)
    values = 1.0 - 2.0 ** (n - 1) * meas
    return DensityProfile(int(n), s, values)


def egorov_points(E: TimeSet, n: int, eps: float, step: float = None) -> np.ndarray:
    """Sampled points of E where the dyadic density f_n is <= eps.

    A finite, resolution-bounded stand-in for the almost-uniform-density
    subset whose existence the Severini-Egorov theorem guarantees; an
    empty result is a valid outcome, not an error.  Default sampling step
    is 2^-(n+3) within each interval of E.
    """
    if step is None:
        step = 2.0 ** (-(n + 3))
    if not step > 0:
        raise ConfigError("sampling step must be positive")
    grids = []
    for a, b in E.intervals:
        count = int(math.floor((b - a) / step)) + 1
        grids.append(a + step * np.arange(count))
    s = np.concatenate(grids)
    prof = density_profile(E, n, s)
    return s[prof.values <= eps]


# -- spatial sets ---------------------------------------------------------------


@dataclass(frozen=True)
class SpatialSet:
    """Finite union of axis-aligned cells; ``factors`` is kept when the set
    is a product of per-axis interval unions."""

    cells: tuple                 # cell = ((lo, hi), ...) one pair per axis
    factors: tuple = None        # per-axis tuple of (lo, hi) tuples, or None

    @property
    def dim(self) -> int:
        return len(self.cells[0])

    @property
    def measure(self) -> float:
        return float(sum(
            np.prod([hi - lo for lo, hi in cell]) for cell in self.cells))

    def to_dict(self) -> dict:
        return {"cells": [[[float(lo), float(hi)] for lo, hi in cell]
                          for cell in self.cells]}


def _cells_overlap(c1, c2) -> bool:
    return all(min(h1, h2) - max(l1, l2) > 1e-15
               for (l1, h1), (l2, h2) in zip(c1, c2))


def spatial_from_cells(cells) -> SpatialSet:
    norm_cells = []
    for cell in cells:
        norm_cell = []
        for lo, hi in cell:
            lo, hi = float(lo), float(hi)
            if not lo < hi:
                raise ConfigError(f"cell side ({lo}, {hi}) needs lo < hi")
            norm_cell.append((lo, hi))
        norm_cells.append(tuple(norm_cell))
    if not norm_cells:
        raise EmptySetError("spatial set needs at least one cell")
    if len({len(c) for c in norm_cells}) != 1:
        raise ConfigError("all cells must have the same dimension")
    for i in range(len(norm_cells)):
        for j in range(i + 1, len(norm_cells)):
            if _cells_overlap(norm_cells[i], norm_cells[j]):
                raise ConfigError(
                    f"cells {i} and {j} overlap with positive measure")
    return SpatialSet(tuple(norm_cells))


def spatial_product(factors) -> SpatialSet:
    """Product set from per-axis interval unions (each union canonicalized)."""
    canon = []
    for axis in factors:
        merged = timeset_from_intervals(axis)
        canon.append(tuple((float(a), float(b)) for a, b in merged.intervals))
    cells = []
    def rec(d, prefix):
        if d == len(canon):
            cells.append(tuple(prefix))
            return
        for iv in canon[d]:
            rec(d + 1, prefix + [iv])
    rec(0, [])
    return SpatialSet(tuple(cells), factors=tuple(canon))


def full_domain(model: SpectralModel) -> SpatialSet:
    return spatial_product([[(0.0, L)] for L in model.extent])


def spatial_from_dict(desc: dict) -> SpatialSet:
    extra = set(desc) - {"cells", "factors", "full_extent"}
    if extra:
        raise ConfigError(f"unknown spatial-set fields: {sorted(extra)}")
    if sum(k in desc for k in ("cells", "factors", "full_extent")) != 1:
        raise ConfigError(
            "spatial set needs exactly one of 'cells', 'factors', 'full_extent'")
    if "cells" in desc:
        return spatial_from_cells(desc["cells"])
    if "factors" in desc:
        return spatial_product(desc["factors"])
    return spatial_product([[(0.0, float(L))] for L in desc["full_extent"]])


def random_cells(rng, count: int, total_measure: float, length: float) -> SpatialSet:
    """Seeded disjoint 1-D cells of prescribed total measure in [0, length].

    Cell widths and the gaps separating them are independent uniform draws
    rescaled to sum to ``total_measure`` and ``length - total_measure``.
    """
    if not 0 < total_measure < length:
        raise ConfigError("need 0 < total_measure < length")
    widths = rng.random(count)
    widths *= total_measure / widths.sum()
    gaps = rng.random(count + 1)
    gaps *= (length - total_measure) / gaps.sum()
    cells = []
    x = 0.0
    for w, g in zip(widths, gaps):
        x += g
        cells.append(((x, x + w),))
        x += w
    return SpatialSet(tuple(cells))


# -- closed-form spatial Gramian -------------------------------------------------
#
# Entry convention (fixed package-wide): G[j, k] = integral over omega of
# e_j(x) * conj(e_k(x)) dx.  For a state u = sum_j c_j e_j this makes
# ||u||^2_omega = sum_{j,k} c_j G[j,k] conj(c_k); see observability.quadform.


def _cos_integral(gamma, lo, hi):
    """integral_{lo}^{hi} cos(gamma x) dx, vectorized over gamma."""
    ln = hi - lo
    mid = 0.5 * (lo + hi)
    return ln * np.cos(gamma * mid) * np.sinc(gamma * ln / (2.0 * math.pi))


def _cexp_integral(gamma, lo, hi):
    """integral_{lo}^{hi} exp(i gamma x) dx, vectorized over gamma."""
    ln = hi - lo
    mid = 0.5 * (lo + hi)
    return ln * np.exp(1j * gamma * mid) * np.sinc(gamma * ln / (2.0 * math.pi))


def _axis_cell_gramian(table, lo, hi):
    """Pairwise integrals of e_j conj(e_k) over one axis interval."""
    f = table["freqs"]
    diff = f[:, None] - f[None, :]
    if table["kind"] == _EXP:
        base = _cexp_integral(diff, lo, hi)
        nn = np.multiply.outer(table["norms"], table["norms"])
        return nn * base
    tot = f[:, None] + f[None, :]
    nn = np.multiply.outer(table["norms"], table["norms"])
    if table["kind"] == _SIN:
        return nn * 0.5 * (_cos_integral(diff, lo, hi) - _cos_integral(tot, lo, hi))
    return nn * 0.5 * (_cos_integral(diff, lo, hi) + _cos_integral(tot, lo, hi))


def spatial_gramian(model: SpectralModel, omega: SpatialSet) -> np.ndarray:
    """G[j,k] = integral over omega of e_j conj(e_k); Hermitian, 0 <= G <= I."""
    if omega.dim != model.dim:
        raise ConfigError(
            f"spatial set is {omega.dim}-D but model is {model.dim}-D")
    for cell in omega.cells:
        for d, (lo, hi) in enumerate(cell):
            L = model.extent[d]
            if lo < -1e-12 or hi > L + 1e-12:
                raise DomainError(
                    f"cell side ({lo}, {hi}) outside [0, {L}] on axis {d}")
    if omega.measure <= 0.0:
        raise EmptySetError("spatial set must have positive measure")

    tables = axis_tables(model)
    n = model.n_modes
    pos = [t["positions"] for t in tables]
    G = np.zeros((n, n), dtype=np.complex128)
    for cell in omega.cells:
        cell_G = None
        for d, (lo, hi) in enumerate(cell):
            M = _axis_cell_gramian(tables[d], lo, hi)
            full = M[np.ix_(pos[d], pos[d])]
            cell_G = full if cell_G is None else cell_G * full
        G += cell_G
    return G
