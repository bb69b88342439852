"""Model manifolds with explicitly enumerated Laplace spectra.

Supported families are flat 1-D/2-D tori and 1-D/2-D rectangles with
Dirichlet or Neumann conditions; every eigenpair is known in closed form,
so the Schrodinger propagator, Sobolev norms and dyadic band filters all
act diagonally on eigenbasis coefficients.  States are plain complex
numpy vectors indexed like the model's mode table.

Conventions: on a circle of circumference L the mode j is
exp(i j (2 pi/L) x)/sqrt(L); on an interval of length L the Dirichlet
modes are sqrt(2/L) sin(j pi x/L) (j >= 1) and the Neumann modes are
1/sqrt(L), sqrt(2/L) cos(j pi x/L) (j >= 1).  Products of these span the
2-D families.  The mode table is sorted by ascending eigenvalue with ties
broken lexicographically by mode index tuple.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable

import numpy as np

from .errors import ConfigError, DomainError, ShapeError

FAMILIES = ("torus1d", "torus2d", "rect1d", "rect2d")

_FAMILY_DIM = {"torus1d": 1, "torus2d": 2, "rect1d": 1, "rect2d": 2}

# per-axis wave kinds
_EXP, _SIN, _COS = 0, 1, 2


@dataclass(frozen=True)
class SpectralModel:
    """A compact model manifold given by its truncated eigenbasis."""

    family: str
    boundary: str
    extent: tuple
    cutoff: int
    modes: np.ndarray       # (n_modes, dim) integer mode indices
    eigenvalues: np.ndarray  # (n_modes,) ascending

    @property
    def dim(self) -> int:
        return len(self.extent)

    @property
    def n_modes(self) -> int:
        return self.modes.shape[0]

    @property
    def domain_measure(self) -> float:
        return float(np.prod(self.extent))

    def describe(self) -> dict:
        return {
            "family": self.family,
            "boundary": self.boundary,
            "extent": list(self.extent),
            "cutoff": self.cutoff,
        }

    def mode_position(self, index_tuple) -> int:
        """Row of the mode table holding the given index tuple."""
        key = tuple(int(v) for v in index_tuple)
        hits = np.nonzero((self.modes == np.asarray(key)).all(axis=1))[0]
        if hits.size == 0:
            raise ShapeError(f"mode {key} not in table (cutoff {self.cutoff})")
        return int(hits[0])


def _axis_spec(family: str, boundary: str, L: float, cutoff: int, axis_kind: str):
    """1-D mode indices, wave kinds, angular frequencies and norms."""
    if axis_kind == "torus":
        idx = np.arange(-cutoff, cutoff + 1)
        kinds = np.full(idx.shape, _EXP, dtype=np.int8)
        freqs = idx * (2.0 * math.pi / L)
        norms = np.full(idx.shape, 1.0 / math.sqrt(L))
    elif boundary == "dirichlet":
        idx = np.arange(1, cutoff + 1)
        kinds = np.full(idx.shape, _SIN, dtype=np.int8)
        freqs = idx * (math.pi / L)
        norms = np.full(idx.shape, math.sqrt(2.0 / L))
    else:  # neumann
        idx = np.arange(0, cutoff + 1)
        kinds = np.full(idx.shape, _COS, dtype=np.int8)
        freqs = idx * (math.pi / L)
        norms = np.where(idx == 0, 1.0 / math.sqrt(L), math.sqrt(2.0 / L))
    return idx, kinds, freqs, norms


def build_model(family: str, boundary: str = "none", extent=None,
                cutoff: int = 1) -> SpectralModel:
    """Enumerate the truncated mode table of a model manifold.

    ``extent`` is a side length or a tuple of side lengths; defaults are
    2*pi per torus coordinate and pi per rectangle coordinate.  ``cutoff``
    is the largest mode index per coordinate.
    """
    if family not in FAMILIES:
        raise ConfigError(f"unknown family {family!r}; expected one of {FAMILIES}")
    dim = _FAMILY_DIM[family]
    is_torus = family.startswith("torus")
    if is_torus and boundary != "none":
        raise ConfigError("torus models have no boundary; use boundary='none'")
    if not is_torus and boundary not in ("dirichlet", "neumann"):
        raise ConfigError("rectangle models need boundary 'dirichlet' or 'neumann'")
    if not (isinstance(cutoff, (int, np.integer)) and cutoff >= 1):
        raise ConfigError(f"cutoff must be a positive integer, got {cutoff!r}")

    default = 2.0 * math.pi if is_torus else math.pi
    if extent is None:
        extent = (default,) * dim
    elif np.isscalar(extent):
        extent = (float(extent),) * dim
    else:
        extent = tuple(float(v) for v in extent)
    if len(extent) != dim:
        raise ConfigError(f"{family} needs {dim} extent component(s), got {len(extent)}")
    if any(L <= 0 for L in extent):
        raise ConfigError("extent components must be positive")

    axis_kind = "torus" if is_torus else "rect"
    axes = [_axis_spec(family, boundary, L, cutoff, axis_kind) for L in extent]
    tables = [list(zip(idx, freqs)) for idx, _, freqs, _ in axes]

    rows = []
    for combo in product(*tables):
        index = tuple(int(i) for i, _ in combo)
        lam = sum(f * f for _, f in combo)
        rows.append((lam, index))
    rows.sort(key=lambda r: (r[0], r[1]))

    modes = np.array([r[1] for r in rows], dtype=np.int64).reshape(len(rows), dim)
    eigenvalues = np.array([r[0] for r in rows], dtype=np.float64)
    return SpectralModel(family, boundary, extent, int(cutoff), modes, eigenvalues)


def _check_state(model: SpectralModel, state) -> np.ndarray:
    c = np.asarray(state, dtype=np.complex128)
    if c.shape != (model.n_modes,):
        raise ShapeError(
            f"state has shape {c.shape}, model has {model.n_modes} modes")
    return c


def propagate(model: SpectralModel, state, t: float) -> np.ndarray:
    """Apply the Schrodinger propagator: c_j -> exp(-i t lambda_j) c_j."""
    c = _check_state(model, state)
    if t == 0.0:
        return c.copy()
    return c * np.exp(-1j * t * model.eigenvalues)


def norm(model: SpectralModel, state, order: float = 0.0) -> float:
    """Sobolev norm of order s: sqrt(sum (1+lambda_j)^s |c_j|^2)."""
    c = _check_state(model, state)
    if order == 0.0:
        return float(np.linalg.norm(c))
    w = (1.0 + model.eigenvalues) ** order
    return float(math.sqrt(float(np.sum(w * np.abs(c) ** 2))))


# -- smooth bumps and the dyadic band filter ---------------------------------


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, exp(-1/t)-based between."""
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    out[t >= 1.0] = 1.0
    mid = (t > 0.0) & (t < 1.0)
    if np.any(mid):
        tm = t[mid]
        a = np.exp(-1.0 / tm)
        b = np.exp(-1.0 / (1.0 - tm))
        out[mid] = a / (a + b)
    return out if out.shape else float(out)


def band_profile(z):
    """Even bump equal to 1 exactly for |z| in [1,2], supported in (1/2, 5/2)."""
    az = np.abs(np.asarray(z, dtype=np.float64))
    return smooth_step((az - 0.5) / 0.5) * smooth_step((2.5 - az) / 0.5)


@dataclass(frozen=True)
class SpectralFilter:
    """Dyadic band filter c_j -> profile(h^2 lambda_j) c_j.

    The default profile is `band_profile`: plateau exactly on [1,2],
    support strictly inside (1/2, 5/2).
    """

    h: float
    profile: Callable = band_profile


def apply_filter(model: SpectralModel, state, filt: SpectralFilter) -> np.ndarray:
    if not filt.h > 0:
        raise ConfigError("filter parameter h must be positive")
    c = _check_state(model, state)
    return c * filt.profile(filt.h ** 2 * model.eigenvalues)


def band_indices(model: SpectralModel, h: float, tol: float = 1e-9) -> np.ndarray:
    """Modes on the filter plateau: indices j with h^2 lambda_j in [1,2]."""
    z = h * h * model.eigenvalues
    return np.nonzero((z >= 1.0 - tol) & (z <= 2.0 + tol))[0]


# -- pointwise evaluation -----------------------------------------------------


def evaluate(model: SpectralModel, state, points) -> np.ndarray:
    """Evaluate u(x) = sum_j c_j e_j(x) at the given coordinates."""
    c = _check_state(model, state)
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if model.dim == 1 and pts.shape[0] == 1 and pts.shape[1] != 1:
        pts = pts.T
    if pts.shape[1] != model.dim:
        raise ShapeError(f"points must have {model.dim} coordinate(s)")
    for d, L in enumerate(model.extent):
        x = pts[:, d]
        if np.any(x < -1e-12) or np.any(x > L + 1e-12):
            raise DomainError(f"coordinate {d} outside [0, {L}]")

    is_torus = model.family.startswith("torus")
    vals = np.ones((pts.shape[0], model.n_modes), dtype=np.complex128)
    for d, L in enumerate(model.extent):
        idx = model.modes[:, d].astype(np.float64)
        if is_torus:
            freq = idx * (2.0 * math.pi / L)
            phase = np.exp(1j * np.outer(pts[:, d], freq))
            vals *= phase / math.sqrt(L)
        else:
            freq = idx * (math.pi / L)
            arg = np.outer(pts[:, d], freq)
            if model.boundary == "dirichlet":
                vals *= np.sin(arg) * math.sqrt(2.0 / L)
            else:
                amp = np.where(idx == 0, 1.0 / math.sqrt(L), math.sqrt(2.0 / L))
                vals *= np.cos(arg) * amp
    return vals @ c


def random_state(model: SpectralModel, rng, normalized: bool = False) -> np.ndarray:
    """Complex Gaussian coefficient vector over the model's modes."""
    c = rng.standard_normal(model.n_modes) + 1j * rng.standard_normal(model.n_modes)
    if normalized:
        c /= np.linalg.norm(c)
    return c


# -- bumps on a circle (obstruction profiles) ---------------------------------


@dataclass(frozen=True)
class CircleBump:
    """Smooth bump on a circle: support arc of ``width`` around ``center``,
    transitions of width ``transition`` at both edges, built from
    `smooth_step`.  ``circumference`` fixes the wraparound."""

    center: float
    width: float
    transition: float
    circumference: float

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        L = self.circumference
        d = np.abs((x - self.center + 0.5 * L) % L - 0.5 * L)
        return smooth_step((0.5 * self.width - d) / self.transition)

    @property
    def support(self) -> tuple:
        """(lo, hi) endpoints of the support arc, hi may exceed circumference."""
        return (self.center - 0.5 * self.width, self.center + 0.5 * self.width)


def default_strip_bump(a: float, b: float, circumference: float = 2.0 * math.pi,
                       width_frac: float = 0.8) -> CircleBump:
    """Bump centered in the complement arc of (a, b), width 80% of that arc."""
    if not 0 <= a < b <= circumference:
        raise ConfigError("strip needs 0 <= a < b <= circumference")
    arc = circumference - (b - a)
    if arc <= 0:
        raise ConfigError("strip leaves no complement arc")
    width = width_frac * arc
    center = 0.5 * (b + a + circumference)
    return CircleBump(center=center, width=width, transition=0.5 * width,
                      circumference=circumference)


def circle_fourier_coeffs(f: Callable, n_max: int, circumference: float,
                          grid: int = 1 << 15) -> np.ndarray:
    """Coefficients of f over exp(i j (2 pi/L) x)/sqrt(L), j = -n_max..n_max.

    Computed by FFT on a uniform grid; for smooth f the aliasing error is
    far below the truncation tail.
    """
    L = circumference
    x = np.arange(grid) * (L / grid)
    F = np.fft.fft(f(x))
    out = np.empty(2 * n_max + 1, dtype=np.complex128)
    for j in range(-n_max, n_max + 1):
        out[j + n_max] = F[j % grid]
    return out * (math.sqrt(L) / grid)


def axis_tables(model: SpectralModel):
    """Per-axis wave tables used by closed-form integrals.

    Returns a list with one dict per coordinate axis holding the distinct
    1-D mode ``indices``, wave ``kind`` (0 complex exp, 1 sin, 2 cos),
    angular ``freqs``, normalization ``norms`` and, for every row of the
    model's mode table, its ``positions`` into those arrays.
    """
    is_torus = model.family.startswith("torus")
    axis_kind = "torus" if is_torus else "rect"
    tables = []
    for d, L in enumerate(model.extent):
        idx, kinds, freqs, norms = _axis_spec(model.family, model.boundary,
                                              L, model.cutoff, axis_kind)
        col = model.modes[:, d]
        if is_torus:
            positions = col + model.cutoff
        elif model.boundary == "dirichlet":
            positions = col - 1
        else:
            positions = col.copy()
        tables.append({"indices": idx, "kind": int(kinds[0]), "freqs": freqs,
                       "norms": norms, "positions": positions.astype(np.intp)})
    return tables


# -- serialization -------------------------------------------------------------


def model_from_dict(desc: dict) -> SpectralModel:
    extra = set(desc) - {"family", "boundary", "extent", "cutoff"}
    if extra:
        raise ConfigError(f"unknown model fields: {sorted(extra)}")
    try:
        family = desc["family"]
        cutoff = desc["cutoff"]
    except KeyError as e:
        raise ConfigError(f"model descriptor missing {e.args[0]!r}") from None
    return build_model(family, desc.get("boundary", "none"),
                       desc.get("extent"), cutoff)


def modes_to_csv(model: SpectralModel, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"index_{d}" for d in range(model.dim)] + ["eigenvalue"])
        for row, lam in zip(model.modes, model.eigenvalues):
            writer.writerow([int(v) for v in row] + [f"{lam:.17g}"])
