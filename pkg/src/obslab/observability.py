"""Observability Gramians, observability constants and visibility checks.

Matrix conventions (shared with `obslab.sets` and `obslab.hum`): entries
follow G[j,k] = integral e_j conj(e_k), so for a coefficient vector c the
associated quadratic form is

    Q_M(c) = sum_{j,k} c_j M[j,k] conj(c_k)   (see `quadform`),

and the linear operator represented by M acts on coefficients on the
right, c -> c @ M (see `op_apply`).  For Hermitian M both agree with the
standard conventions applied to M transposed, so spectra are unchanged.

The observability Gramian of a time set E and a spatial set omega is
A[j,k] = T_E(lambda_j - lambda_k) * G_omega[j,k]; its quadratic form is
exactly the observation functional integral_E ||exp(it Laplacian) u||^2
over omega, restricted to the truncated eigenbasis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ContractError, DomainError, EmptySetError
from .sets import SpatialSet, TimeSet, spatial_gramian
from .spectral import SpectralModel, band_indices

# lambda_min at or below this multiple of ||A|| counts as degenerate
DEGENERACY_FLOOR = 1e-14

STATUS_OK = "ok"
STATUS_NOT_OBSERVABLE = "not-observable-at-this-truncation"
STATUS_EMPTY_BAND = "empty-band"


def quadform(M: np.ndarray, c: np.ndarray) -> float:
    """Real quadratic form sum_{j,k} c_j M[j,k] conj(c_k) (M Hermitian)."""
    return float(np.real(np.vdot(c, c @ M)))


def op_apply(M: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Coefficient action of the operator represented by M (right action)."""
    return c @ M


def is_hermitian(M: np.ndarray, tol: float = 1e-12) -> bool:
    scale = max(1.0, float(np.abs(M).max()))
    return bool(np.abs(M - M.conj().T).max() <= tol * scale)


def smallest_eig(H: np.ndarray, tol: float = 1e-12):
    """Smallest eigenvalue of a Hermitian matrix and a minimizing state.

    The returned vector minimizes `quadform`(H, .) on the unit sphere;
    backed by a dense LAPACK eigendecomposition.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {H.shape}")
    if not is_hermitian(H, tol):
        raise ContractError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(H)
    return float(w[0]), np.conj(v[:, 0])


def obs_gramian(model: SpectralModel, omega: SpatialSet, E: TimeSet) -> np.ndarray:
    """Observability Gramian A[j,k] = T_E(lambda_j - lambda_k) G_omega[j,k]."""
    if E.measure <= 0.0:
        raise EmptySetError("time set must have positive measure")
    G = spatial_gramian(model, omega)
    lam = model.eigenvalues
    theta = (lam[:, None] - lam[None, :]).ravel()
    M = _kernels.moment_matrix(E.starts, E.ends, theta).reshape(G.shape)
    return M * G


@dataclass
class ObservabilityReport:
    """Smallest Gramian eigenvalue, the observability constant C = 1/lambda_min,
    and the worst-observed state, all on the truncated basis (so C is a
    lower bound for the untruncated constant)."""

    lambda_min: float
    constant: float
    worst_state: np.ndarray
    status: str
    gramian_scale: float
    model: dict
    omega: dict
    time_set: dict
    cutoff: int

    def to_dict(self) -> dict:
        return {
            "lambda_min": self.lambda_min,
            "constant": self.constant,
            "status": self.status,
            "gramian_scale": self.gramian_scale,
            "model": self.model,
            "omega": self.omega,
            "time_set": self.time_set,
            "cutoff": self.cutoff,
            "worst_state": _interleave(self.worst_state),
        }


def _interleave(c: np.ndarray) -> list:
    out = np.empty(2 * c.size)
    out[0::2] = c.real
    out[1::2] = c.imag
    return [float(v) for v in out]


def obs_constant(model: SpectralModel, omega: SpatialSet, E: TimeSet) -> ObservabilityReport:
    """Observability constant of (E, omega) on the truncated basis."""
    A = obs_gramian(model, omega, E)
    lam_min, worst = smallest_eig(A)
    scale = float(np.linalg.norm(A, 2))
    degenerate = lam_min <= DEGENERACY_FLOOR * scale
    return ObservabilityReport(
        lambda_min=lam_min,
        constant=float("inf") if degenerate else 1.0 / lam_min,
        worst_state=worst,
        status=STATUS_NOT_OBSERVABLE if degenerate else STATUS_OK,
        gramian_scale=scale,
        model=model.describe(),
        omega=omega.to_dict(),
        time_set=E.to_dict(),
        cutoff=model.cutoff,
    )


def brute_force_functional(model: SpectralModel, omega: SpatialSet, E: TimeSet,
                           u: np.ndarray, panels: int) -> float:
    """Composite-Simpson oracle for integral_E ||exp(it Laplacian) u||^2 over omega.

    Independent of `obs_gramian`'s moment closed form: the time integral is
    done numerically, panel count per interval of E; only the spatial
    Gramian quadratic form is reused at each time node.  Converges at 4th
    order in the panel width to quadform(obs_gramian(...), u).
    """
    if panels < 2 or panels % 2 != 0:
        raise DomainError("panels must be an even integer >= 2")
    G = spatial_gramian(model, omega)
    lam = model.eigenvalues
    u = np.asarray(u, dtype=np.complex128)
    total = 0.0
    weights = np.ones(panels + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    for a, b in E.intervals:
        h = (b - a) / panels
        t = a + h * np.arange(panels + 1)
        U = np.exp(-1j * np.outer(lam, t)) * u[:, None]
        vals = np.real(np.sum(np.conj(U) * (G.T @ U), axis=0))
        total += (h / 3.0) * float(weights @ vals)
    return total


def eigenspace_visibility(model: SpectralModel, omega: SpatialSet,
                          gramian: np.ndarray = None):
    """Per-eigenvalue visibility: smallest eigenvalue of G_omega compressed
    to each Laplace eigenspace.  Positive visibility is the computable
    shadow of the fact that eigenfunction nodal sets have measure zero.

    Returns a list of (eigenvalue, visibility) over distinct eigenvalues.
    """
    G = spatial_gramian(model, omega) if gramian is None else gramian
    lam = model.eigenvalues
    out = []
    start = 0
    n = lam.size
    while start < n:
        stop = start + 1
        tol = 1e-9 * (1.0 + lam[start])
        while stop < n and lam[stop] - lam[start] <= tol:
            stop += 1
        block = G[start:stop, start:stop]
        vis = float(np.linalg.eigvalsh(block)[0])
        out.append((float(lam[start]), vis))
        start = stop
    return out


def sobolev_weight_matrix(model: SpectralModel, order: float) -> np.ndarray:
    """Diagonal H^s weight form diag((1 + lambda_j)^s)."""
    return np.diag((1.0 + model.eigenvalues) ** order).astype(np.complex128)


def weak_obs_certificate(model: SpectralModel, omega: SpatialSet,
                         window, tau: float) -> float:
    """Two-form certificate mu(tau) for the weak observation estimate.

    mu = lambda_min((1/|window|) A_window + tau * diag((1+lambda)^-2)); for
    every truncated state, ||u||^2 <= (1/mu) avg_window ||e^{it Lap} u||^2_omega
    + (tau/mu) ||u||^2_{H^-2}.  mu is nondecreasing in tau and never falls
    below tau (1+lambda_max)^-2.
    """
    lo, hi = float(window[0]), float(window[1])
    if not hi > lo:
        raise DomainError("window needs lo < hi")
    if not tau > 0:
        raise DomainError("tau must be positive")
    E = TimeSet(np.array([[lo, hi]]))
    A = obs_gramian(model, omega, E) / (hi - lo)
    H2 = tau * (1.0 + model.eigenvalues) ** (-2.0)
    M = A + np.diag(H2)
    return float(np.linalg.eigvalsh(M)[0])


@dataclass
class FilteredObsResult:
    """Band-compressed observability constant of a short time window."""

    status: str
    constant: float
    lambda_min: float
    h: float
    delta: float
    band: np.ndarray = field(default=None)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "constant": self.constant,
            "lambda_min": self.lambda_min,
            "h": self.h,
            "delta": self.delta,
            "band_size": 0 if self.band is None else int(self.band.size),
        }


def filtered_obs_constant(model: SpectralModel, omega: SpatialSet, s: float,
                          delta: float, h: float) -> FilteredObsResult:
    """Observability constant of the averaged window (s-delta, s+delta)
    compressed to the filter plateau band {j : h^2 lambda_j in [1, 2]}.

    By propagator unitarity the result is independent of s; uniformity in
    delta (for small h) is probed by scans, not asserted per call.
    """
    if not delta > 0:
        raise DomainError("delta must be positive")
    band = band_indices(model, h)
    if band.size == 0:
        return FilteredObsResult(STATUS_EMPTY_BAND, float("nan"), float("nan"),
                                 h, delta)
    E = TimeSet(np.array([[s - delta, s + delta]]))
    A = obs_gramian(model, omega, E) / (2.0 * delta)
    M = A[np.ix_(band, band)]
    lam_min = float(np.linalg.eigvalsh(M)[0])
    scale = float(np.linalg.norm(M, 2))
    if lam_min <= DEGENERACY_FLOOR * scale:
        return FilteredObsResult(STATUS_NOT_OBSERVABLE, float("inf"), lam_min,
                                 h, delta, band)
    return FilteredObsResult(STATUS_OK, 1.0 / lam_min, lam_min, h, delta, band)
