"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The two kernels here dominate Gramian assembly and density scans:

* ``moment_matrix``: the time-set Fourier moment integral evaluated on a
  (possibly large) grid of angular frequencies,
* ``window_measures``: Lebesgue measures of a union of intervals clipped
  to sliding windows.

Both are compiled with ``numba.njit`` when numba is importable and the
environment variable ``OBSLAB_DISABLE_NUMBA`` is unset (or "0").  Setting
``OBSLAB_DISABLE_NUMBA=1`` selects the vectorized numpy implementations,
which produce the same values to rounding.  ``benchmarks/bench_kernels.py``
compares the two paths.
"""

import os

import numpy as np

_disable = os.environ.get("OBSLAB_DISABLE_NUMBA", "").strip() not in ("", "0")
try:
    if _disable:
        raise ImportError
    from numba import njit
    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False

    def njit(*args, **kwargs):  # decorator stub, keeps definitions uniform
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def backend():
    """Name of the active kernel backend: "numba" or "numpy"."""
    return "numba" if NUMBA_ENABLED else "numpy"


# -- time-set moments --------------------------------------------------------
#
# For E a disjoint union of intervals (a_q, b_q), the moment is
#     T_E(theta) = integral_E exp(-i theta t) dt
#                = sum_q len_q * exp(-i theta mid_q) * sinc(theta len_q / 2)
# with sinc(x) = sin(x)/x.  The midpoint form is an exact rearrangement of
# the antiderivative difference and stays stable for small theta; the
# series branch of the theta -> 0 limit lives inside the sinc evaluation.


def _moment_matrix_numpy(starts, ends, thetas):
    lens = ends - starts
    mids = 0.5 * (starts + ends)
    x = 0.5 * np.multiply.outer(thetas, lens)
    core = np.sinc(x / np.pi)  # np.sinc(z) = sin(pi z)/(pi z)
    phase = np.exp(-1j * np.multiply.outer(thetas, mids))
    return (lens * core * phase).sum(axis=1)


@njit(cache=True)
def _moment_matrix_numba(starts, ends, thetas):
    out = np.empty(thetas.shape[0], dtype=np.complex128)
    for i in range(thetas.shape[0]):
        th = thetas[i]
        acc = 0.0 + 0.0j
        for q in range(starts.shape[0]):
            ln = ends[q] - starts[q]
            mid = 0.5 * (starts[q] + ends[q])
            x = 0.5 * th * ln
            if abs(x) < 1e-8:
                core = 1.0 - x * x / 6.0
            else:
                core = np.sin(x) / x
            ang = th * mid
            acc += ln * core * (np.cos(ang) - 1j * np.sin(ang))
        out[i] = acc
    return out


def moment_matrix(starts, ends, thetas):
    """T_E evaluated at each theta; returns a complex array like thetas."""
    starts = np.ascontiguousarray(starts, dtype=np.float64)
    ends = np.ascontiguousarray(ends, dtype=np.float64)
    thetas = np.ascontiguousarray(thetas, dtype=np.float64)
    if NUMBA_ENABLED:
        return _moment_matrix_numba(starts, ends, thetas)
    return _moment_matrix_numpy(starts, ends, thetas)


# -- window measures ---------------------------------------------------------


def _window_measures_numpy(starts, ends, centers, half):
    lo = centers[:, None] - half
    hi = centers[:, None] + half
    overlap = np.minimum(ends, hi) - np.maximum(starts, lo)
    return np.where(overlap > 0.0, overlap, 0.0).sum(axis=1)


@njit(cache=True)
def _window_measures_numba(starts, ends, centers, half):
    out = np.empty(centers.shape[0])
    for i in range(centers.shape[0]):
        lo = centers[i] - half
        hi = centers[i] + half
        acc = 0.0
        for q in range(starts.shape[0]):
            a = starts[q] if starts[q] > lo else lo
            b = ends[q] if ends[q] < hi else hi
            if b > a:
                acc += b - a
        out[i] = acc
    return out


def window_measures(starts, ends, centers, half):
    """|E intersect [c-half, c+half]| for each center c."""
    starts = np.ascontiguousarray(starts, dtype=np.float64)
    ends = np.ascontiguousarray(ends, dtype=np.float64)
    centers = np.ascontiguousarray(centers, dtype=np.float64)
    if NUMBA_ENABLED:
        return _window_measures_numba(starts, ends, centers, float(half))
    return _window_measures_numpy(starts, ends, centers, float(half))


def warmup():
    """Trigger JIT compilation of all kernels on tiny inputs."""
    a = np.array([0.0])
    b = np.array([1.0])
    moment_matrix(a, b, np.array([0.0, 1.0]))
    window_measures(a, b, np.array([0.5]), 0.25)
