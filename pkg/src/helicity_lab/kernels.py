"""Hot numeric kernel: sparse trigonometric series at non-uniform points.

``trig_eval`` computes

    out[p, j] = Re( sum_m coeffs[m, j] * exp(i * k_m . x_p) )

for arbitrary points x_p.  This is the inner loop of the diffeomorphism
push-forward, where a field has to be evaluated at pulled-back grid points
that no longer sit on a uniform lattice.  Uniform-grid transforms elsewhere
in the package go through numpy's FFT and never come through here.

Two implementations are kept in lockstep: a numba ``@njit(parallel=True)``
kernel and a blocked pure-numpy one (matrix products against cos/sin phase
blocks).  ``trig_eval`` dispatches on the lane selected in ``_accel``;
``benchmarks/benchmark_kernels.py`` times both.
"""

import math

import numpy as np

from ._accel import NUMBA_ENABLED

_NUMPY_BLOCK = 4096  # points per block; keeps phase matrices ~tens of MB


def _prepare(points, kvecs, coeffs):
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError("points must have shape (N, 3)")
    kf = np.ascontiguousarray(kvecs, dtype=np.float64)
    c = np.asarray(coeffs, dtype=np.complex128)
    squeeze = c.ndim == 1
    if squeeze:
        c = c[:, None]
    return pts, kf, c, squeeze


def trig_eval_numpy(points, kvecs, coeffs, block: int = _NUMPY_BLOCK) -> np.ndarray:
    """Pure-numpy lane: blocked cos/sin phase matrices times coefficients."""
    pts, kf, c, squeeze = _prepare(points, kvecs, coeffs)
    cre = np.ascontiguousarray(c.real)
    cim = np.ascontiguousarray(c.imag)
    npts = pts.shape[0]
    out = np.empty((npts, c.shape[1]), dtype=np.float64)
    if c.shape[0] == 0:
        out[:] = 0.0
    else:
        kt = kf.T
        for start in range(0, npts, block):
            sl = slice(start, min(start + block, npts))
            phase = pts[sl] @ kt
            out[sl] = np.cos(phase) @ cre - np.sin(phase) @ cim
    return out[:, 0] if squeeze else out


if NUMBA_ENABLED:
    import numba

    @numba.njit(parallel=True, cache=True)
    def _trig_eval_jit(pts, kf, cre, cim, out):  # pragma: no cover - compiled
        npts = pts.shape[0]
        nmodes = kf.shape[0]
        ncomp = cre.shape[1]
        for p in numba.prange(npts):
            x0 = pts[p, 0]
            x1 = pts[p, 1]
            x2 = pts[p, 2]
            for j in range(ncomp):
                out[p, j] = 0.0
            for m in range(nmodes):
                ph = kf[m, 0] * x0 + kf[m, 1] * x1 + kf[m, 2] * x2
                cph = math.cos(ph)
                sph = math.sin(ph)
                for j in range(ncomp):
                    out[p, j] += cre[m, j] * cph - cim[m, j] * sph

    def trig_eval_numba(points, kvecs, coeffs) -> np.ndarray:
        """Numba lane: parallel loop over points, serial over modes."""
        pts, kf, c, squeeze = _prepare(points, kvecs, coeffs)
        cre = np.ascontiguousarray(c.real)
        cim = np.ascontiguousarray(c.imag)
        out = np.empty((pts.shape[0], c.shape[1]), dtype=np.float64)
        if c.shape[0] == 0:
            out[:] = 0.0
        else:
            _trig_eval_jit(pts, kf, cre, cim, out)
        return out[:, 0] if squeeze else out

    trig_eval = trig_eval_numba
else:
    trig_eval_numba = None
    trig_eval = trig_eval_numpy
