"""Scalar functionals on fields and the derivative-kernel checks.

Helicity is computed by two deliberately independent routes so each acts as
the other's oracle:

* spectral:   H = (2*pi)^3 * sum_k (|a_+(k)|^2 - |a_-(k)|^2) / |k|
* quadrature: H = integral of w . curl^{-1} w over the box, evaluated by the
              uniform-grid sum, which is exact for trigonometric polynomials
              once n >= 2*k_max + 2.

Energy, the partial helicity weighted by a transported scalar, the generic
two-point integral invariant, the alignment check curl K(w) ~ c_w * w and
the first-variation vanishing test 2 * int curl^{-1}w . [w, u] complete the
set.  The commutator is formed as curl(u x w), which equals
(w . grad) u - (u . grad) w for divergence-free fields; both routes are
implemented and compared in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curl_ops import curl, curl_inv, helical_decompose
from .errors import AliasingError, CostCapError, DegenerateFieldError, InputError
from .spectral import (
    TAU,
    VOLUME,
    GridSampling,
    ScalarField,
    SpectralField,
    analyze,
    grid_points,
    sample,
    sample_scalar,
)

DensityKernel = Callable[..., np.ndarray]
KernelMap = Callable[[SpectralField], SpectralField]


def energy(field: SpectralField) -> float:
    """Kinetic energy: integral of |w|^2 = (2*pi)^3 * sum |c_k|^2."""
    return VOLUME * float(np.sum(np.abs(field.coeffs) ** 2))


def inner_product_l2(u: SpectralField, v: SpectralField) -> float:
    """L2 inner product of two real fields, computed spectrally."""
    idx = {tuple(k): i for i, k in enumerate(v.kvecs)}
    total = 0.0 + 0.0j
    for k, c in zip(map(tuple, u.kvecs), u.coeffs):
        j = idx.get(k)
        if j is not None:
            total += np.dot(c, np.conj(v.coeffs[j]))
    return VOLUME * float(total.real)


def helicity_spectral(field: SpectralField) -> float:
    """Helicity from the helical amplitudes."""
    if field.n_modes == 0:
        return 0.0
    d = helical_decompose(field)
    knorm = np.linalg.norm(field.kvecs.astype(np.float64), axis=1)
    return VOLUME * float(
        np.sum((np.abs(d.a_plus) ** 2 - np.abs(d.a_minus) ** 2) / knorm)
    )


def helicity_quadrature(field: SpectralField, n: int) -> float:
    """Helicity as the grid quadrature of w . curl^{-1} w."""
    gw = sample(field, n).values
    gv = sample(curl_inv(field), n).values
    return float(np.sum(gw * gv)) * (TAU / n) ** 3


def partial_helicity(f: ScalarField, w: SpectralField, n: int) -> float:
    """Weighted helicity integral of f * (w . curl^{-1} w).

    The triple product has degree k_max(f) + 2*k_max(w), so the stated
    resolution bound makes the quadrature exact.
    """
    need = 2 * (f.k_max + w.k_max) + 2
    if n < need:
        raise AliasingError(
            f"partial helicity needs n >= {need} for exact quadrature, got {n}"
        )
    fg = sample_scalar(f, n)
    gw = sample(w, n).values
    gv = sample(curl_inv(w), n).values
    return float(np.sum(fg * np.sum(gw * gv, axis=-1))) * (TAU / n) ** 3


def integral_invariant_2pt(
    G: DensityKernel,
    w: SpectralField,
    n: int,
    cap: int = 16,
    chunk_rows: int = 512,
) -> float:
    """Two-point integral functional

        I(w) = integral over x1, x2 of G(x1, x2, w(x1), w(x2)).

    ``G`` must be vectorized over numpy arrays: it receives point and value
    arrays broadcastable to a common (..., 3) shape and returns the density
    with that broadcast shape.  The double grid sum costs n^6 kernel
    evaluations, so n above ``cap`` is refused.  Chunk partial sums are
    accumulated pairwise and combined with exact summation, making the
    result independent of chunk scheduling.
    """
    if n > cap:
        raise CostCapError(
            f"two-point invariant at n={n} needs {n**6:,} kernel evaluations; "
            f"cap is n={cap} ({cap**6:,})"
        )
    pts = grid_points(n).reshape(-1, 3)
    vals = sample(w, n).values.reshape(-1, 3)
    npts = pts.shape[0]
    partials = []
    for start in range(0, npts, chunk_rows):
        sl = slice(start, min(start + chunk_rows, npts))
        block = np.asarray(
            G(
                pts[sl, None, :],
                pts[None, :, :],
                vals[sl, None, :],
                vals[None, :, :],
            ),
            dtype=np.float64,
        )
        # kernels that ignore one argument come back unexpanded
        block = np.broadcast_to(block, (sl.stop - sl.start, npts))
        partials.append(float(np.sum(block)))
    return math.fsum(partials) * (VOLUME / n**3) ** 2


@dataclass(frozen=True)
class AlignmentReport:
    """How close curl K(w) is to a constant multiple of w.

    ``residual``  relative L2 size of w x curl K(w);
    ``c_w``       best-fit constant <curl K(w), w> / <w, w>;
    ``variation`` max-min spread of the pointwise ratio where |w| is above
                  the floor.
    """

    residual: float
    c_w: float
    variation: float


def check_kernel_alignment(
    K: KernelMap,
    w: SpectralField,
    n: int,
    floor_rel: float = 1e-6,
) -> AlignmentReport:
    """Test whether curl K(w) is pointwise parallel to w (with which constant)."""
    kw = K(w)
    if not isinstance(kw, SpectralField):
        raise InputError("kernel map must return a SpectralField")
    q = curl(kw)
    n_min = 2 * max(w.k_max, q.k_max) + 2
    if n < n_min:
        raise AliasingError(f"alignment check needs n >= {n_min}, got {n}")
    gw = sample(w, n).values
    gq = sample(q, n).values
    cross2 = np.sum(np.cross(gw, gq) ** 2, axis=-1)
    w2 = np.sum(gw**2, axis=-1)
    q2 = np.sum(gq**2, axis=-1)
    denom = float(np.sum(w2 * q2))
    residual = float(np.sqrt(np.sum(cross2) / denom)) if denom > 0 else 0.0
    ww = float(np.sum(w2))
    if ww == 0.0:
        raise DegenerateFieldError("alignment check on the zero field")
    c_w = float(np.sum(gq * gw)) / ww
    floor = floor_rel * float(np.sqrt(np.max(w2)))
    mask = np.sqrt(w2) > floor
    if not np.any(mask):
        raise DegenerateFieldError(
            "field magnitude below the evaluation floor everywhere"
        )
    ratio = np.sum(gq * gw, axis=-1)[mask] / w2[mask]
    return AlignmentReport(residual, c_w, float(ratio.max() - ratio.min()))


def _product_resolution(w: SpectralField, u: SpectralField, n: int | None) -> int:
    need = 2 * (w.k_max + u.k_max) + 2
    if n is None:
        return need
    if n < need:
        raise AliasingError(
            f"product of truncations {w.k_max}+{u.k_max} needs n >= {need}, got {n}"
        )
    return n


def commutator(w: SpectralField, u: SpectralField, n: int | None = None) -> SpectralField:
    """[w, u] = curl(u x w), exact at product truncation k_max(w)+k_max(u)."""
    n = _product_resolution(w, u, n)
    gw = sample(w, n).values
    gu = sample(u, n).values
    prod = np.cross(gu, gw)
    res = analyze(GridSampling(n, prod), w.k_max + u.k_max)
    return curl(res.field)


def commutator_pointwise(w: SpectralField, u: SpectralField, n: int | None = None) -> SpectralField:
    """[w, u] = (w . grad) u - (u . grad) w by spectral differentiation of
    each term; the independent route used to cross-check ``commutator``."""
    n = _product_resolution(w, u, n)
    gw = sample(w, n).values
    gu = sample(u, n).values

    def gradients(field):
        # partials[j][..., i] = d_j field_i on the grid
        kf = field.kvecs.astype(np.float64)
        return [
            sample(
                SpectralField(field.k_max, field.kvecs, 1j * kf[:, j : j + 1] * field.coeffs),
                n,
            ).values
            for j in range(3)
        ]

    du = gradients(u)
    dw = gradients(w)
    adv_u = sum(gw[..., j : j + 1] * du[j] for j in range(3))
    adv_w = sum(gu[..., j : j + 1] * dw[j] for j in range(3))
    res = analyze(GridSampling(n, adv_u - adv_w), w.k_max + u.k_max)
    return res.field


def derivative_vanishing_test(
    w: SpectralField, u: SpectralField, n: int | None = None
) -> float:
    """First variation of helicity along the flow of u:

        2 * integral of curl^{-1} w . [w, u]

    which vanishes identically (integrate by parts and use w . (u x w) = 0).
    Returned rather than asserted so negative controls can reuse it.
    """
    return 2.0 * inner_product_l2(curl_inv(w), commutator(w, u, n))
