"""Curl, its inverse on exact fields, and the helical eigenbasis.

On the torus both operators are Fourier multipliers:

    curl:      c_k -> i k x c_k
    curl^{-1}: c_k -> i k x c_k / |k|^2     (the periodic Biot-Savart operator;
                                             well defined because c_0 = 0)

Every transverse mode pair splits into two circular polarizations

    h_s(k) = (e1(k) + i s e2(k)) / sqrt(2),   s = +1 or -1,

where {e1, e2, k/|k|} is a fixed right-handed orthonormal frame.  The
single-mode fields h_s(k) e^{i k.x} are curl eigenfields with eigenvalue
s |k|, so curl acts diagonally on the helical amplitudes.

Frame convention (deterministic, reproducible): for lexicographically
positive k, e1 = normalize(k x zhat) unless k is parallel to zhat, in which
case e1 = xhat; then e2 = (k/|k|) x e1.  The frame at -k is defined by the
conjugation rule e1(-k) = e1(k), e2(-k) = -e2(k), never recomputed, which
makes a_s(-k) = conj(a_s(k)) hold exactly for real fields.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, RealityError
from .spectral import (
    DEFAULT_TOL,
    SpectralField,
    _check_reality,
    _drop_zero_rows,
    _snap_transverse,
    _symmetrize,
    lex_positive,
)


def helical_frame(kvecs: np.ndarray):
    """Frame vectors (e1, e2) for each wave vector, conjugation-symmetric."""
    kv = np.asarray(kvecs, dtype=np.int64).reshape(-1, 3)
    pos = lex_positive(kv)
    rep = np.where(pos[:, None], kv, -kv).astype(np.float64)
    e1 = np.zeros((len(kv), 3))
    perp = rep[:, 0] ** 2 + rep[:, 1] ** 2 > 0
    e1[perp, 0] = rep[perp, 1]
    e1[perp, 1] = -rep[perp, 0]
    e1[perp] /= np.linalg.norm(e1[perp], axis=1, keepdims=True)
    e1[~perp, 0] = 1.0
    khat = rep / np.linalg.norm(rep, axis=1, keepdims=True)
    e2 = np.cross(khat, e1)
    e2[~pos] *= -1.0
    return e1, e2


def helical_vectors(kvecs: np.ndarray):
    """Polarization vectors h_plus, h_minus for each wave vector."""
    e1, e2 = helical_frame(kvecs)
    h_plus = (e1 + 1j * e2) / np.sqrt(2.0)
    h_minus = (e1 - 1j * e2) / np.sqrt(2.0)
    return h_plus, h_minus


def curl(field: SpectralField) -> SpectralField:
    out = 1j * np.cross(field.kvecs.astype(np.float64), field.coeffs)
    kvecs, coeffs = _drop_zero_rows(field.kvecs, out)
    result = SpectralField(field.k_max, kvecs, coeffs)
    result.validate()
    return result


def curl_inv(field: SpectralField) -> SpectralField:
    """Inverse of curl on exact fields (torus Biot-Savart)."""
    kf = field.kvecs.astype(np.float64)
    k2 = np.einsum("mi,mi->m", kf, kf)
    out = 1j * np.cross(kf, field.coeffs)
    if len(k2):
        out /= k2[:, None]
    kvecs, coeffs = _drop_zero_rows(field.kvecs, out)
    result = SpectralField(field.k_max, kvecs, coeffs)
    result.validate()
    return result


def eigenvalue(k, sign: int) -> float:
    """Curl eigenvalue of the helical pair at k: sign * |k|."""
    return float(sign) * float(np.linalg.norm(np.asarray(k, dtype=np.float64)))


@dataclass(frozen=True)
class HelicalDecomposition:
    """Per-mode helical amplitudes a_s(k) of a field.

    Row i of ``kvecs`` carries amplitudes ``a_plus[i]`` and ``a_minus[i]``
    for the curl eigenvalues +|k| and -|k|; conjugate symmetry
    a_s(-k) = conj(a_s(k)) holds row-reversed as in SpectralField.
    """

    k_max: int
    kvecs: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray

    def __post_init__(self):
        for name in ("kvecs", "a_plus", "a_minus"):
            arr = np.ascontiguousarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def eigen_plus(self) -> np.ndarray:
        return np.linalg.norm(self.kvecs.astype(np.float64), axis=1)

    @property
    def eigen_minus(self) -> np.ndarray:
        return -self.eigen_plus

    def amplitude(self, k, sign: int) -> complex:
        hits = np.nonzero(np.all(self.kvecs == np.asarray(k, np.int64), axis=1))[0]
        if len(hits) == 0:
            return 0.0j
        return complex(self.a_plus[hits[0]] if sign > 0 else self.a_minus[hits[0]])


def helical_decompose(field: SpectralField) -> HelicalDecomposition:
    """Expand a field in the helical basis: a_s(k) = conj(h_s(k)) . c_k."""
    h_plus, h_minus = helical_vectors(field.kvecs)
    a_plus = np.einsum("mi,mi->m", np.conj(h_plus), field.coeffs)
    a_minus = np.einsum("mi,mi->m", np.conj(h_minus), field.coeffs)
    return HelicalDecomposition(field.k_max, field.kvecs.copy(), a_plus, a_minus)


def helical_reconstruct(decomp: HelicalDecomposition, tol: float = DEFAULT_TOL) -> SpectralField:
    """Inverse of ``helical_decompose``; rejects non-real amplitude sets."""
    kvecs = decomp.kvecs
    if len(kvecs) and not np.array_equal(kvecs, -kvecs[::-1]):
        raise InputError("decomposition mode set must be mirror-closed and sorted")
    amps = np.stack([decomp.a_plus, decomp.a_minus], axis=1)
    try:
        _check_reality(kvecs, amps, tol, what="helical amplitudes")
    except RealityError:
        raise
    h_plus, h_minus = helical_vectors(kvecs)
    coeffs = decomp.a_plus[:, None] * h_plus + decomp.a_minus[:, None] * h_minus
    coeffs = _snap_transverse(kvecs, _symmetrize(coeffs))
    kvecs, coeffs = _drop_zero_rows(kvecs, coeffs)
    field = SpectralField(decomp.k_max, kvecs, coeffs)
    field.validate(tol)
    return field


def helical_field(k, sign: int, amplitude: complex = 1.0, k_max: int | None = None) -> SpectralField:
    """The real field with a single helical amplitude a_sign(k) = amplitude
    (plus its conjugate partner at -k)."""
    k = np.asarray(k, dtype=np.int64)
    if not np.any(k):
        raise InputError("helical modes require k != 0")
    kvecs = np.array(sorted([tuple(k), tuple(-k)]), dtype=np.int64)
    h_plus, h_minus = helical_vectors(kvecs)
    h = h_plus if sign > 0 else h_minus
    amp = np.zeros(2, dtype=np.complex128)
    for i, row in enumerate(kvecs):
        amp[i] = amplitude if tuple(row) == tuple(k) else np.conj(amplitude)
    coeffs = amp[:, None] * h
    if k_max is None:
        k_max = int(np.max(np.abs(k)))
    field = SpectralField(int(k_max), kvecs, coeffs)
    field.validate()
    return field


def write_decomposition_csv(decomp: HelicalDecomposition, path) -> None:
    """Decomposition export: CSV columns kx,ky,kz,sign,re(a),im(a),lambda."""
    lam = decomp.eigen_plus
    with open(path, "w") as fh:
        fh.write("kx,ky,kz,sign,re_a,im_a,lambda\n")
        for i, k in enumerate(decomp.kvecs):
            for sign, a, l in (
                ("+", decomp.a_plus[i], lam[i]),
                ("-", decomp.a_minus[i], -lam[i]),
            ):
                fh.write(
                    f"{k[0]},{k[1]},{k[2]},{sign},"
                    f"{float(a.real)!r},{float(a.imag)!r},{float(l)!r}\n"
                )
