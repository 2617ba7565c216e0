"""Sparse Fourier representation of periodic fields on the 3-torus.

Fields live on the box [0, 2*pi)^3 with periodic boundary conditions.  A
vector field is stored as a finite set of integer wave vectors k with
complex amplitudes c_k, subject to four structural invariants:

* reality:           c_{-k} == conj(c_k), so the field is real-valued;
* incompressibility: k . c_k == 0 mode by mode (divergence-free);
* zero mean:         no k == 0 mode (on the torus this is exactness, the
                     vanishing of the flux through every closed surface);
* support:           max(|kx|, |ky|, |kz|) <= k_max.

Both k and -k are stored explicitly and kept in lexicographic order, so the
mirror of row i is row M-1-i.  Construction goes through
``SpectralField.from_modes`` or ``leray_project``, which validate or enforce
the invariants; everything downstream may assume them.

A note on "exact" incompressibility: k . c_k is driven to zero at
construction and the residual of the float dot product is at the round-off
floor (a few ulp of |k||c|), which is the sharpest statement IEEE doubles
support.  The projection skips modes already below that floor, which makes
it bitwise idempotent.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    AliasingError,
    InputError,
    InternalInconsistencyError,
    RealityError,
)

TAU = 2.0 * np.pi
VOLUME = TAU**3

DEFAULT_TOL = 1e-12

# Incompressibility snap floor, relative to |k|_2 * |c_k|_2 per mode.
_SNAP_REL = 64.0 * np.finfo(np.float64).eps

RNG_ALGORITHM = "numpy.random.Philox (philox4x64) -> standard_normal"


# ---------------------------------------------------------------------------
# mode-set helpers
# ---------------------------------------------------------------------------

def band_kvecs(k_max: int, include_zero: bool = False) -> np.ndarray:
    """All integer wave vectors with sup-norm <= k_max, lexicographically sorted."""
    rng = range(-k_max, k_max + 1)
    rows = [k for k in itertools.product(rng, rng, rng) if include_zero or any(k)]
    return np.array(rows, dtype=np.int64).reshape(len(rows), 3)


def lex_positive(kvecs: np.ndarray) -> np.ndarray:
    """Mask of wave vectors that are lexicographically positive."""
    kx, ky, kz = kvecs[:, 0], kvecs[:, 1], kvecs[:, 2]
    return (kx > 0) | ((kx == 0) & ((ky > 0) | ((ky == 0) & (kz > 0))))


def _lex_sort(kvecs: np.ndarray, coeffs: np.ndarray):
    order = np.lexsort((kvecs[:, 2], kvecs[:, 1], kvecs[:, 0]))
    return kvecs[order], coeffs[order]


def _as_mode_arrays(modes, ncomp: int):
    """Accept a {(kx,ky,kz): amplitude} dict or a (kvecs, coeffs) pair."""
    if isinstance(modes, dict):
        if not modes:
            kvecs = np.zeros((0, 3), dtype=np.int64)
            shape = (0, ncomp) if ncomp > 1 else (0,)
            return kvecs, np.zeros(shape, dtype=np.complex128)
        kvecs = np.array(sorted(modes.keys()), dtype=np.int64)
        coeffs = np.array([modes[tuple(k)] for k in kvecs], dtype=np.complex128)
    else:
        kvecs, coeffs = modes
        kvecs = np.asarray(kvecs, dtype=np.int64).reshape(-1, 3)
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        kvecs, coeffs = _lex_sort(kvecs, coeffs)
    expected = (len(kvecs), ncomp) if ncomp > 1 else (len(kvecs),)
    if coeffs.shape != expected:
        raise InputError(
            f"coefficient array has shape {coeffs.shape}, expected {expected}"
        )
    return kvecs, coeffs


def _mirror_close(kvecs: np.ndarray, coeffs: np.ndarray):
    """Union the mode set with its mirror, filling absent partners with 0."""
    index = {tuple(k): i for i, k in enumerate(kvecs)}
    if len(index) != len(kvecs):
        raise InputError("duplicate wave vectors in mode set")
    missing = [tuple(-k) for k in kvecs if tuple(-k) not in index]
    if not missing:
        return kvecs, coeffs
    extra_k = np.array(sorted(set(missing)), dtype=np.int64).reshape(-1, 3)
    pad = np.zeros((len(extra_k),) + coeffs.shape[1:], dtype=np.complex128)
    return _lex_sort(np.vstack([kvecs, extra_k]), np.concatenate([coeffs, pad]))


def _check_reality(kvecs, coeffs, tol, what="coefficients"):
    scale = float(np.max(np.abs(coeffs))) if len(coeffs) else 0.0
    if scale == 0.0:
        return
    resid = float(np.max(np.abs(coeffs - np.conj(coeffs[::-1]))))
    if resid > tol * scale:
        raise RealityError(
            f"{what} violate conjugate symmetry: residual {resid:.3e} "
            f"exceeds {tol:.1e} * scale {scale:.3e}"
        )


def _symmetrize(coeffs: np.ndarray) -> np.ndarray:
    """Exact conjugate symmetrization (mirror of row i is row M-1-i)."""
    return 0.5 * (coeffs + np.conj(coeffs[::-1]))


def _snap_transverse(kvecs: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Remove the longitudinal part of every mode, skipping modes already
    at the round-off floor so the operation is bitwise idempotent."""
    if len(kvecs) == 0:
        return coeffs
    kf = kvecs.astype(np.float64)
    k2 = np.einsum("mi,mi->m", kf, kf)
    out = coeffs.copy()
    for _ in range(2):
        s = np.einsum("mi,mi->m", kf, out)
        floor = _SNAP_REL * np.sqrt(k2) * np.linalg.norm(out, axis=1)
        live = np.abs(s) > floor
        if not np.any(live):
            break
        out[live] -= kf[live] * (s[live] / k2[live])[:, None]
    return out


# Amplitudes below this are treated as zero: relative-tolerance arithmetic
# is meaningless in the denormal range.
_AMP_FLOOR = 1e-300


def _drop_zero_rows(kvecs, coeffs):
    if len(coeffs) == 0:
        return kvecs, coeffs
    flat = coeffs.reshape(len(coeffs), -1)
    keep = np.max(np.abs(flat), axis=1) > _AMP_FLOOR
    return kvecs[keep], coeffs[keep]


# ---------------------------------------------------------------------------
# field types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralField:
    """Truncated Fourier vector field on the 3-torus (see module docstring)."""

    k_max: int
    kvecs: np.ndarray  # (M, 3) int64, lexicographically sorted
    coeffs: np.ndarray  # (M, 3) complex128

    def __post_init__(self):
        for name in ("kvecs", "coeffs"):
            arr = np.ascontiguousarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_modes(cls, k_max: int, modes, tol: float = DEFAULT_TOL) -> "SpectralField":
        """Build and validate a field from explicit modes (dict or arrays)."""
        kvecs, coeffs = _as_mode_arrays(modes, ncomp=3)
        field = cls(int(k_max), kvecs, coeffs)
        field.validate(tol)
        return field

    @property
    def n_modes(self) -> int:
        return len(self.kvecs)

    def mode(self, k) -> np.ndarray:
        """Amplitude at wave vector k (zeros if the mode is absent)."""
        hits = np.nonzero(np.all(self.kvecs == np.asarray(k, dtype=np.int64), axis=1))[0]
        if len(hits) == 0:
            return np.zeros(3, dtype=np.complex128)
        return self.coeffs[hits[0]].copy()

    def max_amplitude(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.n_modes else 0.0

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        kvecs, coeffs = self.kvecs, self.coeffs
        if kvecs.shape != (len(kvecs), 3) or coeffs.shape != (len(kvecs), 3):
            raise InputError("malformed mode arrays")
        if len(kvecs) == 0:
            return
        if np.any(np.all(kvecs == 0, axis=1)):
            raise InputError("zero mode present: field must have zero mean")
        if int(np.max(np.abs(kvecs))) > self.k_max:
            raise InputError(
                f"mode outside truncation: sup-norm {int(np.max(np.abs(kvecs)))} "
                f"> k_max {self.k_max}"
            )
        if not np.array_equal(kvecs, -kvecs[::-1]):
            raise InputError(
                "mode set must be mirror-closed and lexicographically sorted"
            )
        _check_reality(kvecs, coeffs, tol)
        scale = self.max_amplitude()
        div = np.abs(np.einsum("mi,mi->m", kvecs.astype(np.float64), coeffs))
        if scale > 0 and float(np.max(div)) > tol * scale:
            raise InputError(
                f"incompressibility violated: max |k.c| = {float(np.max(div)):.3e} "
                f"exceeds {tol:.1e} * scale {scale:.3e}"
            )

    # linear structure (used heavily by the path constructions)
    def __add__(self, other: "SpectralField") -> "SpectralField":
        return linear_combination([(1.0, self), (1.0, other)])

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        return linear_combination([(1.0, self), (-1.0, other)])

    def __mul__(self, scalar: float) -> "SpectralField":
        return linear_combination([(float(scalar), self)])

    __rmul__ = __mul__


@dataclass(frozen=True)
class ScalarField:
    """Truncated Fourier scalar on the 3-torus; real-valued, mean allowed."""

    k_max: int
    kvecs: np.ndarray  # (M, 3) int64, lexicographically sorted
    coeffs: np.ndarray  # (M,) complex128

    def __post_init__(self):
        for name in ("kvecs", "coeffs"):
            arr = np.ascontiguousarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_modes(cls, k_max: int, modes, tol: float = DEFAULT_TOL) -> "ScalarField":
        kvecs, coeffs = _as_mode_arrays(modes, ncomp=1)
        kvecs, coeffs = _mirror_close(kvecs, coeffs)
        _check_reality(kvecs, coeffs[:, None] if coeffs.ndim == 1 else coeffs, tol)
        coeffs = _symmetrize(coeffs)
        field = cls(int(k_max), kvecs, coeffs)
        field.validate(tol)
        return field

    @property
    def n_modes(self) -> int:
        return len(self.kvecs)

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        kvecs, coeffs = self.kvecs, self.coeffs
        if len(kvecs) == 0:
            return
        if int(np.max(np.abs(kvecs))) > self.k_max:
            raise InputError("scalar mode outside truncation")
        if not np.array_equal(kvecs, -kvecs[::-1]):
            raise InputError("scalar mode set must be mirror-closed and sorted")
        _check_reality(kvecs, coeffs, tol, what="scalar coefficients")

    def scaled(self, factor: float) -> "ScalarField":
        return ScalarField(self.k_max, self.kvecs.copy(), factor * self.coeffs)

    def mode(self, k) -> complex:
        hits = np.nonzero(np.all(self.kvecs == np.asarray(k, dtype=np.int64), axis=1))[0]
        return complex(self.coeffs[hits[0]]) if len(hits) else 0.0j


@dataclass(frozen=True)
class GridSampling:
    """Real-space samples of a vector field on the uniform n^3 grid
    x_j = 2*pi*j/n.  The quadrature substrate for every integral here."""

    n: int
    values: np.ndarray  # (n, n, n, 3) float64

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        if vals.shape != (self.n, self.n, self.n, 3):
            raise InputError(
                f"grid values must have shape (n, n, n, 3) with n={self.n}"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


def grid_points(n: int) -> np.ndarray:
    """Coordinates of the uniform grid, shape (n, n, n, 3)."""
    x = TAU * np.arange(n) / n
    xx, yy, zz = np.meshgrid(x, x, x, indexing="ij")
    return np.stack([xx, yy, zz], axis=-1)


def grid_integral(values: np.ndarray, n: int | None = None) -> float:
    """Exact trapezoid-free quadrature on the periodic grid: (2*pi/n)^3 * sum."""
    if n is None:
        n = values.shape[0]
    return float(np.sum(values) * (TAU / n) ** 3)


# ---------------------------------------------------------------------------
# projection, sampling, analysis
# ---------------------------------------------------------------------------

def leray_project(modes, k_max: int, tol: float = DEFAULT_TOL) -> SpectralField:
    """Project raw spectral coefficients onto the exact divergence-free space.

    The raw input must already be conjugate-symmetric within ``tol`` (a
    missing mirror partner counts as a zero amplitude); anything else is
    rejected.  Mode 0 is removed, every other mode loses its component
    along k, and exact-zero rows are dropped.
    """
    kvecs, coeffs = _as_mode_arrays(modes, ncomp=3)
    if len(kvecs) and int(np.max(np.abs(kvecs))) > int(k_max):
        raise InputError(
            f"raw mode outside requested truncation k_max={int(k_max)}"
        )
    kvecs, coeffs = _mirror_close(kvecs, coeffs)
    _check_reality(kvecs, coeffs, tol)
    coeffs = _symmetrize(coeffs)
    nonzero = np.any(kvecs != 0, axis=1)
    kvecs, coeffs = kvecs[nonzero], coeffs[nonzero]
    coeffs = _snap_transverse(kvecs, coeffs)
    kvecs, coeffs = _drop_zero_rows(kvecs, coeffs)
    field = SpectralField(int(k_max), kvecs, coeffs)
    field.validate(tol)
    return field


def _check_resolution(n: int, k_max: int):
    if n < 2 * k_max + 2:
        raise AliasingError(
            f"resolution n={n} too small for k_max={k_max}: need n >= {2 * k_max + 2}"
        )


def _scatter(kvecs: np.ndarray, coeffs: np.ndarray, n: int, ncomp: int) -> np.ndarray:
    shape = (n, n, n, ncomp) if ncomp > 1 else (n, n, n)
    dense = np.zeros(shape, dtype=np.complex128)
    if len(kvecs):
        idx = tuple((kvecs % n).T)
        dense[idx] = coeffs
    return dense


def sample(field: SpectralField, n: int, tol: float = DEFAULT_TOL) -> GridSampling:
    """Evaluate the field on the uniform n^3 grid (exact for n >= 2*k_max+2)."""
    _check_resolution(n, field.k_max)
    dense = _scatter(field.kvecs, field.coeffs, n, ncomp=3)
    vals = np.fft.ifftn(dense, axes=(0, 1, 2)) * n**3
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    resid = float(np.max(np.abs(vals.imag))) if vals.size else 0.0
    if resid > tol * max(1.0, scale):
        raise RealityError(
            f"sampling produced imaginary residue {resid:.3e} (scale {scale:.3e})"
        )
    return GridSampling(n, np.ascontiguousarray(vals.real))


def sample_scalar(field: ScalarField, n: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    _check_resolution(n, field.k_max)
    dense = _scatter(field.kvecs, field.coeffs, n, ncomp=1)
    vals = np.fft.ifftn(dense) * n**3
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    resid = float(np.max(np.abs(vals.imag))) if vals.size else 0.0
    if resid > tol * max(1.0, scale):
        raise RealityError(
            f"scalar sampling produced imaginary residue {resid:.3e}"
        )
    return np.ascontiguousarray(vals.real)


@dataclass(frozen=True)
class AnalyzeResult:
    """Band-limited field recovered from grid data plus what was removed.

    ``removed_energy`` is the L2 energy (in the (2*pi)^3 box) discarded by
    truncation to the band, by the divergence-free projection and by mean
    removal together.
    """

    field: SpectralField
    removed_energy: float
    input_energy: float

    @property
    def relative_residual(self) -> float:
        if self.input_energy <= 0.0:
            return 0.0
        return float(np.sqrt(max(self.removed_energy, 0.0) / self.input_energy))


def analyze(grid: GridSampling, k_max: int, tol: float = DEFAULT_TOL) -> AnalyzeResult:
    """Discrete Fourier analysis of grid samples followed by the
    divergence-free projection; reports the energy removed."""
    _check_resolution(grid.n, k_max)
    n = grid.n
    chat = np.fft.fftn(grid.values, axes=(0, 1, 2)) / n**3
    kvecs = band_kvecs(k_max, include_zero=False)
    raw = chat[tuple((kvecs % n).T)]
    coeffs = _snap_transverse(kvecs, _symmetrize(raw))
    kvecs2, coeffs2 = _drop_zero_rows(kvecs, coeffs)
    field = SpectralField(int(k_max), kvecs2, coeffs2)
    field.validate(tol)
    input_energy = VOLUME * float(np.mean(np.sum(grid.values**2, axis=-1)))
    kept_energy = VOLUME * float(np.sum(np.abs(coeffs2) ** 2))
    removed = max(input_energy - kept_energy, 0.0)
    return AnalyzeResult(field, removed, input_energy)


@dataclass(frozen=True)
class ScalarAnalyzeResult:
    field: ScalarField
    removed_energy: float
    input_energy: float

    @property
    def relative_residual(self) -> float:
        if self.input_energy <= 0.0:
            return 0.0
        return float(np.sqrt(max(self.removed_energy, 0.0) / self.input_energy))


def analyze_scalar(values: np.ndarray, k_max: int, tol: float = DEFAULT_TOL) -> ScalarAnalyzeResult:
    """Scalar counterpart of ``analyze``; the mean mode is kept."""
    n = values.shape[0]
    _check_resolution(n, k_max)
    chat = np.fft.fftn(values) / n**3
    kvecs = band_kvecs(k_max, include_zero=True)
    coeffs = _symmetrize(chat[tuple((kvecs % n).T)])
    kvecs2, coeffs2 = _drop_zero_rows(kvecs, coeffs)
    field = ScalarField(int(k_max), kvecs2, coeffs2)
    field.validate(tol)
    input_energy = VOLUME * float(np.mean(values**2))
    kept_energy = VOLUME * float(np.sum(np.abs(coeffs2) ** 2))
    return ScalarAnalyzeResult(field, max(input_energy - kept_energy, 0.0), input_energy)


def linear_combination(terms) -> SpectralField:
    """Real-weighted sum of fields over the union of their mode sets."""
    terms = [(float(a), f) for a, f in terms]
    k_max = max((f.k_max for _, f in terms), default=0)
    acc: dict = {}
    for a, f in terms:
        if a == 0.0:
            continue
        for k, c in zip(map(tuple, f.kvecs), f.coeffs):
            if k in acc:
                acc[k] = acc[k] + a * c
            else:
                acc[k] = a * c
    if not acc:
        return SpectralField(k_max, np.zeros((0, 3), np.int64), np.zeros((0, 3), np.complex128))
    kvecs = np.array(sorted(acc.keys()), dtype=np.int64)
    coeffs = np.array([acc[tuple(k)] for k in kvecs], dtype=np.complex128)
    coeffs = _snap_transverse(kvecs, _symmetrize(coeffs))
    kvecs, coeffs = _drop_zero_rows(kvecs, coeffs)
    field = SpectralField(k_max, kvecs, coeffs)
    field.validate()
    return field


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def abc_field(A: float, B: float, C: float) -> SpectralField:
    """The classical three-parameter Beltrami field

        (A sin z + C cos y,  B sin x + A cos z,  C sin y + B cos x)

    as its exact 6-mode coefficient set (zero-amplitude modes dropped)."""
    modes: dict = {}

    def add(k, vec):
        if any(abs(v) > 0 for v in vec):
            modes[k] = np.array(vec, dtype=np.complex128)
            modes[tuple(-np.array(k))] = np.conj(modes[k])

    add((0, 0, 1), (-0.5j * A, 0.5 * A, 0.0))
    add((0, 1, 0), (0.5 * C, 0.0, -0.5j * C))
    add((1, 0, 0), (0.0, -0.5j * B, 0.5 * B))
    return SpectralField.from_modes(1, modes)


def random_field(k_max: int, seed: int, amplitude: float) -> SpectralField:
    """Seeded random exact divergence-free field.

    Coefficients are drawn per lexicographically positive mode from the
    counter-based Philox generator (portable across platforms and numpy
    versions), mirrored, projected, then rescaled so that the RMS pointwise
    magnitude sqrt(mean |w|^2) equals ``amplitude``.  Identical seeds give
    bit-identical fields.
    """
    if amplitude == 0.0:
        return SpectralField(int(k_max), np.zeros((0, 3), np.int64), np.zeros((0, 3), np.complex128))
    rng = np.random.Generator(np.random.Philox(int(seed)))
    kvecs = band_kvecs(int(k_max), include_zero=False)
    pos = kvecs[lex_positive(kvecs)]
    draws = rng.standard_normal((len(pos), 3, 2))
    coeffs: dict = {}
    for k, d in zip(map(tuple, pos), draws):
        c = (d[:, 0] + 1j * d[:, 1]) / np.sqrt(2.0)
        coeffs[k] = c
        coeffs[tuple(-np.array(k))] = np.conj(c)
    field = leray_project(coeffs, int(k_max))
    rms = np.sqrt(float(np.sum(np.abs(field.coeffs) ** 2)))
    if rms == 0.0:
        raise InternalInconsistencyError("projection annihilated the random draw")
    return linear_combination([(float(amplitude) / rms, field)])


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def write_field(field: SpectralField, path, metadata: dict | None = None) -> None:
    """Field file: {"k_max": K, "modes": [{"k": [..], "re": [..], "im": [..]}]}.

    Only modes with nonzero amplitude are emitted; floats use repr so the
    round trip is bit-exact.
    """
    doc = {
        "k_max": int(field.k_max),
        "modes": [
            {
                "k": [int(v) for v in k],
                "re": [float(x) for x in c.real],
                "im": [float(x) for x in c.imag],
            }
            for k, c in zip(field.kvecs, field.coeffs)
        ],
    }
    if metadata:
        doc["metadata"] = metadata
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def read_field(path, tol: float = DEFAULT_TOL) -> SpectralField:
    """Read and fully validate a vector field file."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read field file {path}: {exc}") from exc
    try:
        kvecs = np.array([m["k"] for m in doc["modes"]], dtype=np.int64).reshape(-1, 3)
        coeffs = np.array(
            [np.asarray(m["re"], float) + 1j * np.asarray(m["im"], float) for m in doc["modes"]],
            dtype=np.complex128,
        ).reshape(-1, 3)
        k_max = int(doc["k_max"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed field file {path}: {exc}") from exc
    return SpectralField.from_modes(k_max, (kvecs, coeffs), tol=tol)


def write_scalar_field(field: ScalarField, path, metadata: dict | None = None) -> None:
    doc = {
        "k_max": int(field.k_max),
        "modes": [
            {"k": [int(v) for v in k], "re": float(c.real), "im": float(c.imag)}
            for k, c in zip(field.kvecs, field.coeffs)
            if abs(c) > 0
        ],
    }
    if metadata:
        doc["metadata"] = metadata
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def read_scalar_field(path, tol: float = DEFAULT_TOL) -> ScalarField:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read scalar field file {path}: {exc}") from exc
    try:
        kvecs = np.array([m["k"] for m in doc["modes"]], dtype=np.int64).reshape(-1, 3)
        coeffs = np.array(
            [float(m["re"]) + 1j * float(m["im"]) for m in doc["modes"]],
            dtype=np.complex128,
        )
        k_max = int(doc["k_max"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed scalar field file {path}: {exc}") from exc
    return ScalarField.from_modes(k_max, (kvecs, coeffs), tol=tol)


def write_grid_csv(grid: GridSampling, path) -> None:
    """Grid dump: CSV with columns x,y,z,wx,wy,wz (x outermost, z innermost)."""
    pts = grid_points(grid.n).reshape(-1, 3)
    vals = grid.values.reshape(-1, 3)
    with open(path, "w") as fh:
        fh.write("x,y,z,wx,wy,wz\n")
        for p, v in zip(pts, vals):
            row = (float(p[0]), float(p[1]), float(p[2]), float(v[0]), float(v[1]), float(v[2]))
            fh.write(",".join(repr(x) for x in row) + "\n")
