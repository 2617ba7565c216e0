"""Volume-preserving shear maps and their push-forward action on fields.

A shear moves one coordinate by a profile that depends only on the other
two:  (x_a, x_others) -> (x_a + g(x_others), x_others).  Its Jacobian is
unit triangular, so volume preservation is exact, and the inverse is the
same shear with -g.  Chains of shears along different axes compose into a
rich non-commuting family of volume-preserving diffeomorphisms with exact
closed-form inverses, so any invariance failure observed downstream indicts
the field transform rather than the map.

The push-forward (Phi_* w)(q) = DPhi(p) w(p) with p = Phi^{-1}(q) is
evaluated in Lagrangian form: every output grid point is pulled back
through the chain (accumulating the exact Jacobian product on the way) and
the field is evaluated there by its trigonometric series.  That evaluation
at non-uniform points is the package's hot kernel.  The result is generally
not band-limited; analysis back to k_out reports the spilled energy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InputError, TruncationError
from .kernels import trig_eval
from .spectral import (
    TAU,
    DEFAULT_TOL,
    GridSampling,
    ScalarField,
    SpectralField,
    analyze,
    analyze_scalar,
    grid_points,
    lex_positive,
)

_AXES = "xyz"


def _axis_index(axis) -> int:
    if isinstance(axis, str):
        if axis not in _AXES:
            raise InputError(f"axis must be one of 'x', 'y', 'z', got {axis!r}")
        return _AXES.index(axis)
    if axis not in (0, 1, 2):
        raise InputError(f"axis must be 0, 1 or 2, got {axis!r}")
    return int(axis)


@dataclass(frozen=True)
class ShearMap:
    """Coordinate shear x_a -> x_a + g(others) with trig-polynomial profile."""

    axis: int
    profile: ScalarField

    def __post_init__(self):
        object.__setattr__(self, "axis", _axis_index(self.axis))
        if len(self.profile.kvecs) and np.any(self.profile.kvecs[:, self.axis] != 0):
            raise InputError(
                f"shear profile must not depend on its own axis '{_AXES[self.axis]}'"
            )

    @property
    def axis_name(self) -> str:
        return _AXES[self.axis]

    def inverse(self) -> "ShearMap":
        return ShearMap(self.axis, self.profile.scaled(-1.0))

    def profile_values(self, points: np.ndarray) -> np.ndarray:
        return trig_eval(points, self.profile.kvecs, self.profile.coeffs)

    def profile_gradient(self, points: np.ndarray) -> np.ndarray:
        kf = self.profile.kvecs.astype(np.float64)
        dcoeffs = 1j * kf * self.profile.coeffs[:, None]
        return trig_eval(points, self.profile.kvecs, dcoeffs)

    def apply(self, points: np.ndarray) -> np.ndarray:
        out = np.array(points, dtype=np.float64)
        out[:, self.axis] += self.profile_values(out)
        return out

    def apply_inverse(self, points: np.ndarray) -> np.ndarray:
        out = np.array(points, dtype=np.float64)
        out[:, self.axis] -= self.profile_values(out)
        return out


@dataclass(frozen=True)
class DiffeoChain:
    """Composition of shears; maps[0] acts first."""

    maps: tuple

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        for m in self.maps:
            if not isinstance(m, ShearMap):
                raise InputError("chain entries must be ShearMap instances")

    def __len__(self) -> int:
        return len(self.maps)

    def inverse(self) -> "DiffeoChain":
        return DiffeoChain(tuple(m.inverse() for m in reversed(self.maps)))

    def apply(self, points: np.ndarray) -> np.ndarray:
        out = np.array(points, dtype=np.float64)
        for m in self.maps:
            out = m.apply(out)
        return out

    def apply_inverse(self, points: np.ndarray) -> np.ndarray:
        out = np.array(points, dtype=np.float64)
        for m in reversed(self.maps):
            out = m.apply_inverse(out)
        return out


def identity_chain() -> DiffeoChain:
    return DiffeoChain(())


@dataclass(frozen=True)
class TransformReport:
    """Truncation diagnostics of a push-forward or scalar transport."""

    removed_energy: float
    input_energy: float

    @property
    def projection_residual(self) -> float:
        if self.input_energy <= 0.0:
            return 0.0
        return float(np.sqrt(max(self.removed_energy, 0.0) / self.input_energy))


def _pullback_with_jacobian(chain: DiffeoChain, points: np.ndarray):
    """Walk the chain inverse from each point; accumulate DPhi along the way.

    Walking maps[-1]..maps[0] backwards through their inverses visits the
    intermediate points p_i at which each shear acts; the forward Jacobian
    is the ordered product DPhi_m(p_m) ... DPhi_1(p_1), accumulated here by
    right multiplication.  For a shear, DPhi = I + e_a (grad g)^T, so
    J <- J + J[:, a] (grad g)^T.
    """
    p = np.array(points, dtype=np.float64)
    npts = p.shape[0]
    jac = np.broadcast_to(np.eye(3), (npts, 3, 3)).copy()
    for m in reversed(chain.maps):
        p[:, m.axis] -= m.profile_values(p)
        dg = m.profile_gradient(p)
        jac += jac[:, :, m.axis, None] * dg[:, None, :]
    return np.mod(p, TAU), jac


def pushforward(
    chain: DiffeoChain,
    field: SpectralField,
    k_out: int,
    n: int,
    residual_bound: float | None = 1e-6,
    tol: float = DEFAULT_TOL,
):
    """Push a field forward through a shear chain.

    Returns ``(field_out, report)`` where ``field_out`` is the analysis of
    the exact point-wise push-forward to truncation ``k_out``.  The
    push-forward of a band-limited field under a trigonometric shear is not
    band-limited; ``report.projection_residual`` measures the spilled
    fraction (L2, relative).  When ``residual_bound`` is not None and the
    residual exceeds it, the transform is refused.
    """
    pts = grid_points(n).reshape(-1, 3)
    p, jac = _pullback_with_jacobian(chain, pts)
    wp = trig_eval(p, field.kvecs, field.coeffs)
    out = np.einsum("pij,pj->pi", jac, wp)
    res = analyze(GridSampling(n, out.reshape(n, n, n, 3)), k_out, tol=tol)
    report = TransformReport(res.removed_energy, res.input_energy)
    if residual_bound is not None and report.projection_residual > residual_bound:
        raise TruncationError(
            f"push-forward truncation residual {report.projection_residual:.3e} "
            f"exceeds bound {residual_bound:.1e}; raise k_out (currently {k_out}) "
            f"and the grid resolution"
        )
    return res.field, report


def transport_scalar(
    chain: DiffeoChain,
    f: ScalarField,
    k_out: int,
    n: int,
    residual_bound: float | None = 1e-6,
    tol: float = DEFAULT_TOL,
):
    """Lagrangian transport of a scalar: samples f(Phi^{-1}(x)) and analyzes
    to k_out.  No Jacobian factor, scalars move by composition."""
    pts = grid_points(n).reshape(-1, 3)
    p = chain.apply_inverse(pts)
    vals = trig_eval(np.mod(p, TAU), f.kvecs, f.coeffs)
    res = analyze_scalar(vals.reshape(n, n, n), k_out, tol=tol)
    report = TransformReport(res.removed_energy, res.input_energy)
    if residual_bound is not None and report.projection_residual > residual_bound:
        raise TruncationError(
            f"scalar transport truncation residual {report.projection_residual:.3e} "
            f"exceeds bound {residual_bound:.1e}; raise k_out (currently {k_out})"
        )
    return res.field, report


# ---------------------------------------------------------------------------
# chain files and generators
# ---------------------------------------------------------------------------

def write_chain(chain: DiffeoChain, path) -> None:
    """Chain file: [{"axis": "z", "profile_modes": {scalar field format}}]."""
    doc = [
        {
            "axis": m.axis_name,
            "profile_modes": {
                "k_max": int(m.profile.k_max),
                "modes": [
                    {
                        "k": [int(v) for v in k],
                        "re": float(c.real),
                        "im": float(c.imag),
                    }
                    for k, c in zip(m.profile.kvecs, m.profile.coeffs)
                    if abs(c) > 0
                ],
            },
        }
        for m in chain.maps
    ]
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def read_chain(path, tol: float = DEFAULT_TOL) -> DiffeoChain:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read chain file {path}: {exc}") from exc
    maps = []
    try:
        for entry in doc:
            pm = entry["profile_modes"]
            kvecs = np.array([m["k"] for m in pm["modes"]], dtype=np.int64).reshape(-1, 3)
            coeffs = np.array(
                [float(m["re"]) + 1j * float(m["im"]) for m in pm["modes"]],
                dtype=np.complex128,
            )
            profile = ScalarField.from_modes(int(pm["k_max"]), (kvecs, coeffs), tol=tol)
            maps.append(ShearMap(entry["axis"], profile))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed chain file {path}: {exc}") from exc
    return DiffeoChain(tuple(maps))


def random_shear_chain(
    n_shears: int,
    seed: int,
    max_amplitude: float = 0.5,
    max_profile_mode: int = 2,
) -> DiffeoChain:
    """Seeded random chain: each shear gets a random axis and a random
    nonconstant transverse profile rescaled to a sup-norm drawn in
    [0.4, 1.0] * max_amplitude."""
    rng = np.random.Generator(np.random.Philox(int(seed) + 0x5EA2))
    maps = []
    for _ in range(n_shears):
        axis = int(rng.integers(0, 3))
        others = [j for j in range(3) if j != axis]
        modes: dict = {}
        rows = []
        for a in range(-max_profile_mode, max_profile_mode + 1):
            for b in range(-max_profile_mode, max_profile_mode + 1):
                k = [0, 0, 0]
                k[others[0]], k[others[1]] = a, b
                rows.append(tuple(k))
        rows = np.array(sorted(set(rows)), dtype=np.int64)
        pos = lex_positive(rows)
        draws = rng.standard_normal((int(np.sum(pos)), 2))
        for k, d in zip(map(tuple, rows[pos]), draws):
            c = (d[0] + 1j * d[1]) / 2.0
            modes[k] = c
            modes[tuple(-np.array(k))] = np.conj(c)
        profile = ScalarField.from_modes(max_profile_mode, modes)
        # normalize to a drawn sup-norm on a fine transverse grid
        g = np.abs(trig_eval(grid_points(32).reshape(-1, 3), profile.kvecs, profile.coeffs))
        sup = float(np.max(g))
        amp = float(rng.uniform(0.4, 1.0)) * max_amplitude
        profile = profile.scaled(amp / sup)
        maps.append(ShearMap(axis, profile))
    return DiffeoChain(tuple(maps))
