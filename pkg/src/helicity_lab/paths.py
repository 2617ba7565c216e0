"""Explicit continuous paths between fields on a fixed helicity level set.

For endpoints of positive helicity the path travels in three segments:
shrink w0 while growing its dominant positive-helical basis mode, rotate in
the plane of the two chosen basis modes, then grow w1 back.  Quadratic
expansion of the helicity along each segment gives a closed form for
H(w(t)) that stays positive throughout, and the rescaling

    w_level(t) = sqrt(c / H(w(t))) * w(t)

pins the whole path to the exact level c while fixing the endpoints.  The
negative case mirrors through the negative-helical amplitudes.  Endpoints
of zero helicity are joined linearly through the zero field, along which
helicity vanishes identically by quadratic scaling.

Basis realization: each wave vector pair (k, -k) and eigenvalue sign
carries two real unit-L2-norm eigenfields, the "cos" and "sin" quadratures
(amplitude 1/sqrt(2 (2 pi)^3) times 1 or i at k).  The expansion
coefficient of a real field against such a basis element is
sqrt(2 (2 pi)^3) times the real or imaginary part of its helical amplitude,
which is a real number, exactly what the closed-form trace needs.  The
quadrature split also keeps same-k choices at the two endpoints either
identical or orthogonal, so the same-mode variant of the trace formula
applies verbatim.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .curl_ops import helical_decompose, helical_field
from .errors import (
    InternalInconsistencyError,
    PathPreconditionError,
)
from .functionals import energy, helicity_spectral
from .spectral import (
    VOLUME,
    SpectralField,
    lex_positive,
    linear_combination,
    write_field,
)

COS, SIN = "cos", "sin"

_UNIT_AMP = 1.0 / math.sqrt(2.0 * VOLUME)
_COEFF_SCALE = math.sqrt(2.0 * VOLUME)

DEFAULT_SAMPLES = 101
MODE_THRESHOLD_REL = 1e-12


@dataclass(frozen=True)
class BasisMode:
    """A real curl eigenfield: wave-vector pair, eigenvalue sign, quadrature."""

    k: tuple
    sign: int
    quadrature: str

    @property
    def eigenvalue(self) -> float:
        return float(self.sign) * float(np.linalg.norm(np.asarray(self.k, float)))


def basis_field(mode: BasisMode) -> SpectralField:
    """The unit-L2-norm real eigenfield for a basis mode."""
    amp = _UNIT_AMP if mode.quadrature == COS else 1j * _UNIT_AMP
    return helical_field(mode.k, mode.sign, amplitude=amp)


def expansion_coefficient(w: SpectralField, mode: BasisMode) -> float:
    """Real L2 expansion coefficient of w against the basis eigenfield."""
    a = helical_decompose(w).amplitude(mode.k, mode.sign)
    part = a.real if mode.quadrature == COS else a.imag
    return _COEFF_SCALE * part


def choose_basis_mode(
    w: SpectralField, sign: int, threshold_rel: float = MODE_THRESHOLD_REL
) -> BasisMode:
    """Deterministic mode choice: the (k, sign) pair with the largest
    helical amplitude (lexicographic tie-break over the canonical
    half-space), then the quadrature with the larger real coefficient.
    Amplitudes below threshold_rel times the field's largest helical
    amplitude count as zero."""
    d = helical_decompose(w)
    if len(d.kvecs) == 0:
        raise InternalInconsistencyError("mode choice on the zero field")
    amps = d.a_plus if sign > 0 else d.a_minus
    ref = max(float(np.max(np.abs(d.a_plus))), float(np.max(np.abs(d.a_minus))))
    pos = lex_positive(d.kvecs)
    mags = np.where(pos, np.abs(amps), -1.0)
    best = int(np.argmax(mags))
    if mags[best] <= threshold_rel * ref:
        raise InternalInconsistencyError(
            "no usable helical amplitude of the required sign; the helicity "
            "sign precondition rules this out"
        )
    a = amps[best]
    quadrature = COS if abs(a.real) >= abs(a.imag) else SIN
    return BasisMode(tuple(int(v) for v in d.kvecs[best]), sign, quadrature)


@dataclass
class HelicityPath:
    """A piecewise path t in [0,1] -> SpectralField with its construction data.

    ``level`` is None for a raw path; after ``rescale_to_level`` every
    evaluation is multiplied by sqrt(level / H_raw(t)).
    """

    w0: SpectralField
    w1: SpectralField
    kind: str  # "positive" | "negative" | "zero"
    h0: float
    h1: float
    mode0: BasisMode | None = None
    mode1: BasisMode | None = None
    coeff0: float = 0.0
    coeff1: float = 0.0
    level: float | None = None
    constant: bool = False

    def _basis0(self) -> SpectralField:
        return basis_field(self.mode0)

    def _basis1(self) -> SpectralField:
        return basis_field(self.mode1)

    def evaluate_raw(self, t: float) -> SpectralField:
        if t < 0.0 or t > 1.0:
            raise PathPreconditionError(f"path parameter {t} outside [0, 1]")
        if self.constant:
            return self.w0
        if self.kind == "zero":
            if t <= 0.5:
                return linear_combination([(1.0 - 2.0 * t, self.w0)])
            return linear_combination([(2.0 * t - 1.0, self.w1)])
        if t <= 0.25:
            return linear_combination(
                [(8.0 * t * self.coeff0, self._basis0()), (1.0 - 4.0 * t, self.w0)]
            )
        if t <= 0.75:
            theta = math.pi * t - math.pi / 4.0
            return linear_combination(
                [
                    (2.0 * math.cos(theta) * self.coeff0, self._basis0()),
                    (2.0 * math.sin(theta) * self.coeff1, self._basis1()),
                ]
            )
        return linear_combination(
            [((8.0 - 8.0 * t) * self.coeff1, self._basis1()), (4.0 * t - 3.0, self.w1)]
        )

    def scale(self, t: float) -> float:
        if self.level is None or self.kind == "zero":
            return 1.0
        h = helicity_spectral(self.evaluate_raw(t))
        if self.kind == "positive" and h <= 0.0:
            raise InternalInconsistencyError(
                f"raw path helicity {h:.3e} not positive at t={t}"
            )
        if self.kind == "negative" and h >= 0.0:
            raise InternalInconsistencyError(
                f"raw path helicity {h:.3e} not negative at t={t}"
            )
        return math.sqrt(self.level / h)

    def evaluate(self, t: float) -> SpectralField:
        raw = self.evaluate_raw(t)
        if self.level is None or self.kind == "zero":
            return raw
        return linear_combination([(self.scale(t), raw)])

    def helicity_trace(self, ts) -> np.ndarray:
        return np.array([helicity_spectral(self.evaluate(t)) for t in ts])

    def raw_helicity_trace(self, ts) -> np.ndarray:
        return np.array([helicity_spectral(self.evaluate_raw(t)) for t in ts])

    def formula_trace(self, ts) -> np.ndarray:
        """Closed-form helicity of the raw path (quadratic expansion along
        each segment); the object of the trace-matching check."""
        out = np.empty(len(ts))
        for i, t in enumerate(ts):
            if self.kind == "zero":
                out[i] = 0.0
                continue
            if self.constant:
                out[i] = self.h0
                continue
            lam0 = self.mode0.eigenvalue
            lam1 = self.mode1.eigenvalue
            if t <= 0.25:
                out[i] = 16.0 * t * self.coeff0**2 / lam0 + (1.0 - 4.0 * t) ** 2 * self.h0
            elif t <= 0.75:
                theta = math.pi * t - math.pi / 4.0
                if self.mode0 == self.mode1:
                    amp = math.cos(theta) * self.coeff0 + math.sin(theta) * self.coeff1
                    out[i] = 4.0 * amp**2 / lam0
                else:
                    out[i] = (
                        4.0 * self.coeff0**2 * math.cos(theta) ** 2 / lam0
                        + 4.0 * self.coeff1**2 * math.sin(theta) ** 2 / lam1
                    )
            else:
                out[i] = (
                    16.0 * (1.0 - t) * self.coeff1**2 / lam1
                    + (4.0 * t - 3.0) ** 2 * self.h1
                )
        return out

    def continuity_report(self, ts) -> dict:
        """Adjacent-sample distances in L2 and the implied Lipschitz bound."""
        fields = [self.evaluate(t) for t in ts]
        dists = [
            math.sqrt(energy(fields[i + 1] - fields[i])) for i in range(len(fields) - 1)
        ]
        steps = np.diff(np.asarray(ts, dtype=float))
        return {
            "max_step_distance": max(dists) if dists else 0.0,
            "lipschitz_estimate": max(
                (d / h for d, h in zip(dists, steps) if h > 0), default=0.0
            ),
        }


def _signed_path(w0: SpectralField, w1: SpectralField, sign: int) -> HelicityPath:
    h0 = helicity_spectral(w0)
    h1 = helicity_spectral(w1)
    word = "positive" if sign > 0 else "negative"
    for name, h in (("w0", h0), ("w1", h1)):
        if sign * h <= 0.0:
            raise PathPreconditionError(
                f"{word} path requires {word} endpoint helicity; "
                f"H({name}) = {h:.6e}"
            )
    mode0 = choose_basis_mode(w0, sign)
    mode1 = choose_basis_mode(w1, sign)
    return HelicityPath(
        w0=w0,
        w1=w1,
        kind=word,
        h0=h0,
        h1=h1,
        mode0=mode0,
        mode1=mode1,
        coeff0=expansion_coefficient(w0, mode0),
        coeff1=expansion_coefficient(w1, mode1),
    )


def positive_path(w0: SpectralField, w1: SpectralField) -> HelicityPath:
    """Raw path of everywhere-positive helicity joining two fields of
    positive helicity."""
    return _signed_path(w0, w1, +1)


def constant_path(w: SpectralField) -> HelicityPath:
    """The path t -> w; useful as the trivial rescaling fixture."""
    h = helicity_spectral(w)
    if h == 0.0:
        raise PathPreconditionError("constant path needs nonzero helicity")
    return HelicityPath(
        w0=w,
        w1=w,
        kind="positive" if h > 0 else "negative",
        h0=h,
        h1=h,
        constant=True,
    )


def negative_path(w0: SpectralField, w1: SpectralField) -> HelicityPath:
    """Mirror construction through the negative-helical amplitudes."""
    return _signed_path(w0, w1, -1)


def zero_path(
    w0: SpectralField, w1: SpectralField, rel_tol: float = 1e-10
) -> HelicityPath:
    """Linear path through the zero field between two zero-helicity fields."""
    for name, w in (("w0", w0), ("w1", w1)):
        h = helicity_spectral(w)
        if abs(h) > rel_tol * max(energy(w), 1e-300):
            raise PathPreconditionError(
                f"zero path requires |H({name})| <= {rel_tol:g} * E; got H = {h:.6e}"
            )
    return HelicityPath(
        w0=w0,
        w1=w1,
        kind="zero",
        h0=helicity_spectral(w0),
        h1=helicity_spectral(w1),
        level=0.0,
    )


def rescale_to_level(
    path: HelicityPath,
    c: float,
    samples: int = DEFAULT_SAMPLES,
    endpoint_rel_tol: float = 1e-9,
) -> HelicityPath:
    """Pin a raw signed path to the exact helicity level c.

    Requires c to match the endpoint helicities to ``endpoint_rel_tol``
    (so the scale factor is 1 there) and the sampled raw helicity to have
    the sign of c everywhere.
    """
    if path.kind == "zero":
        raise PathPreconditionError("zero paths are already at level 0")
    if path.kind == "positive" and c <= 0:
        raise PathPreconditionError("positive path cannot be rescaled to c <= 0")
    if path.kind == "negative" and c >= 0:
        raise PathPreconditionError("negative path cannot be rescaled to c >= 0")
    for name, h in (("w0", path.h0), ("w1", path.h1)):
        if abs(h - c) > endpoint_rel_tol * abs(c):
            raise PathPreconditionError(
                f"level c={c!r} differs from H({name})={h!r} by more than "
                f"{endpoint_rel_tol:g} relative"
            )
    ts = np.linspace(0.0, 1.0, samples)
    trace = path.raw_helicity_trace(ts)
    if path.kind == "positive" and np.min(trace) <= 0.0:
        raise InternalInconsistencyError(
            "sampled raw helicity dips to a non-positive value; "
            "the raw path construction failed"
        )
    if path.kind == "negative" and np.max(trace) >= 0.0:
        raise InternalInconsistencyError(
            "sampled raw helicity reaches a non-negative value; "
            "the raw path construction failed"
        )
    return HelicityPath(
        w0=path.w0,
        w1=path.w1,
        kind=path.kind,
        h0=path.h0,
        h1=path.h1,
        mode0=path.mode0,
        mode1=path.mode1,
        coeff0=path.coeff0,
        coeff1=path.coeff1,
        level=float(c),
        constant=path.constant,
    )


def export_path(path: HelicityPath, directory, ts=None) -> None:
    """Write the sampled path: one field file per t plus trace.csv with
    columns t, H_raw, scale, H_rescaled."""
    if ts is None:
        ts = np.linspace(0.0, 1.0, DEFAULT_SAMPLES)
    os.makedirs(directory, exist_ok=True)
    rows = []
    for i, t in enumerate(ts):
        f = path.evaluate(float(t))
        write_field(f, os.path.join(directory, f"field_{i:04d}.json"))
        h_raw = helicity_spectral(path.evaluate_raw(float(t)))
        s = path.scale(float(t))
        rows.append((float(t), h_raw, s, s * s * h_raw))
    with open(os.path.join(directory, "trace.csv"), "w") as fh:
        fh.write("t,H_raw,scale,H_rescaled\n")
        for row in rows:
            fh.write(f"{row[0]!r},{row[1]!r},{row[2]!r},{row[3]!r}\n")
