"""Batch verification suite behind the ``verify`` CLI command.

Runs the library's invariant checks end to end with fixed seeds and
reports one line per check.  Every numeric entry in the report is a
deterministic function of the seed, so two runs with the same seed produce
byte-identical reports (timings are kept out of the report for that
reason).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .curl_ops import (
    curl,
    curl_inv,
    helical_decompose,
    helical_field,
    helical_reconstruct,
)
from .errors import VerificationError
from .functionals import (
    check_kernel_alignment,
    commutator,
    commutator_pointwise,
    derivative_vanishing_test,
    energy,
    helicity_quadrature,
    helicity_spectral,
    inner_product_l2,
)
from .paths import positive_path, rescale_to_level, zero_path
from .shears import DiffeoChain, ShearMap, identity_chain, pushforward, random_shear_chain
from .spectral import (
    VOLUME,
    ScalarField,
    SpectralField,
    abc_field,
    analyze,
    band_kvecs,
    leray_project,
    linear_combination,
    random_field,
    sample,
)
from .transport import FlowState, advect, max_relative_drift


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    bound: float
    passed: bool

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<44s} value={self.value:.6g}  bound={self.bound:.6g}"


def _leq(name, value, bound):
    return CheckResult(name, float(value), float(bound), bool(value <= bound))


def _geq(name, value, bound):
    return CheckResult(name, float(value), float(bound), bool(value >= bound))


def _field_diff(a: SpectralField, b: SpectralField) -> float:
    return linear_combination([(1.0, a), (-1.0, b)]).max_amplitude()


def run_verification(seed: int = 1, quick: bool = False) -> list[CheckResult]:
    checks: list[CheckResult] = []
    n_fields = 3 if quick else 8
    k_eig = 3 if quick else 4

    fields = [random_field(4, seed + i, 1.0) for i in range(n_fields)]

    # representation invariants
    div_worst = 0.0
    real_worst = 0.0
    for w in fields:
        kf = w.kvecs.astype(np.float64)
        div_worst = max(div_worst, float(np.max(np.abs(np.einsum("mi,mi->m", kf, w.coeffs)))) / w.max_amplitude())
        real_worst = max(
            real_worst,
            float(np.max(np.abs(w.coeffs - np.conj(w.coeffs[::-1])))) / w.max_amplitude(),
        )
    checks.append(_leq("incompressibility max |k.c|/|c|", div_worst, 1e-13))
    checks.append(_leq("reality residual", real_worst, 1e-13))

    # projection idempotence, bitwise
    w = fields[0]
    again = leray_project((w.kvecs, w.coeffs), w.k_max)
    idem = 0.0 if (
        np.array_equal(again.kvecs, w.kvecs) and np.array_equal(again.coeffs, w.coeffs)
    ) else 1.0
    checks.append(_leq("projection idempotent (bitwise)", idem, 0.0))

    # sampling round trip and Parseval
    rt_worst = 0.0
    pars_worst = 0.0
    for w in fields[:3]:
        n = 2 * w.k_max + 2
        res = analyze(sample(w, n), w.k_max)
        rt_worst = max(rt_worst, _field_diff(res.field, w))
        quad = VOLUME * float(np.mean(np.sum(sample(w, n).values ** 2, axis=-1)))
        pars_worst = max(pars_worst, abs(quad - energy(w)) / energy(w))
    checks.append(_leq("sample/analyze round trip", rt_worst, 1e-12))
    checks.append(_leq("Parseval grid vs spectral", pars_worst, 1e-10))

    # curl eigenstructure
    eig_worst = 0.0
    for k in band_kvecs(k_eig)[:: 7 if quick else 1]:
        for sign in (+1, -1):
            v = helical_field(tuple(k), sign)
            lam = sign * float(np.linalg.norm(k.astype(float)))
            eig_worst = max(eig_worst, _field_diff(curl(v), linear_combination([(lam, v)])))
    checks.append(_leq("helical eigenrelation residual", eig_worst, 1e-12))

    inv_worst = max(
        _field_diff(curl_inv(curl(w)), w) for w in fields[:3]
    )
    checks.append(_leq("curl_inv two-sided inverse", inv_worst, 1e-12))

    recon_worst = 0.0
    unit_worst = 0.0
    for w in fields[:3]:
        d = helical_decompose(w)
        recon_worst = max(recon_worst, _field_diff(helical_reconstruct(d), w))
        unit_worst = max(
            unit_worst,
            abs(
                float(np.sum(np.abs(d.a_plus) ** 2 + np.abs(d.a_minus) ** 2))
                - float(np.sum(np.abs(w.coeffs) ** 2))
            )
            / float(np.sum(np.abs(w.coeffs) ** 2)),
        )
    checks.append(_leq("helical decompose/reconstruct", recon_worst, 1e-12))
    checks.append(_leq("helical unitarity", unit_worst, 1e-12))

    # helicity routes
    route_worst = max(
        abs(helicity_spectral(w) - helicity_quadrature(w, 2 * w.k_max + 2))
        / max(1.0, abs(helicity_spectral(w)))
        for w in fields
    )
    checks.append(_leq("helicity route equivalence", route_worst, 1e-10))

    abc = abc_field(1, 1, 1)
    checks.append(
        _leq(
            "ABC benchmark H=E=3(2pi)^3",
            max(
                abs(helicity_spectral(abc) - 3 * VOLUME),
                abs(energy(abc) - 3 * VOLUME),
            )
            / (3 * VOLUME),
            1e-10,
        )
    )

    # sign structure and quadratic scaling
    plus = helical_field((1, 2, 0), +1, 0.8)
    minus = helical_field((1, 2, 0), -1, 0.8)
    sign_ok = (
        helicity_spectral(plus) > 0
        and helicity_spectral(minus) < 0
        and abs(helicity_spectral(linear_combination([(1.0, plus), (1.0, minus)])))
        < 1e-12 * energy(plus)
    )
    checks.append(CheckResult("helicity sign structure", 1.0 if sign_ok else 0.0, 1.0, sign_ok))

    lam = 1.7
    w = fields[0]
    scalw = linear_combination([(lam, w)])
    quad_scale = max(
        abs(helicity_spectral(scalw) - lam**2 * helicity_spectral(w))
        / abs(lam**2 * helicity_spectral(w)),
        abs(energy(scalw) - lam**2 * energy(w)) / (lam**2 * energy(w)),
    )
    checks.append(_leq("quadratic scaling of H and E", quad_scale, 1e-12))

    # commutator identity, two routes
    u = random_field(2, seed + 50, 1.0)
    c_a = commutator(fields[0], u)
    c_b = commutator_pointwise(fields[0], u)
    comm_rel = math.sqrt(energy(linear_combination([(1, c_a), (-1, c_b)])) / energy(c_a))
    checks.append(_leq("commutator curl(uxw) vs advective", comm_rel, 1e-9))

    # derivative kernel alignment
    two_inv = lambda f: linear_combination([(2.0, curl_inv(f))])
    align_c = 0.0
    align_r = 0.0
    for w in fields[:3]:
        rep = check_kernel_alignment(two_inv, w, 2 * w.k_max + 2)
        align_c = max(align_c, abs(rep.c_w - 2.0))
        align_r = max(align_r, rep.residual)
    checks.append(_leq("alignment c_w = 2 for 2 curl_inv", align_c, 1e-8))
    checks.append(_leq("alignment parallel residual", align_r, 1e-10))
    fixed = abc_field(2, 1, 1)
    rep = check_kernel_alignment(lambda f: fixed, fields[0], 12)
    checks.append(_geq("alignment negative control", rep.residual, 0.1))

    # derivative of helicity vanishes along transport directions
    dv_worst = max(
        abs(derivative_vanishing_test(w, u)) / math.sqrt(energy(w) * energy(u))
        for w in fields[:3]
    )
    checks.append(_leq("helicity first variation vanishes", dv_worst, 1e-9))
    v = random_field(4, seed + 60, 1.0)
    ctrl = abs(2.0 * inner_product_l2(v, commutator(fields[0], u)))
    checks.append(
        _geq(
            "first variation negative control",
            ctrl / math.sqrt(energy(fields[0]) * energy(u)),
            1e-3,
        )
    )

    # push-forward invariance
    w = fields[0]
    out, _ = pushforward(identity_chain(), w, w.k_max, 2 * w.k_max + 2)
    checks.append(_leq("identity chain push-forward", _field_diff(out, w), 1e-12))

    chain = random_shear_chain(3, seed + 70, max_amplitude=0.4)
    n_pf = 28 if quick else 32
    out, rep_pf = pushforward(chain, w, 12, n_pf, residual_bound=None)
    h_rel = abs(helicity_spectral(out) - helicity_spectral(w)) / abs(helicity_spectral(w))
    checks.append(
        _leq(
            "helicity invariance under shears",
            h_rel,
            max(1e-8, 10.0 * rep_pf.projection_residual),
        )
    )
    checks.append(
        _geq(
            "energy non-invariance under shears",
            abs(energy(out) - energy(w)) / energy(w),
            1e-4,
        )
    )
    back, rep_back = pushforward(chain.inverse(), out, 12, n_pf, residual_bound=None)
    ret = math.sqrt(
        energy(linear_combination([(1, back), (-1, w)])) / energy(w)
    )
    checks.append(
        _leq(
            "chain inverse returns the field",
            ret,
            10.0 * (rep_pf.projection_residual + rep_back.projection_residual),
        )
    )

    # transport flow
    abcw = abc_field(1, 1, 1)
    stat, _ = advect(FlowState(w=abcw, u=abcw, t=0.0, dt=1e-2), 0.1)
    checks.append(_leq("Beltrami self-transport stationary", _field_diff(stat.w, abcw), 1e-10))
    uu = random_field(2, 11, 0.5)
    t_end = 0.05 if quick else 0.2
    _, series = advect(FlowState(w=abcw, u=uu, t=0.0, dt=1e-3), t_end)
    checks.append(_leq("transport helicity drift", max_relative_drift(series), 1e-6))

    # constant-helicity path
    w0 = abc_field(1, 1, 1)
    gsz = ScalarField.from_modes(1, {(0, 0, 1): -0.25j, (0, 0, -1): 0.25j})
    w1_raw, _ = pushforward(DiffeoChain((ShearMap("x", gsz),)), w0, 9, 32, residual_bound=None)
    h0 = helicity_spectral(w0)
    w1 = linear_combination([(math.sqrt(h0 / helicity_spectral(w1_raw)), w1_raw)])
    raw_path = positive_path(w0, w1)
    ts = np.linspace(0.0, 1.0, 21 if quick else 101)
    trace_err = float(
        np.max(np.abs(raw_path.raw_helicity_trace(ts) - raw_path.formula_trace(ts)))
    ) / abs(h0)
    checks.append(_leq("raw path trace matches closed form", trace_err, 1e-10))
    level = rescale_to_level(raw_path, h0, samples=len(ts))
    level_err = float(np.max(np.abs(level.helicity_trace(ts) - h0))) / abs(h0)
    checks.append(_leq("rescaled path holds the level", level_err, 1e-10))
    end_err = max(
        _field_diff(level.evaluate(0.0), w0), _field_diff(level.evaluate(1.0), w1)
    )
    checks.append(_leq("path endpoints exact", end_err, 1e-12))
    za = SpectralField.from_modes(
        1, {(0, 0, 1): np.array([-0.5j, 0, 0]), (0, 0, -1): np.array([0.5j, 0, 0])}
    )
    zb = SpectralField.from_modes(
        1, {(1, 0, 0): np.array([0, -0.5j, 0]), (-1, 0, 0): np.array([0, 0.5j, 0])}
    )
    zp = zero_path(za, zb)
    zmax = float(np.max(np.abs(zp.helicity_trace(ts))))
    checks.append(_leq("zero path stays at zero helicity", zmax, 1e-10 * energy(za)))

    return checks


def report_dict(checks: list[CheckResult], seed: int, quick: bool) -> dict:
    return {
        "suite": "helicity-lab verify",
        "seed": seed,
        "profile": "quick" if quick else "full",
        "passed": all(c.passed for c in checks),
        "checks": [
            {
                "name": c.name,
                "value": c.value,
                "bound": c.bound,
                "passed": c.passed,
            }
            for c in checks
        ],
    }


def format_report(checks: list[CheckResult]) -> str:
    lines = [c.line() for c in checks]
    n_pass = sum(c.passed for c in checks)
    lines.append(f"{n_pass}/{len(checks)} checks passed")
    return "\n".join(lines)


def write_report(checks: list[CheckResult], path, seed: int, quick: bool) -> None:
    with open(path, "w") as fh:
        json.dump(report_dict(checks, seed, quick), fh, indent=1)
        fh.write("\n")


def require_all_passed(checks: list[CheckResult]) -> None:
    failed = [c for c in checks if not c.passed]
    if failed:
        names = ", ".join(c.name for c in failed)
        raise VerificationError(f"{len(failed)} verification check(s) failed: {names}")
