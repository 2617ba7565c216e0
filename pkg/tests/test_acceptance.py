"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and timings as they complete.
"""

import json
import math
import time

import numpy as np

import helicity_lab as hl
from helicity_lab import verify as verify_mod


def _report(num, ok, detail, t0, limit):
    elapsed = time.time() - t0
    status = "PASS" if ok and elapsed < limit else "FAIL"
    print(f"\n[criterion {num:2d}] {status}  {detail}  ({elapsed:.1f}s / limit {limit:.0f}s)")
    return elapsed


def max_diff(a, b):
    return hl.linear_combination([(1.0, a), (-1.0, b)]).max_amplitude()


def test_criterion_1_route_equivalence():
    t0 = time.time()
    worst = 0.0
    for seed in range(1, 21):
        w = hl.random_field(4, seed, 1.0)
        hs = hl.helicity_spectral(w)
        hq = hl.helicity_quadrature(w, 2 * w.k_max + 2)
        worst = max(worst, abs(hs - hq) / max(1.0, abs(hs)))
    ok = worst < 1e-10
    elapsed = _report(1, ok, f"route equivalence, worst rel diff {worst:.3e}", t0, 10)
    assert ok
    assert elapsed < 10


def test_criterion_2_abc_benchmark():
    t0 = time.time()
    w = hl.abc_field(1, 1, 1)
    expect = 3 * hl.VOLUME
    errs = [
        abs(hl.helicity_spectral(w) - expect) / expect,
        abs(hl.helicity_quadrature(w, 8) - expect) / expect,
        abs(hl.energy(w) - expect) / expect,
    ]
    ok = max(errs) < 1e-10
    elapsed = _report(2, ok, f"ABC H=E=3(2pi)^3, worst rel err {max(errs):.3e}", t0, 1)
    assert ok
    assert elapsed < 1


def test_criterion_3_eigenrelation():
    from helicity_lab.spectral import lex_positive

    t0 = time.time()
    kv = hl.band_kvecs(4)
    worst = 0.0
    for k in kv[lex_positive(kv)]:
        for sign in (+1, -1):
            v = hl.helical_field(tuple(k), sign)
            lam = sign * float(np.linalg.norm(k.astype(float)))
            worst = max(worst, max_diff(hl.curl(v), hl.linear_combination([(lam, v)])))
    ok = worst < 1e-12
    elapsed = _report(3, ok, f"eigenrelation |k|<=4 both signs, max residual {worst:.3e}", t0, 5)
    assert ok
    assert elapsed < 5


def test_criterion_4_diffeomorphism_invariance():
    t0 = time.time()
    fields = [hl.random_field(4, s, 1.0) for s in range(1, 6)]
    chains = [
        hl.random_shear_chain(3, seed=c, max_amplitude=0.5, max_profile_mode=2)
        for c in range(1, 6)
    ]
    k_out, n = 12, 32
    all_ok = True
    worst_ratio = 0.0
    energy_changes = []
    for w in fields:
        h0, e0 = hl.helicity_spectral(w), hl.energy(w)
        for ch in chains:
            out, rep = hl.pushforward(ch, w, k_out, n, residual_bound=None)
            rel = abs(hl.helicity_spectral(out) - h0) / abs(h0)
            bound = max(1e-8, 10.0 * rep.projection_residual)
            all_ok = all_ok and rel < bound
            worst_ratio = max(worst_ratio, rel / bound)
            energy_changes.append(abs(hl.energy(out) - e0) / e0)
    has_energy_witness = max(energy_changes) > 1e-2
    ok = all_ok and has_energy_witness
    elapsed = _report(
        4,
        ok,
        f"helicity invariant (worst rel/bound {worst_ratio:.2e}), "
        f"max energy change {max(energy_changes):.3f}",
        t0,
        60,
    )
    assert all_ok
    assert has_energy_witness
    assert elapsed < 60


def test_criterion_5_transport_conservation():
    t0 = time.time()
    w = hl.abc_field(1, 1, 1)
    u = hl.random_field(2, 11, 0.5)
    _, base = hl.advect(hl.FlowState(w=w, u=u, t=0.0, dt=1e-3), 1.0)
    drift = hl.max_relative_drift(base)
    drift_ok = drift < 1e-6
    _, half = hl.advect(hl.FlowState(w=w, u=u, t=0.0, dt=5e-4), 1.0)
    drift_half = hl.max_relative_drift(half)
    ratio = drift / drift_half if drift_half > 0 else float("inf")
    ratio_ok = 12.0 <= ratio <= 20.0

    # diagnostic: the dt-order of the time-stepping drift component, measured
    # where it rises above round-off (stronger advecting field, larger dt)
    u_strong = hl.random_field(2, 11, 3.0)
    sweep = []
    for dt in (0.02, 0.01, 0.005):
        _, s = hl.advect(hl.FlowState(w=w, u=u_strong, t=0.0, dt=dt), 1.0)
        sweep.append(hl.max_relative_drift(s))
    orders = [sweep[i] / sweep[i + 1] for i in range(len(sweep) - 1)]

    ok = drift_ok and ratio_ok
    elapsed = _report(
        5,
        ok,
        f"drift {drift:.2e} (<1e-6: {drift_ok}); halving ratio {ratio:.2f} in [12,20]: "
        f"{ratio_ok}; measurable-regime ratios {['%.1f' % r for r in orders]}",
        t0,
        120,
    )
    assert drift_ok
    assert elapsed < 120
    # The halving-ratio clause asserts the criterion as stated.  For this
    # discretization the band-truncated dynamics conserves helicity exactly
    # in continuous time, so at dt=1e-3 the time-stepping component sits at
    # the round-off floor (~1e-15) and the measurable-regime diagnostic
    # above shows the clean factor-32 (5th order) scaling that RK4 provably
    # exhibits for quadratic invariants of linear flows; a factor near 16 is
    # not attainable here.
    assert ratio_ok, (
        f"time-stepping drift ratio {ratio:.2f} outside [12, 20]; "
        f"measurable-regime ratios {orders} (5th order, factor 32)"
    )


def test_criterion_6_kernel_alignment():
    t0 = time.time()
    K = lambda w: hl.linear_combination([(2.0, hl.curl_inv(w))])
    worst_c = worst_r = 0.0
    for seed in range(1, 11):
        w = hl.random_field(3, 100 + seed, 1.0)
        rep = hl.check_kernel_alignment(K, w, 2 * w.k_max + 2)
        worst_c = max(worst_c, abs(rep.c_w - 2.0))
        worst_r = max(worst_r, rep.residual)
    fixed = hl.abc_field(2, 1, 1)
    ctrl = hl.check_kernel_alignment(lambda _: fixed, hl.random_field(3, 100, 1.0), 10)
    ok = worst_c < 1e-8 and worst_r < 1e-10 and ctrl.residual > 0.1
    elapsed = _report(
        6,
        ok,
        f"c_w=2+-{worst_c:.2e}, residual {worst_r:.2e}, control {ctrl.residual:.3f}",
        t0,
        10,
    )
    assert worst_c < 1e-8
    assert worst_r < 1e-10
    assert ctrl.residual > 0.1
    assert elapsed < 10


def test_criterion_7_derivative_vanishing():
    t0 = time.time()
    worst = 0.0
    control_hits = 0
    for seed in range(1, 11):
        w = hl.random_field(3, 200 + seed, 1.0)
        u = hl.random_field(3, 300 + seed, 1.0)
        scale = math.sqrt(hl.energy(w) * hl.energy(u))
        worst = max(worst, abs(hl.derivative_vanishing_test(w, u)) / scale)
        v = hl.random_field(3, 400 + seed, 1.0)
        corrupted = 2.0 * hl.inner_product_l2(v, hl.commutator(w, u))
        if abs(corrupted) > 1e-3 * scale:
            control_hits += 1
    ok = worst < 1e-9 and control_hits >= 8
    elapsed = _report(
        7,
        ok,
        f"first variation worst {worst:.2e}, corrupted control {control_hits}/10",
        t0,
        20,
    )
    assert worst < 1e-9
    assert control_hits >= 8
    assert elapsed < 20


def test_criterion_8_path_construction():
    t0 = time.time()
    w0 = hl.abc_field(1, 1, 1)
    g = hl.ScalarField.from_modes(1, {(0, 0, 1): -0.25j, (0, 0, -1): 0.25j})
    chain = hl.DiffeoChain((hl.ShearMap("x", g),))
    w1_raw, _ = hl.pushforward(chain, w0, 9, 48, residual_bound=None)
    c = hl.helicity_spectral(w0)
    w1 = hl.linear_combination([(math.sqrt(c / hl.helicity_spectral(w1_raw)), w1_raw)])

    ts = np.linspace(0.0, 1.0, 101)
    raw_path = hl.positive_path(w0, w1)
    raw_trace = raw_path.raw_helicity_trace(ts)
    formula = raw_path.formula_trace(ts)
    trace_err = float(np.max(np.abs(raw_trace - formula))) / abs(c)

    level_path = hl.rescale_to_level(raw_path, c, samples=101)
    level_err = float(np.max(np.abs(level_path.helicity_trace(ts) - c))) / abs(c)
    end_err = max(
        max_diff(level_path.evaluate(0.0), w0), max_diff(level_path.evaluate(1.0), w1)
    )

    za = hl.SpectralField.from_modes(
        1, {(0, 0, 1): np.array([-0.5j, 0, 0]), (0, 0, -1): np.array([0.5j, 0, 0])}
    )
    zb = hl.SpectralField.from_modes(
        1, {(1, 0, 0): np.array([0, -0.5j, 0]), (-1, 0, 0): np.array([0, 0.5j, 0])}
    )
    zp = hl.zero_path(za, zb)
    zmax = float(np.max(np.abs(zp.helicity_trace(ts))))
    zbound = 1e-10 * max(hl.energy(za), hl.energy(zb))

    ok = level_err < 1e-10 and trace_err < 1e-10 and end_err < 1e-12 and zmax < zbound
    elapsed = _report(
        8,
        ok,
        f"level dev {level_err:.2e}, trace dev {trace_err:.2e}, "
        f"endpoints {end_err:.2e}, zero path {zmax:.2e}",
        t0,
        30,
    )
    assert level_err < 1e-10
    assert trace_err < 1e-10
    assert end_err < 1e-12
    assert zmax < zbound
    assert elapsed < 30


def test_criterion_9_partial_helicity_equivariance():
    t0 = time.time()
    w = hl.abc_field(1, 1, 0)
    f = hl.ScalarField.from_modes(
        2,
        {
            (0, 0, 0): 1.0,
            (0, 0, 2): 0.25,
            (0, 0, -2): 0.25,
            (2, 0, 0): -0.25,
            (-2, 0, 0): -0.25,
            (1, 0, 1): -0.5j,
            (-1, 0, -1): 0.5j,
            (1, 0, -1): -0.5j,
            (-1, 0, 1): 0.5j,
        },
    )
    chain = hl.DiffeoChain(
        (
            hl.ShearMap("z", hl.ScalarField.from_modes(1, {(1, 0, 0): -0.15j, (-1, 0, 0): 0.15j})),
            hl.ShearMap("x", hl.ScalarField.from_modes(1, {(0, 0, 1): 0.2, (0, 0, -1): 0.2})),
        )
    )
    F0 = hl.partial_helicity(f, w, 2 * (f.k_max + w.k_max) + 2)
    w2, _ = hl.pushforward(chain, w, 12, 48, residual_bound=None)
    f2, _ = hl.transport_scalar(chain, f, 12, 48, residual_bound=None)
    F_lag = hl.partial_helicity(f2, w2, 2 * (f2.k_max + w2.k_max) + 2)
    F_naive = hl.partial_helicity(f, w2, 2 * (f.k_max + w2.k_max) + 2)
    lag_rel = abs(F_lag - F0) / abs(F0)
    naive_rel = abs(F_naive - F0) / abs(F0)
    ok = lag_rel < 1e-6 and naive_rel > 1e-3
    elapsed = _report(
        9,
        ok,
        f"Lagrangian action dev {lag_rel:.2e} (<1e-6), naive dev {naive_rel:.2e} (>1e-3)",
        t0,
        30,
    )
    assert lag_rel < 1e-6
    assert naive_rel > 1e-3
    assert elapsed < 30


def test_criterion_10_round_trip_and_determinism(tmp_path):
    t0 = time.time()
    w = hl.random_field(4, 99, 1.0)
    p1 = tmp_path / "w1.json"
    p2 = tmp_path / "w2.json"
    hl.write_field(w, p1)
    back = hl.read_field(p1)
    bit_exact = np.array_equal(back.kvecs, w.kvecs) and np.array_equal(
        back.coeffs, w.coeffs
    )
    hl.write_field(back, p2)
    file_stable = p1.read_bytes() == p2.read_bytes()

    r1 = verify_mod.report_dict(verify_mod.run_verification(seed=1, quick=True), 1, True)
    r2 = verify_mod.report_dict(verify_mod.run_verification(seed=1, quick=True), 1, True)
    reports_identical = json.dumps(r1) == json.dumps(r2)
    all_passed = r1["passed"]

    ok = bit_exact and file_stable and reports_identical and all_passed
    _report(
        10,
        ok,
        f"round trip bit-exact {bit_exact}, file stable {file_stable}, "
        f"verify reports identical {reports_identical}",
        t0,
        120,
    )
    assert bit_exact
    assert file_stable
    assert reports_identical
    assert all_passed
