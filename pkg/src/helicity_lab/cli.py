"""Command-line interface.

Subcommands: gen, functional, pushforward, advect, path, verify.
Exit codes: 0 success, 2 invalid input, 3 tolerance/verification failure.
Numeric output on the console uses 6 significant digits; files keep full
round-trip precision.  HELICITY_LAB_THREADS caps internal parallelism and
HELICITY_LAB_DISABLE_NUMBA=1 selects the pure-numpy kernels.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import verify as verify_mod
from ._accel import active_lane
from .errors import HelicityLabError, InputError, ToleranceError
from .functionals import (
    energy,
    helicity_quadrature,
    helicity_spectral,
    integral_invariant_2pt,
    partial_helicity,
)
from .paths import export_path, positive_path, negative_path, rescale_to_level, zero_path
from .shears import pushforward, read_chain
from .spectral import (
    RNG_ALGORITHM,
    abc_field,
    linear_combination,
    random_field,
    read_field,
    read_scalar_field,
    write_field,
)
from .curl_ops import helical_field
from .transport import FlowState, advect


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _cmd_gen(args) -> int:
    if args.kind == "abc":
        field = abc_field(args.A, args.B, args.C)
        meta = {"generator": "abc", "A": args.A, "B": args.B, "C": args.C}
    elif args.kind == "random":
        field = random_field(args.kmax, args.seed, args.amplitude)
        meta = {
            "generator": "random",
            "algorithm": RNG_ALGORITHM,
            "k_max": args.kmax,
            "seed": args.seed,
            "amplitude": args.amplitude,
        }
    else:  # helical
        field = helical_field(tuple(args.k), +1 if args.sign == "+" else -1, args.amplitude)
        meta = {
            "generator": "helical",
            "k": list(args.k),
            "sign": args.sign,
            "amplitude": args.amplitude,
        }
    write_field(field, args.out, metadata=meta)
    print(f"wrote {args.out}: {field.n_modes} modes, k_max={field.k_max}")
    print(f"H = {_fmt(helicity_spectral(field))}  E = {_fmt(energy(field))}")
    return 0


def _cmd_functional(args) -> int:
    w = read_field(args.field)
    n = args.n if args.n is not None else 2 * w.k_max + 2
    rows = [
        ("helicity_spectral", helicity_spectral(w), None),
        ("helicity_quadrature", helicity_quadrature(w, n), n),
        ("energy", energy(w), None),
    ]
    if args.partial_f:
        f = read_scalar_field(args.partial_f)
        np_quad = max(n, 2 * (f.k_max + w.k_max) + 2)
        rows.append(("partial_helicity", partial_helicity(f, w, np_quad), np_quad))
    if args.two_point:
        n2 = args.two_point_n if args.two_point_n is not None else 2 * w.k_max + 2
        if args.two_point == "dot":
            G = lambda x1, x2, v1, v2: np.sum(v1 * v2, axis=-1)
        else:
            axis = {"dot-cos-x": 0, "dot-cos-y": 1, "dot-cos-z": 2}[args.two_point]
            G = lambda x1, x2, v1, v2: np.sum(v1 * v2, axis=-1) * np.cos(
                x1[..., axis] - x2[..., axis]
            )
        rows.append((f"two_point[{args.two_point}]", integral_invariant_2pt(G, w, n2), n2))
    print(f"{'functional':<24s} {'value':>14s} {'resolution':>11s}")
    for name, value, res in rows:
        print(f"{name:<24s} {_fmt(value):>14s} {str(res if res else '-'):>11s}")
    if args.out:
        doc = [
            {
                "functional": name,
                "value": value,
                "resolution": res,
                "tolerances": {"route_equivalence": 1e-10},
                "metadata": {"field": str(args.field), "lane": active_lane()},
            }
            for name, value, res in rows
        ]
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        print(f"wrote {args.out}")
    return 0


def _cmd_pushforward(args) -> int:
    w = read_field(args.field)
    chain = read_chain(args.chain)
    k_out = args.kout if args.kout is not None else w.k_max + 8
    n = args.n if args.n is not None else 2 * k_out + 8
    bound = None if args.no_residual_bound else args.residual_bound
    out, rep = pushforward(chain, w, k_out, n, residual_bound=bound)
    h0, h1 = helicity_spectral(w), helicity_spectral(out)
    e0, e1 = energy(w), energy(out)
    print(f"chain of {len(chain)} shear(s), k_out={k_out}, n={n}")
    print(f"projection_residual = {_fmt(rep.projection_residual)}")
    print(f"H before = {_fmt(h0)}   after = {_fmt(h1)}   rel change = {_fmt(abs(h1 - h0) / max(abs(h0), 1e-300))}")
    print(f"E before = {_fmt(e0)}   after = {_fmt(e1)}   rel change = {_fmt(abs(e1 - e0) / max(e0, 1e-300))}")
    if args.out:
        write_field(out, args.out, metadata={"projection_residual": rep.projection_residual})
        print(f"wrote {args.out}")
    return 0


def _cmd_advect(args) -> int:
    w = read_field(args.field)
    u = read_field(args.ufield)
    state = FlowState(w=w, u=u, t=0.0, dt=args.dt, band=args.band)
    final, series = advect(state, args.t_end)
    h0, h_end = series.helicity[0], series.helicity[-1]
    drift = float(np.max(np.abs(series.helicity - h0)) / max(abs(h0), 1e-300))
    print(f"{len(series.t) - 1} steps to t={_fmt(final.t)}, band={final.band}")
    print(f"H: {_fmt(h0)} -> {_fmt(h_end)}   max relative drift = {_fmt(drift)}")
    print(f"E: {_fmt(series.energy[0])} -> {_fmt(series.energy[-1])}")
    if args.out:
        series.write_csv(args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_path(args) -> int:
    w0 = read_field(args.field0)
    w1 = read_field(args.field1)
    h0, h1 = helicity_spectral(w0), helicity_spectral(w1)
    scale_zero = 1e-10 * max(energy(w0), energy(w1), 1e-300)
    if abs(h0) <= scale_zero and abs(h1) <= scale_zero:
        path = zero_path(w0, w1)
        level = 0.0
    else:
        if args.snap_level:
            # rescale the second endpoint onto the exact level of the first
            w1 = linear_combination([(math.sqrt(h0 / h1), w1)])
            h1 = helicity_spectral(w1)
        raw = positive_path(w0, w1) if h0 > 0 else negative_path(w0, w1)
        level = args.level if args.level is not None else h0
        path = rescale_to_level(raw, level, samples=args.samples)
    ts = np.linspace(0.0, 1.0, args.samples)
    trace = path.helicity_trace(ts)
    dev = float(np.max(np.abs(trace - level)))
    print(f"{path.kind} path, level c = {_fmt(level)}")
    print(f"max |H(t) - c| over {args.samples} samples = {_fmt(dev)}")
    report = path.continuity_report(ts)
    print(f"Lipschitz estimate = {_fmt(report['lipschitz_estimate'])}")
    if args.out_dir:
        export_path(path, args.out_dir, ts)
        print(f"wrote {args.out_dir}/trace.csv and {args.samples} field files")
    return 0


def _cmd_verify(args) -> int:
    checks = verify_mod.run_verification(seed=args.seed, quick=args.quick)
    print(verify_mod.format_report(checks))
    print(f"kernel lane: {active_lane()}")
    if args.report:
        verify_mod.write_report(checks, args.report, args.seed, args.quick)
        print(f"wrote {args.report}")
    verify_mod.require_all_passed(checks)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="helicity-lab",
        description="Spectral toolkit for exact divergence-free fields on the 3-torus.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a field file")
    gsub = g.add_subparsers(dest="kind", required=True)
    g_abc = gsub.add_parser("abc", help="Beltrami benchmark field")
    g_abc.add_argument("A", type=float)
    g_abc.add_argument("B", type=float)
    g_abc.add_argument("C", type=float)
    g_rand = gsub.add_parser("random", help="seeded random divergence-free field")
    g_rand.add_argument("--kmax", type=int, default=4)
    g_rand.add_argument("--seed", type=int, default=1)
    g_rand.add_argument("--amplitude", type=float, default=1.0)
    g_hel = gsub.add_parser("helical", help="single helical mode pair")
    g_hel.add_argument("--k", type=int, nargs=3, required=True)
    g_hel.add_argument("--sign", choices=["+", "-"], default="+")
    g_hel.add_argument("--amplitude", type=float, default=1.0)
    for gp in (g_abc, g_rand, g_hel):
        gp.add_argument("--out", required=True)

    f = sub.add_parser("functional", help="evaluate functionals of a field")
    f.add_argument("field")
    f.add_argument("--n", type=int, default=None, help="quadrature resolution")
    f.add_argument("--partial-f", default=None, help="scalar field file for partial helicity")
    f.add_argument(
        "--two-point",
        choices=["dot", "dot-cos-x", "dot-cos-y", "dot-cos-z"],
        default=None,
        help="built-in two-point density kernel",
    )
    f.add_argument("--two-point-n", type=int, default=None)
    f.add_argument("--out", default=None, help="JSON report path")
    f.add_argument("--format", choices=["json", "csv"], default="json")

    pf = sub.add_parser("pushforward", help="apply a shear chain to a field")
    pf.add_argument("field")
    pf.add_argument("chain")
    pf.add_argument("--kout", type=int, default=None)
    pf.add_argument("--n", type=int, default=None)
    pf.add_argument("--residual-bound", type=float, default=1e-6)
    pf.add_argument("--no-residual-bound", action="store_true")
    pf.add_argument("--out", default=None)

    a = sub.add_parser("advect", help="transport a field by a fixed flow")
    a.add_argument("field")
    a.add_argument("ufield")
    a.add_argument("--dt", type=float, default=1e-3)
    a.add_argument("--t-end", type=float, default=1.0)
    a.add_argument("--band", type=int, default=None)
    a.add_argument("--out", default=None, help="time series CSV path")

    pa = sub.add_parser("path", help="constant-helicity path between two fields")
    pa.add_argument("field0")
    pa.add_argument("field1")
    pa.add_argument("--level", type=float, default=None)
    pa.add_argument("--samples", type=int, default=101)
    pa.add_argument(
        "--snap-level",
        action="store_true",
        help="rescale field1 onto the exact helicity level of field0 first",
    )
    pa.add_argument("--out-dir", default=None)

    v = sub.add_parser("verify", help="run the invariant verification suite")
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--quick", action="store_true")
    v.add_argument("--report", default=None, help="JSON report path")

    return p


_HANDLERS = {
    "gen": _cmd_gen,
    "functional": _cmd_functional,
    "pushforward": _cmd_pushforward,
    "advect": _cmd_advect,
    "path": _cmd_path,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except ToleranceError as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return 3
    except HelicityLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
