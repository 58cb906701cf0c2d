"""Command-line interface: Monte Carlo sweeps, protocol verification, and
bound evaluation, all emitting CSV.

Exit codes: 0 success, 1 usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import replace

import numpy as np

from . import bounds as bounds_mod
from .lattice import build_lattice, default_split, logical_x, logical_z
from .montecarlo import ExperimentConfig, estimate_success
from .protocols import (
    append_rough_row,
    append_smooth_column,
    one_shot_decode,
    one_shot_encode,
    remove_rough_row,
    remove_smooth_column,
    run_schedule,
    teleport_encode_schedule,
)
from .tableau import canonical_stabilizers, prepare_product

__all__ = ["main"]

SIM_COLUMNS = [
    "N", "M", "p", "k", "n", "mode", "decoder", "syndrome_noise", "seed",
    "successes", "p_hat", "stderr",
]

_DEFAULT_GRID = [0.001, 0.003, 0.006, 0.01, 0.015, 0.02, 0.03]

# Named presets: recipe -> list of (curve_name, config overrides).
RECIPES = {
    "enc-vs-no-enc": [
        ("encode-line", {"mode": "encode", "decoder": "line"}),
        ("no-encode-perfect", {"mode": "no-encode"}),
    ],
    "syndrome-noise": [
        ("syndrome-on", {"syndrome_noise": True}),
        ("syndrome-off", {"syndrome_noise": False}),
    ],
    "code-sizes": [
        ("5x6", {"N": 5, "M": 6}),
        ("7x8", {"N": 7, "M": 8}),
        ("9x10", {"N": 9, "M": 10}),
    ],
    "decoders": [
        ("line", {"decoder": "line"}),
        ("multiline", {"decoder": "multiline"}),
    ],
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser():
    p = _Parser(prog="planarmem", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte Carlo storage sweep (CSV)")
    sim.add_argument("--rows", type=int, default=7)
    sim.add_argument("--cols", type=int, default=8)
    sim.add_argument("--p", type=str, default="0.01", help="value or comma list")
    sim.add_argument("--steps", type=int, default=100)
    sim.add_argument("--runs", type=int, default=10_000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--decoder", choices=["line", "multiline"], default="line")
    sim.add_argument("--mode", choices=["encode", "no-encode"], default="encode")
    sim.add_argument("--syndrome-noise", choices=["on", "off"], default="on")
    sim.add_argument("--recipe", choices=sorted(RECIPES), default=None)
    sim.add_argument("--config", type=str, default=None, help="JSON override file")
    sim.add_argument("--out-dir", type=str, default=None,
                     help="write one CSV per curve instead of stdout")
    sim.add_argument("--workers", type=int, default=None,
                     help="worker processes (default: PLANARMEM_WORKERS or 1)")

    ver = sub.add_parser("verify", help="noiseless protocol verification")
    ver.add_argument("--max-size", type=int, default=4)
    ver.add_argument("--seeds", type=int, default=10)
    ver.add_argument("--inject-bug", action="store_true", help=argparse.SUPPRESS)

    bnd = sub.add_parser("bounds", help="analytic bound evaluation (CSV)")
    bnd.add_argument("--formula", choices=["concat", "storage", "hofmann"],
                     required=True)
    bnd.add_argument("--p", type=str, default="0.0001")
    bnd.add_argument("--v", type=float, default=100.0)
    bnd.add_argument("--c", type=float, default=None)
    bnd.add_argument("--r", type=int, default=0)
    bnd.add_argument("--rows", type=int, default=7)
    bnd.add_argument("--cols", type=int, default=7)
    bnd.add_argument("--steps", type=int, default=100)
    bnd.add_argument("--fx", type=float, default=1.0)
    bnd.add_argument("--fz", type=float, default=1.0)
    bnd.add_argument("--chain-check", action="store_true",
                     help="verify (1/v) ln p_s >= -p on random points with cp <= 1/e")
    return p


def _parse_p_list(text):
    try:
        values = [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        print(f"error: cannot parse --p value {text!r}", file=sys.stderr)
        raise SystemExit(1)
    if not values or any(not (0.0 <= v <= 1.0) for v in values):
        print("error: --p values must lie in [0, 1]", file=sys.stderr)
        raise SystemExit(1)
    return values


def _sim_row(cfg: ExperimentConfig, workers):
    res = estimate_success(cfg, workers=workers)
    return {
        "N": cfg.N, "M": cfg.M, "p": repr(cfg.p), "k": cfg.k, "n": cfg.n,
        "mode": cfg.mode, "decoder": cfg.decoder,
        "syndrome_noise": "on" if cfg.syndrome_noise else "off",
        "seed": cfg.seed, "successes": res.successes,
        "p_hat": repr(res.p_hat), "stderr": repr(res.stderr),
    }


def cmd_simulate(args) -> int:
    base = ExperimentConfig(
        N=args.rows, M=args.cols, p=0.0, k=args.steps, n=args.runs,
        decoder=args.decoder, mode=args.mode,
        syndrome_noise=args.syndrome_noise == "on", seed=args.seed,
    )
    overrides = {}
    if args.config:
        with open(args.config) as fh:
            overrides = json.load(fh)
    p_values = _parse_p_list(str(overrides.pop("p", args.p)).strip("[] ").replace(" ", ""))
    curves = RECIPES[args.recipe] if args.recipe else [("curve", {})]
    if overrides:
        try:
            base = replace(base, **overrides)
        except TypeError as exc:
            print(f"error: bad config override: {exc}", file=sys.stderr)
            return 1

    def rows_for(extra):
        cfg0 = replace(base, **extra)
        return [_sim_row(replace(cfg0, p=p), args.workers) for p in p_values]

    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        for name, extra in curves:
            path = os.path.join(args.out_dir, f"{name}.csv")
            with open(path, "w", newline="") as fh:
                w = csv.DictWriter(fh, fieldnames=SIM_COLUMNS)
                w.writeheader()
                w.writerows(rows_for(extra))
    else:
        w = csv.DictWriter(sys.stdout, fieldnames=SIM_COLUMNS)
        w.writeheader()
        for _, extra in curves:
            w.writerows(rows_for(extra))
    return 0


# --- verify -----------------------------------------------------------------

_INPUT_OPS = {"0": ("z", 1), "1": ("z", -1), "+": ("x", 1), "-": ("x", -1)}


def _black_state_ok(tab, geom, state, wrong_sign=False):
    from .lattice import PauliOperator

    kind, sign = _INPUT_OPS[state]
    if wrong_sign:
        sign = -sign
    q = geom.black
    P = (
        PauliOperator(sign, frozenset(), frozenset([q]))
        if kind == "z"
        else PauliOperator(sign, frozenset([q]), frozenset())
    )
    return tab.contains(P) == 1


def _logical_sign(tab, geom, state):
    kind, _ = _INPUT_OPS[state]
    op = logical_z(geom) if kind == "z" else logical_x(geom)
    return tab.contains(op)


def _verify_roundtrip(max_size, seeds, bug):
    for N in range(1, max_size + 1):
        for M in range(1, max_size + 1):
            geom = build_lattice(N, M)
            split = default_split(geom)
            for state in "01+-":
                for s in range(seeds):
                    rng = np.random.default_rng((N, M, s, 1))
                    tab = one_shot_encode(state, geom, split, rng)
                    res = one_shot_decode(tab, geom, rng)
                    if not _black_state_ok(res.tableau, geom, state, wrong_sign=bug):
                        return f"round-trip failed at {N}x{M} input {state} seed {s}"
    return None


def _verify_grow_shrink(max_size, seeds, bug):
    steps = [
        (append_smooth_column, remove_smooth_column),
        (append_rough_row, remove_rough_row),
    ]
    for N in range(1, max_size + 1):
        for M in range(1, max_size + 1):
            geom = build_lattice(N, M)
            split = default_split(geom)
            for grow, shrink in steps:
                for state in "01+-":
                    for s in range(seeds):
                        rng = np.random.default_rng((N, M, s, 2))
                        tab = one_shot_encode(state, geom, split, rng)
                        want = _logical_sign(tab, geom, state)
                        tab2, geom2, _ = grow(tab, geom, rng)
                        tab3, geom3, _ = shrink(tab2, geom2, rng)
                        got = _logical_sign(tab3, geom3, state)
                        if bug:
                            got = -got if got is not None else got
                        if geom3.N != N or geom3.M != M or got != want:
                            return (
                                f"grow/shrink failed at {N}x{M} input {state} seed {s}"
                            )
    return None


def _verify_teleport(max_size, seeds, bug):
    for size in (2, 3):
        if size > max_size:
            continue
        geom = build_lattice(size, size)
        split = default_split(geom)
        sched = teleport_encode_schedule(geom)
        for state in "01+-":
            ref = one_shot_encode(
                state, geom, split, np.random.default_rng((size, 0, 3))
            )
            want = canonical_stabilizers(ref)
            for s in range(seeds):
                assignment = ["0"] * geom.n_qubits
                for q in split.green:
                    assignment[q] = "+"
                assignment[geom.black] = state
                tab = prepare_product(geom.n_qubits, assignment)
                res = run_schedule(sched, tab, np.random.default_rng((size, s, 4)))
                got = canonical_stabilizers(res.resolved())
                if bug and s == 0:
                    got = got[1:]
                if got != want:
                    return f"teleport mismatch at {size}x{size} input {state} seed {s}"
    return None


def cmd_verify(args) -> int:
    checks = [
        ("encode/decode round-trip", _verify_roundtrip),
        ("grow/shrink round-trip", _verify_grow_shrink),
        ("teleportation equivalence", _verify_teleport),
    ]
    failed = False
    for name, fn in checks:
        err = fn(args.max_size, args.seeds, args.inject_bug)
        status = "ok" if err is None else f"FAIL ({err})"
        print(f"{name}: {status}")
        failed = failed or err is not None
    return 2 if failed else 0


# --- bounds -----------------------------------------------------------------


def cmd_bounds(args) -> int:
    w = csv.writer(sys.stdout)
    if args.formula == "storage":
        w.writerow(["N", "M", "k", "p", "alpha", "bound", "vacuous"])
        for p in _parse_p_list(args.p):
            params = bounds_mod.StorageParams(args.rows, args.cols, args.steps, p)
            res = bounds_mod.storage_success_bound(params)
            w.writerow([
                args.rows, args.cols, args.steps, repr(p),
                repr(bounds_mod.storage_alpha(p)),
                "" if res.value is None else repr(res.value),
                int(res.vacuous),
            ])
        return 0
    if args.formula == "hofmann":
        w.writerow(["F_x", "F_z", "bound"])
        w.writerow([repr(args.fx), repr(args.fz),
                    repr(bounds_mod.hofmann_bound(args.fx, args.fz))])
        return 0
    # concat
    if args.chain_check:
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(200):
            v = float(rng.integers(2, 200))
            c = float(rng.uniform(1.0, 50.0))
            p = rng.uniform(0.0, 1.0) / (np.e * c)
            params = bounds_mod.ConcatParams(p=p, v=v, c=c, r=int(rng.integers(0, 30)))
            lhs = np.log(bounds_mod.concat_success_product(params)) / v
            worst = min(worst, lhs + p)
            if lhs < -p - 1e-12:
                print(f"chain check FAILED: (1/v) ln p_s = {lhs} < -p = {-p}",
                      file=sys.stderr)
                return 2
        print(f"chain check ok (worst margin {worst:.3e})")
        return 0
    w.writerow(["p", "v", "c", "r", "p_s_product", "p_s_closed_form", "exp(-pv)"])
    for p in _parse_p_list(args.p):
        params = bounds_mod.ConcatParams(p=p, v=args.v, c=args.c, r=args.r)
        w.writerow([
            repr(p), repr(args.v), repr(params.c), args.r,
            repr(bounds_mod.concat_success_product(params)),
            repr(bounds_mod.concat_success_closed_form(params)),
            repr(bounds_mod.concat_fidelity_lower_bound(p, args.v)),
        ])
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_bounds(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
