"""Command-line entry point: ``plstab <command> ...`` or ``python -m plstab``.

Exit status: 0 when every hard check passes, 1 when one fails, 2 for
configuration and input errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .battery import run_battery
from .core.constants import Constants
from .core.functions import integrate
from .errors import ConfigInvalid, PLStabError
from .geometry import check_bm_stability, lift_area, lift_body, recover_shift_lemma31
from .io import (
    emit_plot_data,
    materialize,
    parse_function_spec,
    read_body_csv,
    write_grid_csv,
    write_polygon_csv,
    write_sweep_csv,
)
from .legendre import sup_convolution
from .stability import (
    SWEEP_FAMILIES,
    deficit_vs_distance_sweep,
    fit_exponent,
    pl_deficit,
    recover_witness,
    translative_l1,
    xi,
)

COMMANDS = ("supconv", "deficit", "distance", "witness", "sweep", "verify", "geometry", "lift")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    lam: float = 0.5
    resolution: int = 1024
    constants: Constants = field(default_factory=Constants)
    output: str | None = None
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigInvalid(f"unknown command {self.command!r}")
        if self.resolution < 64:
            raise ConfigInvalid(f"resolution must be at least 64, got {self.resolution}")
        if not (0 < self.lam < 1):
            raise ConfigInvalid(f"lambda must lie in (0, 1), got {self.lam}")
        if not (0 <= self.seed < 2**64):
            raise ConfigInvalid("seed must be a 64-bit unsigned integer")


def _load(cfg: RunConfig, i: int):
    return materialize(parse_function_spec(cfg.inputs[i]), cfg.resolution)


def _need_inputs(cfg, k):
    if len(cfg.inputs) != k:
        raise ConfigInvalid(f"{cfg.command} needs {k} input file(s), got {len(cfg.inputs)}")


def _cmd_supconv(cfg, out):
    _need_inputs(cfg, 2)
    f, g = _load(cfg, 0), _load(cfg, 1)
    h = sup_convolution(f, g, cfg.lam)
    print(f"lambda={cfg.lam:.6f}", file=out)
    print(f"mass_h={integrate(h):.10g}", file=out)
    print(f"support={h.x_lo:.10g},{h.x_hi:.10g}", file=out)
    if cfg.output:
        write_grid_csv(h, cfg.output)
    return EXIT_OK


def _cmd_deficit(cfg, out):
    _need_inputs(cfg, 2)
    rep = pl_deficit(_load(cfg, 0), _load(cfg, 1), cfg.lam)
    for line in rep.as_lines():
        if not line.startswith(("witness", "residual", "bound", "omega")):
            print(line, file=out)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write("lambda,mass_f,mass_g,mass_h,epsilon\n")
            fh.write(",".join(f"{v:.17g}" for v in (rep.lam, rep.mass_f, rep.mass_g, rep.mass_h, rep.epsilon)) + "\n")
    return EXIT_OK if rep.satisfied["pl"] else EXIT_FAIL


def _cmd_distance(cfg, out):
    _need_inputs(cfg, 2)
    d, v = translative_l1(_load(cfg, 0), _load(cfg, 1))
    print(f"l1={d:.10g}", file=out)
    print(f"v_star={v:.10g}", file=out)
    return EXIT_OK


def _cmd_witness(cfg, out):
    _need_inputs(cfg, 2)
    rep = recover_witness(_load(cfg, 0), _load(cfg, 1), None, cfg.lam, cfg.constants)
    for line in rep.as_lines():
        print(line, file=out)
    return EXIT_OK if rep.satisfied["pl"] else EXIT_FAIL


def default_sweep_params(family: str, points: int) -> np.ndarray:
    """Geometric offsets from the identity parameter of each family."""
    if family == "gaussian-shift-mix":
        return np.geomspace(1e-2, 2.0, points)
    return 1.0 + np.geomspace(1e-3, 1.0, points)


def _cmd_sweep(cfg, out):
    family = cfg.extra.get("family")
    if family not in SWEEP_FAMILIES:
        raise ConfigInvalid(f"--family must be one of {', '.join(SWEEP_FAMILIES)}")
    params = cfg.extra.get("params")
    if params is None:
        params = default_sweep_params(family, cfg.extra.get("points", 32))
    t0 = time.perf_counter()
    n_nodes = max(cfg.resolution, 64) | 1
    recs = deficit_vs_distance_sweep(family, params, cfg.lam, n_nodes=n_nodes, consts=cfg.constants)
    slope, used = fit_exponent(recs)
    print(f"# seed={cfg.seed} family={family} points={len(recs)} resolution={n_nodes}", file=out)
    print(f"fitted_slope={slope:.6f}", file=out)
    print(f"fit_points={used}", file=out)
    print(f"elapsed_s={time.perf_counter() - t0:.2f}", file=out)
    if cfg.output:
        write_sweep_csv(recs, cfg.output)
    if cfg.extra.get("plot"):
        emit_plot_data(recs, cfg.extra["plot"])
    ok = all(r.epsilon >= -1e-9 for r in recs)
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_verify(cfg, out):
    t0 = time.perf_counter()
    rows = run_battery(cfg.seed, cfg.resolution)
    print(f"# seed={cfg.seed} resolution={cfg.resolution}", file=out)
    failed = 0
    for r in rows:
        if not r.passed:
            failed += 1
        if not r.passed or cfg.extra.get("verbose"):
            print(r.line(), file=out)
    groups = {}
    for r in rows:
        g = groups.setdefault(r.group, [0, 0])
        g[0] += 1
        g[1] += not r.passed
    for name, (n, bad) in groups.items():
        print(f"{'PASS' if bad == 0 else 'FAIL'} {name}: {n - bad}/{n}", file=out)
    print(f"total={len(rows)} failed={failed} elapsed_s={time.perf_counter() - t0:.1f}", file=out)
    return EXIT_OK if failed == 0 else EXIT_FAIL


def _cmd_geometry(cfg, out):
    if len(cfg.inputs) not in (2, 3):
        raise ConfigInvalid("geometry needs K and C files, optionally L")
    K, C = read_body_csv(cfg.inputs[0]), read_body_csv(cfg.inputs[1])
    rep = check_bm_stability(K, C)
    sf = rep.functional
    print(f"A={sf.A:.10g}", file=out)
    print(f"sigma={sf.sigma:.10g}", file=out)
    print(f"gamma_star={sf.gamma_star:.10g}", file=out)
    print(rep.theorem.describe(), file=out)
    print(rep.product_form.describe(), file=out)
    ok = rep.holds
    if len(cfg.inputs) == 3:
        L = read_body_csv(cfg.inputs[2])
        sr = recover_shift_lemma31(K, C, L, cfg.extra.get("eta", 0.0))
        print(f"w={' '.join(f'{v:.10g}' for v in np.atleast_1d(sr.w))}", file=out)
        for c in sr.checks():
            print(c.describe(), file=out)
        ok = ok and sr.holds
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_lift(cfg, out):
    _need_inputs(cfg, 1)
    f = _load(cfg, 0)
    level = cfg.extra.get("xi")
    if level is None:
        level = xi(cfg.extra.get("eps", 1e-6), cfg.constants)
    K = lift_body(f, level)
    ref = lift_area(f, level)
    print(f"xi={level:.10g}", file=out)
    print(f"vertices={len(K.vertices)}", file=out)
    print(f"area={K.area:.12g}", file=out)
    print(f"area_identity={ref:.12g}", file=out)
    if cfg.output:
        write_polygon_csv(K, cfg.output)
    return EXIT_OK if abs(K.area - ref) <= 1e-10 * ref else EXIT_FAIL


HANDLERS = {
    "supconv": _cmd_supconv,
    "deficit": _cmd_deficit,
    "distance": _cmd_distance,
    "witness": _cmd_witness,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "geometry": _cmd_geometry,
    "lift": _cmd_lift,
}


def run(cfg: RunConfig, out=None) -> int:
    """Execute one command; returns the exit status."""
    out = out or sys.stdout
    return HANDLERS[cfg.command](cfg, out)


def _parse_consts(items) -> Constants:
    over = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigInvalid(f"--const expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            over[k] = float(v)
        except ValueError:
            raise ConfigInvalid(f"--const {k}: bad number {v!r}") from None
    return Constants().replace(**over)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plstab", description="Prekopa-Leindler stability laboratory")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lambda", dest="lam", type=float, default=0.5)
    common.add_argument("--resolution", type=int, default=1024)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", "-o")
    common.add_argument("--const", action="append", metavar="NAME=VALUE", help="override c0_1d, c_thm15, c_cor16, c_thm17")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("supconv", "deficit", "distance", "witness"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("f")
        sp.add_argument("g")
    sp = sub.add_parser("sweep", parents=[common])
    sp.add_argument("--family", required=True)
    sp.add_argument("--points", type=int, default=32)
    sp.add_argument("--params", help="comma-separated parameter values")
    sp.add_argument("--plot", help="write (ln l1, ln eps) plot data here")
    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("--verbose", "-v", action="store_true")
    sp = sub.add_parser("geometry", parents=[common])
    sp.add_argument("bodies", nargs="+")
    sp.add_argument("--eta", type=float, default=0.0)
    sp = sub.add_parser("lift", parents=[common])
    sp.add_argument("f")
    sp.add_argument("--xi", type=float)
    sp.add_argument("--eps", type=float, default=1e-6)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    extra = {}
    inputs = []
    if ns.command in ("supconv", "deficit", "distance", "witness"):
        inputs = [ns.f, ns.g]
    elif ns.command == "lift":
        inputs = [ns.f]
        extra = {"xi": ns.xi, "eps": ns.eps}
    elif ns.command == "geometry":
        inputs = ns.bodies
        extra = {"eta": ns.eta}
    elif ns.command == "sweep":
        extra = {"family": ns.family, "points": ns.points, "plot": ns.plot}
        if ns.params:
            try:
                extra["params"] = [float(v) for v in ns.params.split(",")]
            except ValueError:
                raise ConfigInvalid(f"--params: bad number list {ns.params!r}") from None
        if ns.points < 1:
            raise ConfigInvalid("--points must be positive")
    elif ns.command == "verify":
        extra = {"verbose": ns.verbose}
    return RunConfig(ns.command, inputs, ns.lam, ns.resolution, _parse_consts(ns.const), ns.output, ns.seed, extra)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        return run(cfg)
    except PLStabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
