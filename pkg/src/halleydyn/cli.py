"""Command line front end.

Subcommands:
  render    basin-of-attraction image (PPM) plus a text summary
  analyze   fixed-point classification, extraneous points, symmetry orders
  cycles    the cubic-family parameter search: five 2-cycle parameters
  profile   real-axis profile of the map as CSV
  paperlab  run the built-in acceptance experiments (E1-E10)

Configs are flat key=value text files; see parse_config.  Exit codes:
0 success, 2 config error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field

from .errors import ConfigError, HalleyDynError
from .polycore import Polynomial, find_roots
from .ratmap import (
    RationalMap,
    halley_of,
    konig_of,
    chebyshev_halley_of,
    free_critical_points,
    is_infinity,
)
from .classify import classify_fixed_points, extraneous_fixed_points
from .dynamics import (
    Window,
    classify_grid,
    free_critical_fates,
    immediate_basin_component,
    boundedness_evidence,
    real_axis_profile,
    profile_to_csv,
)
from .symmetry import map_rotation_order, symmetry_report
from .render import ColorMap, default_palette, write_image
from .paramsearch import (
    cycle_condition_polynomial,
    divide_out_root,
    F_COEFFS,
    roots_of_F,
    verify_cycle,
    xi_of,
)


@dataclass
class JobConfig:
    coeffs: list = field(default_factory=list)
    method: str = "halley"
    window: Window | None = None
    res: tuple = (400, 400)
    max_iter: int = 200
    capture_radius: float = 1e-8
    seed: int = 0
    out: str | None = None
    x_min: float = -2.0
    x_max: float = 2.0
    samples: int = 401
    shading: float = 0.55


_KNOWN_KEYS = {
    "coeff", "method", "window", "res", "max_iter", "capture_radius",
    "seed", "out", "x_min", "x_max", "samples", "shading",
}


def _parse_complex(text: str) -> complex:
    """Accept 're,im' or a bare real number."""
    parts = [t.strip() for t in text.split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ConfigError(f"cannot parse complex value {text!r}")


def _parse_window(text: str) -> Window:
    parts = [t.strip() for t in text.split(",")]
    if len(parts) != 4:
        raise ConfigError(f"window needs cx,cy,hw,hh, got {text!r}")
    try:
        cx, cy, hw, hh = (float(t) for t in parts)
    except ValueError:
        raise ConfigError(f"window needs numeric cx,cy,hw,hh, got {text!r}")
    if hw <= 0 or hh <= 0:
        raise ConfigError("window extents must be positive")
    return Window(complex(cx, cy), hw, hh)


def _parse_res(text: str) -> tuple:
    m = re.fullmatch(r"(\d+)\s*[xX]\s*(\d+)", text.strip())
    if m:
        w, h = int(m.group(1)), int(m.group(2))
    elif text.strip().isdigit():
        w = h = int(text.strip())
    else:
        raise ConfigError(f"resolution must be WxH or a single integer, got {text!r}")
    if w < 2 or h < 2:
        raise ConfigError("resolution must be at least 2x2")
    return (w, h)


def parse_config(text: str) -> JobConfig:
    """Parse the flat key=value format.

    Lines are 'key = value'; '#' starts a comment; 'coeff' may repeat, one
    line per ascending-order coefficient, each 're,im' or a bare real.
    """
    cfg = JobConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            if key == "coeff":
                cfg.coeffs.append(_parse_complex(value))
            elif key == "method":
                cfg.method = value
            elif key == "window":
                cfg.window = _parse_window(value)
            elif key == "res":
                cfg.res = _parse_res(value)
            elif key == "max_iter":
                cfg.max_iter = int(value)
            elif key == "capture_radius":
                cfg.capture_radius = float(value)
            elif key == "seed":
                cfg.seed = int(value)
            elif key == "out":
                cfg.out = value
            elif key == "x_min":
                cfg.x_min = float(value)
            elif key == "x_max":
                cfg.x_max = float(value)
            elif key == "samples":
                cfg.samples = int(value)
            elif key == "shading":
                cfg.shading = float(value)
        except ConfigError:
            raise
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}")
    if cfg.max_iter < 1:
        raise ConfigError("max_iter must be positive")
    if cfg.capture_radius <= 0:
        raise ConfigError("capture_radius must be positive")
    if cfg.samples < 2:
        raise ConfigError("samples must be at least 2")
    return cfg


def load_config(path: str) -> JobConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    return parse_config(text)


def build_polynomial(cfg: JobConfig) -> Polynomial:
    if len(cfg.coeffs) < 2:
        raise ConfigError("config needs at least two coeff lines (degree >= 1)")
    p = Polynomial.make(cfg.coeffs)
    if p.degree < 1:
        raise ConfigError("polynomial degenerates to a constant after trimming")
    return p


def build_map(p: Polynomial, method: str, seed: int = 0) -> RationalMap:
    """method is 'halley', 'konig(n)', or 'chebyshev(sigma)'."""
    m = method.strip().lower()
    if m == "halley":
        return halley_of(p, seed=seed)
    km = re.fullmatch(r"konig\((\d+)\)", m)
    if km:
        n = int(km.group(1))
        if n < 2:
            raise ConfigError("konig order must be >= 2")
        return konig_of(p, n, seed=seed)
    cm = re.fullmatch(r"chebyshev\(([^)]*)\)", m)
    if cm:
        sigma = _parse_complex(cm.group(1))
        return chebyshev_halley_of(p, sigma, seed=seed)
    raise ConfigError(f"unknown method {method!r}")


def _apply_overrides(cfg: JobConfig, args) -> JobConfig:
    if getattr(args, "window", None):
        cfg.window = _parse_window(args.window)
    if getattr(args, "res", None):
        cfg.res = _parse_res(args.res)
    if getattr(args, "max_iter", None) is not None:
        if args.max_iter < 1:
            raise ConfigError("max_iter must be positive")
        cfg.max_iter = args.max_iter
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "out", None):
        cfg.out = args.out
    return cfg


def _fmt(z: complex, nd: int = 10) -> str:
    """One CSV field per value; complex() can parse every form emitted."""
    z = complex(z)
    if z.imag == 0.0:
        return f"{z.real:.{nd}g}"
    return f"{z.real:.{nd}g}{z.imag:+.{nd}g}j"


def _summary_fixed_points(p, R, out):
    records = classify_fixed_points(p, R)
    out.write("[fixed_points]\n")
    out.write("location,multiplier,class,origin\n")
    for r in records:
        loc = "inf" if is_infinity(r.location) else _fmt(r.location)
        out.write(f"{loc},{_fmt(r.multiplier)},{r.klass},{r.origin.kind}\n")
    extr = extraneous_fixed_points(records)
    out.write("[extraneous]\n")
    out.write("location,multiplier\n")
    for r in extr:
        out.write(f"{_fmt(r.location)},{_fmt(r.multiplier)}\n")
    return records


def cmd_render(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    if not cfg.out:
        raise ConfigError("render needs an output path (out= or --out)")
    p = build_polynomial(cfg)
    R = build_map(p, cfg.method, seed=cfg.seed)
    window = cfg.window or Window(0j, 2.0, 2.0)
    roots = [c.location for c in find_roots(p, seed=cfg.seed)]
    grid = classify_grid(R, roots, window, cfg.res,
                         max_iter=cfg.max_iter,
                         capture_radius=cfg.capture_radius)
    cmap = ColorMap(palette=default_palette(max(8, len(roots))),
                    shading=cfg.shading)
    write_image(grid, cmap, cfg.out)

    out = sys.stdout
    out.write("# render summary\n")
    out.write(f"seed,{cfg.seed}\n")
    out.write(f"method,{cfg.method}\n")
    out.write(f"degree,{R.degree}\n")
    out.write(f"image,{cfg.out}\n")
    _summary_fixed_points(p, R, out)

    out.write("[free_critical_fates]\n")
    out.write("location,outcome,target\n")
    crits = free_critical_points(R, roots)
    fates = free_critical_fates(p, R, max_iter=cfg.max_iter,
                                capture_radius=cfg.capture_radius,
                                seed=cfg.seed)
    for c, f in zip(crits, fates):
        if f.kind == "root":
            tgt = _fmt(roots[f.root_index])
        elif f.kind == "cycle":
            tgt = "period-" + str(f.period)
        else:
            tgt = "undecided"
        out.write(f"{_fmt(c.location)},{f.kind},{tgt}\n")

    # per-root component report on the rendered window; roots whose
    # component stays clear of the border get the escalating-window check
    out.write("[components]\n")
    out.write("root,touches_border,verdict\n")
    for i, r in enumerate(roots):
        try:
            _, touches = immediate_basin_component(grid, r)
        except HalleyDynError:
            out.write(f"{_fmt(r)},n/a,undecided-seed\n")
            continue
        if touches:
            out.write(f"{_fmt(r)},true,unbounded-evidence\n")
            continue
        wins = [window,
                Window(window.center, 2 * window.half_width, 2 * window.half_height),
                Window(window.center, 4 * window.half_width, 4 * window.half_height)]
        base = min(cfg.res[0], 256)
        rep = boundedness_evidence(R, roots, r, wins, resolution=base,
                                   max_iter=cfg.max_iter,
                                   capture_radius=cfg.capture_radius)
        out.write(f"{_fmt(r)},false,{rep.verdict}\n")
    return 0


def cmd_analyze(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    p = build_polynomial(cfg)
    R = build_map(p, cfg.method, seed=cfg.seed)
    out = sys.stdout
    out.write("# analyze\n")
    out.write(f"seed,{cfg.seed}\n")
    out.write(f"method,{cfg.method}\n")
    out.write(f"degree,{R.degree}\n")
    _summary_fixed_points(p, R, out)
    out.write("[symmetry]\n")
    order = map_rotation_order(R)
    out.write(f"map_rotation_order,{order}\n")
    try:
        rep = symmetry_report(p, seed=cfg.seed)
    except (HalleyDynError, ValueError) as exc:
        out.write(f"group_comparison,skipped ({exc})\n")
    else:
        out.write(f"polynomial_order,{rep.sigma_p_order}\n")
        out.write(f"grid_order,{rep.grid_order}\n")
        out.write(f"equality,{str(rep.equality).lower()}\n")
    return 0


def cmd_cycles(args) -> int:
    seed = args.seed if args.seed is not None else 0
    out = sys.stdout
    cond = cycle_condition_polynomial()
    quotient, remainder = divide_out_root(cond, -7.0)
    lead = max(abs(c) for c in cond.coeffs)
    factor_ok = remainder <= 1e-6 * lead
    quintic_ok = all(
        abs(a - b) <= 1e-8 * max(1.0, abs(b))
        for a, b in zip(quotient.coeffs, F_COEFFS)
    )
    out.write("# cubic family z^3 + 6z + b: parameters with a 2-cycle through 1\n")
    out.write(f"factor_check,{'PASS' if factor_ok and quintic_ok else 'FAIL'}\n")
    out.write("[candidates]\n")
    out.write("b,xi,residual,multiplier_magnitude\n")
    for cl in roots_of_F(seed=seed):
        cand = verify_cycle(cl.location)
        out.write(f"{_fmt(cand.b)},{_fmt(xi_of(cand.b))},"
                  f"{cand.residual:.3e},{abs(cand.multiplier):.3e}\n")
    if not (factor_ok and quintic_ok):
        return 3
    return 0


def cmd_profile(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    p = build_polynomial(cfg)
    R = build_map(p, cfg.method, seed=cfg.seed)
    rows = real_axis_profile(R, cfg.x_min, cfg.x_max, cfg.samples)
    if cfg.out:
        profile_to_csv(rows, cfg.out)
        sys.stdout.write(f"wrote {cfg.out} ({len(rows)} rows)\n")
    else:
        sys.stdout.write("x,Hx,Hx_minus_x,pole_flag\n")
        for r in rows:
            v = "" if r.value is None else f"{r.value:.12g}"
            d = "" if r.delta is None else f"{r.delta:.12g}"
            sys.stdout.write(f"{r.x:.12g},{v},{d},{r.pole_flag}\n")
    return 0


def cmd_paperlab(args) -> int:
    from . import acceptance

    only = set(args.only) if args.only else None
    seed = args.seed if args.seed is not None else 0
    results = acceptance.run(only=only, seed=seed)
    failed = []
    for name, ok, detail in results:
        sys.stdout.write(f"{name}: {'PASS' if ok else 'FAIL'} - {detail}\n")
        if not ok:
            failed.append(name)
    if failed:
        sys.stdout.write(f"failed: {' '.join(failed)}\n")
        return 1
    sys.stdout.write(f"all {len(results)} criteria passed\n")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="halleydyn",
        description="Halley-method dynamics: basins, fixed points, "
                    "symmetry, and the cubic 2-cycle family.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, config_required=True):
        if config_required:
            sp.add_argument("--config", required=True, help="key=value config file")
        sp.add_argument("--out", help="output path")
        sp.add_argument("--window", help="cx,cy,hw,hh")
        sp.add_argument("--res", help="WxH or single integer")
        sp.add_argument("--max-iter", dest="max_iter", type=int)
        sp.add_argument("--seed", type=int)

    add_common(sub.add_parser("render", help="basin image + summary"))
    add_common(sub.add_parser("analyze", help="fixed points and symmetry"))
    sp = sub.add_parser("cycles", help="cubic-family 2-cycle table")
    sp.add_argument("--seed", type=int)
    add_common(sub.add_parser("profile", help="real-axis CSV"))
    sp = sub.add_parser("paperlab", help="run acceptance experiments")
    sp.add_argument("--only", action="append", metavar="EID",
                    help="run a subset (repeatable), e.g. --only E3")
    sp.add_argument("--seed", type=int)

    args = parser.parse_args(argv)
    handlers = {
        "render": cmd_render,
        "analyze": cmd_analyze,
        "cycles": cmd_cycles,
        "profile": cmd_profile,
        "paperlab": cmd_paperlab,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except HalleyDynError as exc:
        sys.stderr.write(f"numeric failure: {type(exc).__name__}: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
