"""Batch command-line front end: ``quatlift <command> [--config cfg.json] [overrides]``.

Tables go out as CSV, residual reports as JSON.  Both start with a header that
echoes the effective configuration and the version tag.  Output lands in
``<out>/<command>.<ext>`` (written atomically) or on stdout when ``out`` is unset.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import subprocess
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .field_space import FieldElement, herm, make_space
from .group_lie import GroupElement, m_of, random_group_element
from .lattice_lift import LatticeSpec, enumerate_norm, lift_schmid_check, poincare_lift
from .special_quadrature import QuadratureSpec, bessel_k_array
from .theta_arch import arch_integral, fourier_A, whittaker_constant
from .whittaker_schmid import WhittakerSpec, b_ell, scalar_system_residual, schmid_apply, whittaker

THREADS_ENV = "QUATLIFT_THREADS"
SCHMID_TOL = 1e-5


class ConfigError(ValueError):
    """Invalid configuration or violated hypothesis; exit code 2."""


# ---------- configuration ----------

_FIELD_RE = re.compile(r"^\s*([+-]?[\d/]+)?\s*(?:([+-])\s*([\d/]*)\s*\*?\s*(s|i|w))?\s*$")


def parse_field_element(text, d: int) -> FieldElement:
    """``"3/2"``, ``"1/2+1/2*s"``, ``"-s"``; ``s`` is sqrt(-d), ``w`` the ring generator, ``i`` allowed when d = 1."""
    if isinstance(text, (int, Fraction)):
        return FieldElement(text, 0, d)
    s = str(text).replace(" ", "")
    if re.fullmatch(r"[+-]?[\d/]*\*?[siw]", s):          # purely imaginary, e.g. "2w", "-s"
        s = ("0" + s) if s[0] in "+-" else "0+" + s
    m = _FIELD_RE.match(s)
    if not m:
        raise ConfigError(f"cannot parse field element {text!r}")
    x = Fraction(m.group(1) or 0)
    if not m.group(4):
        return FieldElement(x, 0, d)
    if m.group(4) == "i" and d != 1:
        raise ConfigError(f"'i' only denotes sqrt(-1) when d = 1 (got d={d})")
    y = Fraction(m.group(3) or 1) * (-1 if m.group(2) == "-" else 1)
    if m.group(4) == "w" and d % 4 == 3:
        return FieldElement(x + y / 2, y / 2, d)
    return FieldElement(x, y, d)


@dataclass
class RunConfig:
    n: int = 1
    d: int = 1
    ell: int = 3
    lattice: LatticeSpec | None = None
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    seed: int = 0
    out: Path | None = None
    raw: dict = field(default_factory=dict)

    @property
    def space(self):
        return make_space(self.n, self.d)


def _as_int(raw: dict, key: str) -> int:
    val = raw[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(f"config key {key!r} must be an integer (got {val!r})")
    return val


def build_config(raw: dict) -> RunConfig:
    known = {"n", "d", "ell", "lattice", "quadrature", "seed", "out"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged = {"n": 1, "d": 1, "ell": 3, "lattice": "standard", "seed": 0, "out": None, "quadrature": {}}
    merged.update(raw)
    n, d, ell, seed = (_as_int(merged, k) for k in ("n", "d", "ell", "seed"))
    if n < 1:
        raise ConfigError(f"n >= 1 required (got n={n})")
    if ell < 0:
        raise ConfigError(f"ell >= 0 required (got ell={ell})")
    try:
        space = make_space(n, d)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    q = dict(merged["quadrature"] or {})
    bad = set(q) - {"abs_tol", "rel_tol", "max_subdivisions", "radius"}
    if bad:
        raise ConfigError(f"unknown quadrature keys: {sorted(bad)}")
    base = QuadratureSpec()
    try:
        quad = QuadratureSpec(float(q.get("abs_tol", base.abs_tol)), float(q.get("rel_tol", base.rel_tol)),
                              int(q.get("max_subdivisions", base.max_subdivisions)),
                              float(q.get("radius", base.truncation_radius)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid quadrature settings: {exc}") from exc
    lat = merged["lattice"]
    if lat == "standard":
        lattice = LatticeSpec.standard(space)
    else:
        try:
            rows = tuple(tuple(parse_field_element(x, d) for x in row) for row in lat)
            lattice = LatticeSpec(rows, d)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid lattice basis: {exc}") from exc
        if lattice.dim != space.dim:
            raise ConfigError(f"lattice basis must be {space.dim} x {space.dim} for n={n}")
    out = Path(merged["out"]) if merged["out"] else None
    echo = {"n": n, "d": d, "ell": ell, "lattice": lat, "seed": seed, "out": merged["out"],
            "quadrature": {"abs_tol": quad.abs_tol, "rel_tol": quad.rel_tol,
                           "max_subdivisions": quad.max_subdivisions, "radius": quad.truncation_radius}}
    return RunConfig(n, d, ell, lattice, quad, seed, out, echo)


def load_config(path: str | None, overrides: dict) -> RunConfig:
    raw = {}
    if path:
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
    for key, val in overrides.items():
        if val is None:
            continue
        if key.startswith("quadrature."):
            raw.setdefault("quadrature", {})[key.split(".", 1)[1]] = val
        else:
            raw[key] = val
    return build_config(raw)


# ---------- hypotheses ----------

def require_lift_convergence(cfg: RunConfig, t) -> None:
    if cfg.ell <= cfg.n + 1:
        raise ConfigError(f"ell > n+1 is required for absolute convergence of the lattice lift "
                          f"(got ell={cfg.ell}, n={cfg.n})")
    if Fraction(t) <= 0:
        raise ConfigError(f"t > 0 is required: the lift sums over vectors of positive norm (got t={t})")


def require_positive(space, vec, what: str) -> None:
    val = herm(space, vec, vec)
    if complex(val).real <= 0:
        raise ConfigError(f"{what} must have positive Hermitian norm (got {complex(val).real:g})")


# ---------- output ----------

def version_tag() -> str:
    here = Path(__file__).resolve().parent
    try:
        rev = subprocess.run(["git", "describe", "--always", "--dirty"], cwd=here, capture_output=True,
                             text=True, timeout=5)
        if rev.returncode == 0 and rev.stdout.strip():
            return f"v{__version__}-g{rev.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return f"v{__version__}"


def threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def ordered_map(fn, items) -> list:
    """Map with a thread pool; results keep input order so reductions are reproducible."""
    items = list(items)
    k = threads()
    if k == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (Fraction, FieldElement)):
        return str(x)
    return x


def header(cfg: RunConfig, command: str, params: dict) -> dict:
    return {"tool": "quatlift", "version": version_tag(), "command": command,
            "config": cfg.raw, "params": _jsonable(params)}


def render_json(cfg, command, params, result) -> str:
    doc = {"header": header(cfg, command, params), "result": _jsonable(result)}
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=True) + "\n"


def render_csv(cfg, command, params, columns, rows) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(header(cfg, command, params), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def emit(cfg: RunConfig, name: str, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    cfg.out.mkdir(parents=True, exist_ok=True)
    target = cfg.out / name
    fd, tmp = tempfile.mkstemp(dir=cfg.out, prefix=f".{name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    print(str(target), file=sys.stderr)


# ---------- parsing helpers ----------

def parse_range(text: str, integer: bool = False):
    """``a:b`` (integers, inclusive) or ``a:b:count`` (geometric when prefixed by ``g``)."""
    geo = text.startswith("g")
    parts = text.lstrip("g").split(":")
    try:
        if integer:
            if len(parts) == 1:
                return [int(parts[0])]
            return list(range(int(parts[0]), int(parts[1]) + 1))
        if len(parts) == 1:
            return [float(parts[0])]
        a, b = float(parts[0]), float(parts[1])
        count = int(parts[2]) if len(parts) > 2 else 10
    except ValueError as exc:
        raise ConfigError(f"invalid range {text!r}") from exc
    if geo:
        if a <= 0:
            raise ConfigError("geometric ranges need positive endpoints")
        return list(np.geomspace(a, b, count))
    return list(np.linspace(a, b, count))


def parse_complex_list(text: str, length: int, what: str) -> np.ndarray:
    try:
        vals = [complex(x.replace(" ", "")) for x in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"cannot parse {what} {text!r}: {exc}") from exc
    if len(vals) != length:
        raise ConfigError(f"{what} needs {length} comma-separated entries (got {len(vals)})")
    return np.array(vals, dtype=complex)


def v0_vector(space, text: str, what: str) -> np.ndarray:
    """Vector of V0 from its ``h_1..h_n`` coordinates."""
    coords = parse_complex_list(text, space.n, what)
    full = np.zeros(space.dim, dtype=complex)
    full[1:-1] = coords
    return space.rat_to_arch(full)


def sample_m_points(space, rng, count: int):
    """Deterministic M-points ``m(h, z)`` with ``h`` in U(1, n-1) and ``z`` in C^x."""
    from .acceptance import random_m_point
    return [random_m_point(space, rng) for _ in range(count)]


def group_point(space, kind: str, rng) -> GroupElement:
    if kind == "identity":
        return GroupElement.identity(space)
    if kind == "random":
        return random_group_element(space, rng, 0.5)
    raise ConfigError(f"unknown group point {kind!r} (use identity or random)")


# ---------- commands ----------

def cmd_bessel(cfg: RunConfig, args) -> int:
    orders = parse_range(args.v, integer=True)
    xs = parse_range(args.x)
    if min(orders) < 0 or min(xs) <= 0:
        raise ConfigError("orders must be >= 0 and x > 0")
    rows = ordered_map(lambda x: [x] + list(bessel_k_array(orders, x)), xs)
    emit(cfg, "bessel.csv", render_csv(cfg, "bessel", {"v": args.v, "x": args.x},
                                       ["x"] + [f"K_{v}" for v in orders], rows))
    return 0


def cmd_whittaker(cfg: RunConfig, args) -> int:
    space = cfg.space
    T = v0_vector(space, args.T, "T")
    try:
        spec = WhittakerSpec(space, T, cfg.ell)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if spec.norm_type <= 0:
        raise ConfigError("the closed-form Whittaker function needs <T,T> > 0")
    pts = sample_m_points(space, np.random.default_rng(cfg.seed), args.samples)

    def row(i_pt):
        i, (h, z) = i_pt
        W = whittaker(spec, m_of(space, h, z)).coeffs
        res = scalar_system_residual(spec, h, z).relative
        return [i, z.real, z.imag] + [x for c in W for x in (c.real, c.imag)] + [res]

    rows = ordered_map(row, list(enumerate(pts)))
    cols = ["sample", "z_re", "z_im"]
    for v in range(-cfg.ell, cfg.ell + 1):
        cols += [f"W{v:+d}_re", f"W{v:+d}_im"]
    cols.append("scalar_system_residual")
    emit(cfg, "whittaker.csv", render_csv(cfg, "whittaker", {"T": args.T, "samples": args.samples}, cols, rows))
    return 0


def cmd_schmid(cfg: RunConfig, args) -> int:
    space, ell = cfg.space, cfg.ell
    rng = np.random.default_rng(cfg.seed)
    params = {"target": args.target, "points": args.points}
    if args.target == "whittaker":
        T = v0_vector(space, args.T, "T")
        spec = WhittakerSpec(space, T, ell)
        if spec.norm_type <= 0:
            raise ConfigError("the closed-form Whittaker function needs <T,T> > 0")
        params["T"] = args.T
        gs = [m_of(space, *hz) for hz in sample_m_points(space, rng, args.points)]
        phi = lambda g: whittaker(spec, g)
    elif args.target == "bell":
        from .acceptance import random_positive_vector
        v = random_positive_vector(space, rng) if args.v is None else parse_complex_list(args.v, space.dim, "v")
        require_positive(space, v, "v")
        params["v"] = v
        gs = [random_group_element(space, rng, 0.5) for _ in range(args.points)]
        phi = lambda g: b_ell(space, v, ell, g)
    else:
        require_lift_convergence(cfg, args.t)
        gs = [random_group_element(space, rng, 0.3) for _ in range(args.points)]
        params.update(t=args.t, R=args.R)
        checks = ordered_map(lambda g: {s: lift_schmid_check(space, cfg.lattice, Fraction(args.t), ell, g,
                                                             args.R, s) for s in "+-"}, gs)
        per_point = [{s: {k: float(c[k]) for k in ("residual", "per_term", "tail")} for s, c in ch.items()}
                     for ch in checks]
        ok = all(c["residual"] <= c["per_term"] + c["tail"] for ch in per_point for c in ch.values())
        emit(cfg, "schmid.json", render_json(cfg, "schmid", params,
                                             {"points": per_point, "bounded_by_per_term_plus_tail": ok}))
        return 0 if ok else 1
    rows = ordered_map(lambda g: {s: schmid_apply(space, phi, ell, s, g).residual() for s in "+-"}, gs)
    worst = max(max(r.values()) for r in rows)
    emit(cfg, "schmid.json", render_json(cfg, "schmid", params,
                                         {"residuals": rows, "max_residual": worst, "tolerance": SCHMID_TOL,
                                          "passed": worst < SCHMID_TOL}))
    return 0 if worst < SCHMID_TOL else 1


def cmd_arch_integral(cfg: RunConfig, args) -> int:
    space, ell = cfg.space, cfg.ell
    v = parse_complex_list(args.v, space.dim, "v") if args.v else space.rat_to_arch(
        np.array([0, 1] + [0] * space.n, dtype=complex))
    require_positive(space, v, "v")
    t = float(complex(herm(space, v, v)).real)
    I = arch_integral(space, v, t, ell)
    B = b_ell(space, v, ell, GroupElement.identity(space))
    mask = np.abs(B.coeffs) > 1e-12 * np.max(np.abs(B.coeffs))
    ratio = np.where(mask, I.coeffs / np.where(mask, B.coeffs, 1), np.nan)
    closed = 2 * math.pi ** 2 * math.gamma(2 * ell + 1) / (4 * math.pi) ** (2 * ell + 1)
    emit(cfg, "arch_integral.json", render_json(cfg, "arch-integral", {"v": v, "t": t}, {
        "integral": I.coeffs, "b_at_identity": B.coeffs, "ratio": ratio, "closed_form": closed,
        "max_relative_gap": float(np.nanmax(np.abs(ratio - closed)) / closed)}))
    return 0


def cmd_fourier_a(cfg: RunConfig, args) -> int:
    space, ell = cfg.space, cfg.ell
    v0 = v0_vector(space, args.v0, "v0")
    require_positive(space, v0, "v0")
    g = group_point(space, args.g, np.random.default_rng(cfg.seed))
    q = cfg.quadrature
    res = fourier_A(space, v0, ell, g, QuadratureSpec(q.abs_tol, q.rel_tol, q.max_subdivisions,
                                                      q.truncation_radius))
    W = whittaker(WhittakerSpec(space, 1j * v0, ell), g).coeffs
    i = int(np.argmax(np.abs(W)))
    C = res.value.coeffs[i] / W[i]
    dev = float(np.max(np.abs(res.value.coeffs - C * W)) / np.max(np.abs(res.value.coeffs)))
    emit(cfg, "fourier_a.json", render_json(cfg, "fourier-a", {"v0": args.v0, "g": args.g}, {
        "value": res.value.coeffs, "error": res.error, "radius": res.radius, "envelope_tail": res.envelope_tail,
        "converged": res.converged, "constant": C, "closed_form_constant": whittaker_constant(ell),
        "deviation_from_proportionality": dev}))
    return 0 if res.converged else 1


def cmd_lift(cfg: RunConfig, args) -> int:
    space, ell = cfg.space, cfg.ell
    t = Fraction(args.t)
    require_lift_convergence(cfg, t)
    g = group_point(space, args.g, np.random.default_rng(cfg.seed))
    radii = [float(r) for r in args.R.split(",")]
    lifts = ordered_map(lambda R: poincare_lift(space, cfg.lattice, t, ell, g, R), radii)
    table = [{"R": R, "value": L.value.coeffs, "norm": L.value.norm(), "tail": L.tail, "terms": L.terms,
              "complete": L.complete} for R, L in zip(radii, lifts)]
    cauchy = [{"R": radii[i], "R_next": radii[i + 1],
               "difference": (lifts[i].value - lifts[i + 1].value).norm(), "tail": lifts[i].tail}
              for i in range(len(radii) - 1)]
    emit(cfg, "lift.json", render_json(cfg, "lift", {"t": args.t, "R": radii, "g": args.g},
                                       {"truncations": table, "cauchy": cauchy}))
    return 0


def cmd_enumerate(cfg: RunConfig, args) -> int:
    space = cfg.space
    t = Fraction(args.t)
    en = enumerate_norm(space, cfg.lattice, t, args.R)
    vecs = en.space_vectors(space, cfg.lattice)
    rows = []
    for c, v in zip(en.coords, vecs):
        norm = herm(space, v, v)
        rows.append([" ".join(str(int(x)) for x in c)] + [str(x) for x in v.coords] + [str(norm)])
    cols = ["lattice_coords"] + [f"x{i}" for i in range(space.dim)] + ["norm"]
    emit(cfg, "enumerate.csv", render_csv(cfg, "enumerate", {"t": str(t), "R": args.R, "complete": en.complete},
                                          cols, rows))
    return 0


def cmd_selftest(cfg: RunConfig, args) -> int:
    from .acceptance import run_all
    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_all(args.profile, only, echo=lambda line: print(line, file=sys.stderr))
    summary = {"profile": args.profile, "passed": all(r.passed for r in results),
               "criteria": [{"number": r.number, "name": r.name, "passed": r.passed, "summary": r.summary}
                            for r in results]}
    emit(cfg, "selftest.json", render_json(cfg, "selftest", {"profile": args.profile, "only": only}, summary))
    return 0 if summary["passed"] else 1


# ---------- entry point ----------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quatlift", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"quatlift {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--n", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--ell", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output directory (stdout when omitted)")
    common.add_argument("--abs-tol", type=float, dest="quadrature.abs_tol")
    common.add_argument("--rel-tol", type=float, dest="quadrature.rel_tol")
    common.add_argument("--radius", type=float, dest="quadrature.radius")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bessel", parents=[common], help="table of K_v(x)")
    s.add_argument("--v", default="0:3", help="orders a:b")
    s.add_argument("--x", default="1:10:10", help="points a:b:count (prefix g for geometric)")
    s = sub.add_parser("whittaker", parents=[common], help="W_T at sampled M-points")
    s.add_argument("--T", default="1", help="h-coordinates of T, comma-separated complex numbers")
    s.add_argument("--samples", type=int, default=10)
    s = sub.add_parser("schmid", parents=[common], help="Schmid residual report")
    s.add_argument("target", choices=["whittaker", "bell", "lift"])
    s.add_argument("--T", default="1")
    s.add_argument("--v", default=None, help="arch coordinates of v for the bell target")
    s.add_argument("--t", default="1")
    s.add_argument("--R", type=float, default=10.0)
    s.add_argument("--points", type=int, default=5)
    s = sub.add_parser("arch-integral", parents=[common], help="archimedean local integral")
    s.add_argument("--v", default=None, help="arch coordinates of v")
    s = sub.add_parser("fourier-a", parents=[common], help="Fourier transform of A_l along the centre coset")
    s.add_argument("--v0", default="1", help="h-coordinates of v0")
    s.add_argument("--g", default="identity", choices=["identity", "random"])
    s = sub.add_parser("lift", parents=[common], help="truncated lattice lift")
    s.add_argument("--t", default="1")
    s.add_argument("--R", default="10,20,40", help="comma-separated squared-majorant cutoffs")
    s.add_argument("--g", default="identity", choices=["identity", "random"])
    s = sub.add_parser("enumerate", parents=[common], help="lattice vectors of norm t")
    s.add_argument("--t", default="1")
    s.add_argument("--R", type=float, default=8.0)
    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    s.add_argument("profile", nargs="?", default="fast", choices=["fast", "full"])
    s.add_argument("--only", default=None, help="comma-separated criterion numbers")
    return p


COMMANDS = {"bessel": cmd_bessel, "whittaker": cmd_whittaker, "schmid": cmd_schmid,
            "arch-integral": cmd_arch_integral, "fourier-a": cmd_fourier_a, "lift": cmd_lift,
            "enumerate": cmd_enumerate, "selftest": cmd_selftest}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    overrides = {k: getattr(args, k) for k in ("n", "d", "ell", "seed", "out",
                                               "quadrature.abs_tol", "quadrature.rel_tol", "quadrature.radius")}
    try:
        cfg = load_config(args.config, overrides)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
