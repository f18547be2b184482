"""Command-line front end: JSON experiment configs in, CSV tables out.

Subcommands: apply, norms, bounds, coeffs, approx, verify.  Each run is
described by a single JSON document (no positional parameters), so results
are reproducible and hashable; every CSV starts with '#'-prefixed metadata
including the tool version and the config hash.  Exit codes: 0 ok,
1 verification failure, 2 config error, 3 numerical divergence.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

import numpy as np

from . import __version__
from .errors import ConfigError, DivergenceError, DomainError
from .hausdorff import HausdorffOperator, coefficient_sequence, linear_coefficient_sequence
from .measure import KernelSpec, MeasureSpec, build_quadrature
from .mobius import MobiusParam, compose, mobius_apply
from .norms import SpaceSpec, bergman_norm, bloch_norm, bloch_seminorm, hardy_norm, \
    norm_in_space
from .series import TaylorFunction, boundary_samples, from_boundary_samples, \
    geometric, monomial, tail_band_magnitude
from .verify import BOUND_TOL, approx_identity_sweep, check_bound, make_operator

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3


# -- config parsing ----------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _as_complex(v, where: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and \
            all(isinstance(t, (int, float)) for t in v):
        return complex(v[0], v[1])
    raise ConfigError(f"{where}: expected a number or [re, im] pair, got {v!r}")


def _check_keys(obj: dict, allowed: set, where: str):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {sorted(unknown)}")


def parse_function(cfg, where: str = "function") -> TaylorFunction:
    _check_keys(cfg, {"coeffs", "family", "n", "q", "degree"}, where)
    if "coeffs" in cfg:
        if "family" in cfg:
            raise ConfigError(f"{where}: give either coeffs or family, not both")
        return TaylorFunction([_as_complex(c, where) for c in cfg["coeffs"]])
    family = cfg.get("family")
    if family == "monomial":
        return monomial(int(cfg.get("n", 1)))
    if family == "geometric":
        return geometric(_as_complex(cfg.get("q", 0.5), where),
                         int(cfg.get("degree", 256)))
    if family == "polynomial":
        raise ConfigError(f"{where}: polynomial family takes coeffs directly")
    raise ConfigError(f"{where}: need coeffs or family in {{monomial, geometric}}")


def parse_kernel(cfg, where: str = "kernel") -> KernelSpec:
    _check_keys(cfg, {"family", "c", "s", "coeffs", "sigma", "scale"}, where)
    family = cfg.get("family")
    if family == "constant":
        k = KernelSpec.constant(_as_complex(cfg.get("c", 1.0), where))
    elif family == "radial_power":
        k = KernelSpec.radial_power(float(cfg["s"]))
    elif family == "radial_log":
        k = KernelSpec.radial_log()
    elif family == "polynomial":
        k = KernelSpec.polynomial([_as_complex(c, where) for c in cfg["coeffs"]])
    elif family == "gaussian_radial":
        k = KernelSpec.gaussian_radial(float(cfg["sigma"]))
    else:
        raise ConfigError(f"{where}: unknown kernel family {family!r}")
    if "scale" in cfg:
        k = k.scaled(_as_complex(cfg["scale"], where))
    return k


def parse_measure(cfg, where: str = "measure") -> MeasureSpec:
    _check_keys(cfg, {"kind", "atoms", "weights", "alpha"}, where)
    kind = cfg.get("kind")
    if kind == "discrete":
        atoms = [_as_complex(a, where) for a in cfg.get("atoms", [])]
        weights = cfg.get("weights", [1.0] * len(atoms))
        try:
            return MeasureSpec.discrete(atoms, weights)
        except (ValueError, DomainError) as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    if kind == "area":
        try:
            return MeasureSpec.area(float(cfg.get("alpha", 0.0)))
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}: kind must be 'discrete' or 'area'")


def parse_space(cfg, where: str = "space") -> SpaceSpec:
    _check_keys(cfg, {"kind", "p", "alpha"}, where)
    kind = cfg.get("kind")
    try:
        if kind == "bloch":
            return SpaceSpec.bloch()
        if kind == "bergman":
            return SpaceSpec.bergman(float(cfg.get("p", 2.0)),
                                     float(cfg.get("alpha", 0.0)))
        if kind == "hardy":
            return SpaceSpec.hardy(float(cfg.get("p", 2.0)))
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}: kind must be bloch, bergman, or hardy")


def _operator_from(config: dict, level: int, default_gamma=None) -> HausdorffOperator:
    kernel = parse_kernel(config.get("kernel", {"family": "constant"}))
    measure = parse_measure(config.get("measure", {}))
    gamma = config.get("gamma", default_gamma)
    return make_operator(kernel, measure, level=level,
                         gamma=float(gamma) if gamma is not None else None)


def _config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _header(command: str, config: dict, level: int, seed: int, extra=()):
    lines = [
        f"# hausdisc {__version__}",
        f"# command {command}",
        f"# config_sha256 {_config_hash(config)}",
        f"# level {level}",
        f"# seed {seed}",
    ]
    lines.extend(extra)
    return lines


# -- subcommands -------------------------------------------------------------

_COMMON_KEYS = {"seed", "level", "gamma", "out"}


def cmd_apply(config: dict, level: int, seed: int) -> list[str]:
    _check_keys(config, _COMMON_KEYS | {"function", "kernel", "measure"}, "config")
    f = parse_function(config.get("function", {"coeffs": [0, 1]}))
    H = _operator_from(config, level)
    out = H.apply(f)
    lines = _header("apply", config, level, seed, (
        f"# degree {out.degree}",
        f"# tail_estimate {_fmt(tail_band_magnitude(out))}",
        f"# quadrature_level {H.rule.refinement_level}",
    ))
    lines.append("index,re,im")
    for i, c in enumerate(out.coeffs):
        lines.append(f"{i},{_fmt(c.real)},{_fmt(c.imag)}")
    return lines


def _norm_with_error(f: TaylorFunction, space: SpaceSpec) -> tuple[float, float]:
    """Norm plus a resolution-based error estimate (coarsened re-evaluation)."""
    if space.kind == "bloch":
        value = bloch_norm(f)
        coarse = bloch_seminorm(f, refine=False) + abs(f.coeffs[0])
        return value, abs(value - coarse)
    if space.kind == "bergman":
        fine = build_quadrature(MeasureSpec.area(space.alpha), level=2)
        coarse = build_quadrature(MeasureSpec.area(space.alpha), level=1)
        v = bergman_norm(f, space.p, space.alpha, fine)
        return v, abs(v - bergman_norm(f, space.p, space.alpha, coarse))
    v = hardy_norm(f, space.p)
    return v, abs(v - hardy_norm(f, space.p, m=2048))


def cmd_norms(config: dict, level: int, seed: int) -> list[str]:
    _check_keys(config, _COMMON_KEYS | {"function", "spaces", "space"}, "config")
    f = parse_function(config.get("function", {"coeffs": [0, 1]}))
    if "space" in config and "spaces" in config:
        raise ConfigError("config: give either space or spaces")
    if "space" in config:
        spaces = [parse_space(config["space"])]
    else:
        entries = config.get("spaces", [{"kind": "bloch"},
                                        {"kind": "bergman", "p": 2, "alpha": 0},
                                        {"kind": "hardy", "p": 2}])
        spaces = [parse_space(s) for s in entries]
    lines = _header("norms", config, level, seed)
    lines.append("space,value,estimated_error")
    for sp in spaces:
        v, err = _norm_with_error(f, sp)
        lines.append(f"{sp.describe()},{_fmt(v)},{_fmt(err)}")
    return lines


def cmd_bounds(config: dict, level: int, seed: int) -> list[str]:
    _check_keys(config, _COMMON_KEYS | {"kernel", "measure", "space", "trials"},
                "config")
    space = parse_space(config.get("space", {"kind": "bloch"}))
    H = _operator_from(config, level)
    trials = int(config.get("trials", 200))
    report = check_bound(H, space, trials=trials, seed=seed)
    lines = _header("bounds", config, level, seed,
                    (f"# tolerance {_fmt(BOUND_TOL)}",))
    lines.append("space,theoretical,empirical,ratio,pass,trials,seed")
    lines.append(
        f"{report.space.describe()},{_fmt(report.theoretical)},"
        f"{_fmt(report.empirical)},{_fmt(report.ratio)},"
        f"{int(report.passed)},{report.trials},{report.seed}"
    )
    return lines


def cmd_coeffs(config: dict, level: int, seed: int) -> list[str]:
    _check_keys(config, _COMMON_KEYS | {"function", "kernel", "measure", "n_max"},
                "config")
    g = parse_function(config.get("function", {"coeffs": [0, 1]}))
    n_max = int(config.get("n_max", 32))
    # contour nodes must stay away from the boundary: area rules default ungraded
    H = _operator_from(config, level if not config.get("measure", {}).get("kind") == "area"
                       else min(level, 1), default_gamma=1.0)
    seq = coefficient_sequence(H, g, n_max)
    closed = linear_coefficient_sequence(H, n_max)
    disc = float(np.abs(seq.values - closed.values).max())
    lines = _header("coeffs", config, level, seed, (
        f"# closed_form_for g(z)=z",
        f"# max_discrepancy {_fmt(disc)}",
        f"# decay_rate {_fmt(seq.decay_rate())}",
    ))
    lines.append("n,contour_re,contour_im,closed_re,closed_im")
    for n in range(n_max + 1):
        c, d = seq.values[n], closed.values[n]
        lines.append(f"{n},{_fmt(c.real)},{_fmt(c.imag)},{_fmt(d.real)},{_fmt(d.imag)}")
    return lines


def cmd_approx(config: dict, level: int, seed: int) -> list[str]:
    _check_keys(config, _COMMON_KEYS | {"function", "kernel", "measure", "space",
                                        "epsilons"}, "config")
    f = parse_function(config.get("function", {"coeffs": [0, 1]}))
    space = parse_space(config.get("space", {"kind": "hardy", "p": 2}))
    if space.kind == "bloch":
        raise ConfigError("approx: space must be bergman or hardy")
    H = _operator_from(config, level).normalized()
    epsilons = config.get("epsilons")
    report = approx_identity_sweep(H, f, space,
                                   epsilons=[float(e) for e in epsilons]
                                   if epsilons else None)
    fnorm = norm_in_space(f, space)
    lines = _header("approx", config, level, seed, (
        f"# uniform_pass {int(report.uniform_pass)}",
        f"# max_ratio {_fmt(report.max_ratio)}",
    ))
    lines.append("epsilon,error,ratio,uniform_bound")
    for eps, err in zip(report.epsilons, report.errors):
        ratio = err / fnorm if fnorm > 0 else 0.0
        lines.append(f"{_fmt(eps)},{_fmt(err)},{_fmt(ratio)},"
                     f"{_fmt(report.uniform_bound)}")
    return lines


# -- verification suite ------------------------------------------------------

DEFAULT_TOLERANCES = {
    "mobius_involution": 1e-12,
    "mobius_identity": 1e-12,
    "roundtrip": 1e-12,
    "norm_ground_truth": 1e-8,
    "bloch_ground_truth": 1e-4,
    "bloch_invariance": 1e-3,
    "bound_consistency": BOUND_TOL,
    "coefficient_duality": 1e-10,
    "identity_sweep": 1e-3,
}


def _verify_suite(config: dict, level: int, seed: int):
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(config.get("tolerances", {}))
    trials = int(config.get("trials", 50))
    rng = np.random.default_rng(seed)
    results = []

    def record(name, ok, detail):
        results.append((name, bool(ok), detail))

    # Moebius algebra
    w = 0.99 * np.sqrt(rng.random(1000)) * np.exp(2j * np.pi * rng.random(1000))
    z = 0.9 * np.sqrt(rng.random(1000)) * np.exp(2j * np.pi * rng.random(1000))
    invol = max(abs(mobius_apply(MobiusParam(wi), mobius_apply(MobiusParam(wi), zi)) - zi)
                for wi, zi in zip(w, z))
    record("mobius_involution", invol <= tol["mobius_involution"], f"max dev {invol:.2e}")
    from .mobius import one_minus_abs_sq
    ident = max(abs(one_minus_abs_sq(MobiusParam(wi), zi)
                    - (1 - abs(mobius_apply(MobiusParam(wi), zi)) ** 2))
                for wi, zi in zip(w, z))
    record("mobius_identity", ident <= tol["mobius_identity"], f"max dev {ident:.2e}")

    # series round trip
    worst = 0.0
    for _ in range(10):
        c = (rng.standard_normal(65) + 1j * rng.standard_normal(65)) / (np.arange(65) + 1)
        f = TaylorFunction(c)
        back = from_boundary_samples(boundary_samples(f, 0.9, 256), 64)
        worst = max(worst, float(np.abs(back.coeffs - c).max()))
    record("roundtrip", worst <= tol["roundtrip"], f"max coeff err {worst:.2e}")

    # norm ground truths
    rule0 = build_quadrature(MeasureSpec.area(0.0), 2)
    rule1 = build_quadrature(MeasureSpec.area(1.0), 2)
    z1 = TaylorFunction([0, 1])
    checks = [
        abs(bergman_norm(z1, 2, 0.0, rule0) - 2**-0.5),
        abs(bergman_norm(z1, 2, 1.0, rule1) - 3**-0.5),
        abs(hardy_norm(TaylorFunction([1, 1]), 2) - 2**0.5),
        abs(bloch_norm(TaylorFunction([1])) - 1.0),
        abs(hardy_norm(TaylorFunction([1]), 2) - 1.0),
        abs(bergman_norm(TaylorFunction([1]), 2, 0.0, rule0) - 1.0),
    ]
    record("norm_ground_truth", max(checks) <= tol["norm_ground_truth"],
           f"max dev {max(checks):.2e}")
    bdev = abs(bloch_seminorm(monomial(2)) - 4.0 / (3.0 * 3**0.5))
    record("bloch_ground_truth", bdev <= tol["bloch_ground_truth"], f"dev {bdev:.2e}")

    # Bloch invariance under composition
    worst = 0.0
    for _ in range(10):
        d = int(rng.integers(0, 17))
        c = (rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)) / (np.arange(d + 1) + 1)
        f = TaylorFunction(c)
        wv = 0.7 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        s1 = bloch_seminorm(f)
        s2 = bloch_seminorm(compose(f, wv))
        worst = max(worst, abs(s1 - s2) / (1.0 + s1))
    record("bloch_invariance", worst <= tol["bloch_invariance"], f"max rel dev {worst:.2e}")

    # bound consistency on two closed-form configurations
    H5 = make_operator(KernelSpec.constant(1.0), MeasureSpec.discrete([0.5], [1.0]))
    for space, closed in ((SpaceSpec.bloch(), 2 + 0.5 * np.log(3.0)),
                          (SpaceSpec.hardy(2.0), 3**0.5)):
        rep = check_bound(H5, space, trials=trials, seed=seed)
        ok = rep.passed and abs(rep.theoretical - closed) <= 1e-10 and \
            rep.empirical <= rep.theoretical * (1 + tol["bound_consistency"])
        record(f"bound_consistency_{space.kind}", ok,
               f"empirical {rep.empirical:.4f} <= bound {rep.theoretical:.4f}")

    # coefficient duality, single atom
    w0 = 0.4 + 0.3j
    Hat = make_operator(KernelSpec.constant(1.0), MeasureSpec.discrete([w0], [1.0]))
    seq = coefficient_sequence(Hat, TaylorFunction([0, 1]), 16)
    lin = linear_coefficient_sequence(Hat, 16)
    dev = float(np.abs(seq.values - lin.values).max())
    record("coefficient_duality", dev <= tol["coefficient_duality"], f"max dev {dev:.2e}")

    # identity sweep through the reflection atom: exact fixed point
    H0 = make_operator(KernelSpec.constant(1.0), MeasureSpec.discrete([0.0], [1.0]))
    f = TaylorFunction((rng.standard_normal(9) + 1j * rng.standard_normal(9)) / (np.arange(9) + 1))
    err = float(np.abs(H0.apply_epsilon(0.25, f).coeffs[:9] - f.coeffs).max())
    record("identity_sweep", err <= tol["identity_sweep"], f"atom-0 exactness {err:.2e}")

    return results


def cmd_verify(config: dict, level: int, seed: int) -> tuple[list[str], int]:
    _check_keys(config, _COMMON_KEYS | {"tolerances", "trials"}, "config")
    results = _verify_suite(config, level, seed)
    lines = _header("verify", config, level, seed)
    lines.append("check,pass,detail")
    ok = True
    for name, passed, detail in results:
        ok = ok and passed
        lines.append(f"{name},{int(passed)},{detail}")
    return lines, EXIT_OK if ok else EXIT_VERIFY_FAILED


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hausdisc",
        description="Averaging operators over Moebius composition on the unit disc",
    )
    parser.add_argument("command",
                        choices=["apply", "norms", "bounds", "coeffs", "approx",
                                 "verify"])
    parser.add_argument("--config", help="path to the JSON run configuration")
    parser.add_argument("--out", help="output CSV path (default stdout)")
    parser.add_argument("--level", type=int, help="quadrature refinement level")
    parser.add_argument("--seed", type=int, help="random seed")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = {}
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                config = json.load(fh)
        except OSError as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except json.JSONDecodeError as exc:
            print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    if not isinstance(config, dict):
        print("error: config root must be a JSON object", file=sys.stderr)
        return EXIT_CONFIG

    level = args.level if args.level is not None else int(config.get("level", 1))
    seed = args.seed if args.seed is not None else int(config.get("seed", 1))
    out_path = args.out or config.get("out")

    try:
        code = EXIT_OK
        if args.command == "apply":
            lines = cmd_apply(config, level, seed)
        elif args.command == "norms":
            lines = cmd_norms(config, level, seed)
        elif args.command == "bounds":
            lines = cmd_bounds(config, level, seed)
        elif args.command == "coeffs":
            lines = cmd_coeffs(config, level, seed)
        elif args.command == "approx":
            lines = cmd_approx(config, level, seed)
        else:
            lines, code = cmd_verify(config, level, seed)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (KeyError, TypeError) as exc:
        print(f"error: malformed config ({exc})", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE

    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
