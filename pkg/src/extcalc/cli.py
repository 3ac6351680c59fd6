"""Command-line driver: run verification suites and emit JSON reports.

Exit codes: 0 when every computed residual is within tolerance, 1 on a
numerical failure, 2 on usage or configuration errors.  Reports are a single
canonical JSON document on stdout (or --out FILE); short human-readable
summaries go to stderr.  Identical configuration and seed always produce
byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .algebra import (
    IDENTITY_DIM_CAP,
    Multivector,
    SpacetimeSignature,
    dot as algebra_dot,
    merge_with_sign,
    verify_identities,
)
from .energy import (
    EnergyMomentumReport,
    GaugeViolation,
    flux_T_direct,
    flux_T_fourier,
    lorentz_force,
    stress_tensor_def,
    stress_tensor_explicit,
    synthesize_on_cone_potential,
    conservation_residual,
    trace,
    trace_formula,
)
from .fields import (
    AnalyticField,
    GridField,
    Mode,
    exterior_derivative_field,
    interior_derivative,
)
from .integrate import HypersurfaceBox
from .maxwell import (
    MINKOWSKI,
    ClassicalFields,
    MaxwellSystem,
    classical_pack,
    classical_vector_residuals,
    fourier_maxwell_residuals,
    integral_maxwell_check,
    maxwell_residuals,
    residuals_to_classical,
    transverse_gauge_residuals,
)
from .serialize import (
    Scenario,
    ScenarioError,
    bitensor_to_json,
    canonical_dumps,
    multivector_to_json,
    scenario_from_json,
    signature_to_json,
)

EXIT_PASS = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


def _emit(report: dict, out_path: str | None, summary: str) -> None:
    text = canonical_dumps(report)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)
    print(summary, file=sys.stderr)


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as exc:
        raise ScenarioError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"config is not valid JSON: {exc}") from exc


def _scenario(args) -> Scenario:
    if not args.config:
        raise ScenarioError("--config PATH is required for this command")
    scenario = scenario_from_json(_load_config(args.config))
    if args.seed is not None:
        scenario = Scenario(**{**scenario.__dict__, "seed": args.seed})
    if args.tol is not None:
        scenario = Scenario(**{**scenario.__dict__, "tol": args.tol})
    return scenario


def _sample_points(rng: np.random.Generator, dim: int, count: int) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, size=(count, dim))


def _scenario_points(scenario: Scenario, rng: np.random.Generator) -> np.ndarray:
    """Sample points for residual evaluation.

    Analytic fields are sampled uniformly; grid-backed fields are sampled on
    interior lattice sites so that central differences stay in range.
    """
    field = scenario.F
    if isinstance(field, GridField):
        shape = field.values.shape[:-1]
        if any(s < 3 for s in shape):
            raise ScenarioError("grid fields need at least 3 sites per axis for derivatives")
        sites = np.stack([rng.integers(1, s - 1, size=scenario.sample_points) for s in shape],
                         axis=1)
        return field.origin + sites * field.spacing
    return _sample_points(rng, scenario.signature.dim, scenario.sample_points)


# ---------------------------------------------------------------------------
# verify-identities
# ---------------------------------------------------------------------------

def cmd_verify_identities(args) -> int:
    # default run sweeps every (k, n) with k + n <= the dimension cap; the
    # axis flags restrict the sweep and may not jointly exceed the cap
    if args.kmax is not None and args.nmax is not None \
            and args.kmax + args.nmax > IDENTITY_DIM_CAP:
        print(f"error: kmax + nmax = {args.kmax + args.nmax} exceeds the dimension cap "
              f"{IDENTITY_DIM_CAP}", file=sys.stderr)
        return EXIT_USAGE
    kmax = args.kmax if args.kmax is not None else IDENTITY_DIM_CAP
    nmax = args.nmax if args.nmax is not None else IDENTITY_DIM_CAP
    if kmax < 0 or nmax < 0 or kmax + nmax < 1:
        print(f"error: need kmax + nmax >= 1, got ({kmax}, {nmax})", file=sys.stderr)
        return EXIT_USAGE
    tol = args.tol if args.tol is not None else 0.0

    wedge_fn = None
    if args.self_test_corruption:
        def wedge_fn(I, J):
            merged, sign = merge_with_sign(I, J)
            if sign and len(I) == 1 and len(J) == 1:
                sign = -sign
            return merged, sign

    entries = []
    worst = 0.0
    for k in range(kmax + 1):
        for n in range(nmax + 1):
            if not 1 <= k + n <= IDENTITY_DIM_CAP:
                continue
            report = verify_identities(SpacetimeSignature(k, n), tol=tol, wedge_sign_fn=wedge_fn)
            entries.append({
                "k": k,
                "n": n,
                "residuals": report.residuals,
                "checks": report.checks,
                "passed": report.passed,
            })
            worst = max(worst, report.max_residual)
    passed = all(e["passed"] for e in entries)
    report = {
        "command": "verify-identities",
        "kmax": kmax,
        "nmax": nmax,
        "tol": tol,
        "signatures": entries,
        "max_residual": worst,
        "passed": passed,
    }
    _emit(report, args.out,
          f"verify-identities: {'PASS' if passed else 'FAIL'} over {len(entries)} signatures, "
          f"max residual {worst:g}")
    return EXIT_PASS if passed else EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# maxwell-check
# ---------------------------------------------------------------------------

def _check_differential(system: MaxwellSystem, points: np.ndarray) -> dict:
    inhom_max = hom_max = charge_max = 0.0
    for x in points:
        inhom, hom = maxwell_residuals(system, x)
        inhom_max = max(inhom_max, inhom.max_abs())
        hom_max = max(hom_max, hom.max_abs())
        charge_max = max(charge_max, interior_derivative(system.J, x).max_abs())
    return {"inhom_max": inhom_max, "hom_max": hom_max, "charge_conservation_max": charge_max}


def _random_box(sig: SpacetimeSignature, free_axes, rng: np.random.Generator) -> HypersurfaceBox:
    centers = rng.uniform(-0.3, 0.3, sig.dim)
    halves = rng.uniform(0.15, 0.35, sig.dim)
    intervals = {a: (float(centers[a] - halves[a]), float(centers[a] + halves[a])) for a in free_axes}
    fixed = {a: float(centers[a]) for a in sig.axes() if a not in intervals}
    return HypersurfaceBox(sig, intervals=intervals, fixed=fixed)


def _check_integral(system: MaxwellSystem, rng: np.random.Generator, quad_points: int) -> dict:
    sig = system.signature
    out = {}
    circ_dim = system.r + 1
    if circ_dim <= sig.dim:
        box = _random_box(sig, list(rng.permutation(sig.dim))[:circ_dim], rng)
        circ, _ = integral_maxwell_check(system, box, None, points=quad_points)
        out["circulation_residual"] = circ
    flux_dim = sig.dim - system.r + 1
    if 1 <= flux_dim <= sig.dim:
        box = _random_box(sig, list(rng.permutation(sig.dim))[:flux_dim], rng)
        _, flx = integral_maxwell_check(system, None, box, points=quad_points)
        out["flux_residual"] = flx
    return out


def _check_fourier(system: MaxwellSystem) -> dict:
    modes = getattr(system.F, "modes", None)
    if modes is None:
        return {"skipped": "grid-backed fields have no mode data"}
    if any(getattr(system.J, "modes", ())):
        return {"skipped": "algebraic source-free check needs a source-free scenario"}
    inhom_max = hom_max = 0.0
    worst_null = 0.0
    for mode in modes:
        inhom, hom = fourier_maxwell_residuals(mode.xi, mode.amplitude)
        inhom_max = max(inhom_max, inhom.max_abs() / (2 * math.pi))
        hom_max = max(hom_max, hom.max_abs())
        xi = Multivector.vector(system.signature, mode.xi)
        if inhom.max_abs() < 1e-9 and hom.max_abs() < 1e-9:
            worst_null = max(worst_null, abs(algebra_dot(xi, xi)) * mode.amplitude.max_abs())
    return {"inhom_max": inhom_max, "hom_max": hom_max, "null_support_violation": worst_null}


def _check_gauge(scenario: Scenario, system: MaxwellSystem, points: np.ndarray) -> dict:
    if scenario.A is None:
        return {"skipped": "no potential in scenario"}
    lorenz_max = time_max = space_max = consistency_max = 0.0
    derived = exterior_derivative_field(scenario.A) if isinstance(scenario.A, AnalyticField) else None
    for x in points:
        lorenz_max = max(lorenz_max, interior_derivative(scenario.A, x).max_abs())
        t_res, s_res = transverse_gauge_residuals(scenario.A, x)
        time_max = max(time_max, t_res.max_abs())
        space_max = max(space_max, s_res.max_abs())
        if derived is not None:
            consistency_max = max(consistency_max,
                                  (derived.evaluate(x) - system.F.evaluate(x)).max_abs())
    return {"lorenz_max": lorenz_max, "transverse_time_max": time_max,
            "transverse_space_max": space_max, "potential_consistency_max": consistency_max}


def cmd_maxwell_check(args) -> int:
    scenario = _scenario(args)
    system = MaxwellSystem(scenario.signature, scenario.r, scenario.F, scenario.J)
    rng = np.random.default_rng(scenario.seed)
    points = _scenario_points(scenario, rng)
    quad_points = args.points if args.points is not None else 8

    checks: dict = {}
    if "differential" in scenario.checks:
        checks["differential"] = _check_differential(system, points)
    if "integral" in scenario.checks:
        checks["integral"] = _check_integral(system, rng, quad_points)
    if "fourier" in scenario.checks:
        checks["fourier"] = _check_fourier(system)
    if "gauge" in scenario.checks:
        checks["gauge"] = _check_gauge(scenario, system, points)

    residuals = [value for block in checks.values() for key, value in block.items()
                 if isinstance(value, (int, float))]
    worst = max(residuals, default=0.0)
    passed = worst <= scenario.tol
    report = {
        "command": "maxwell-check",
        "signature": signature_to_json(scenario.signature),
        "r": scenario.r,
        "seed": scenario.seed,
        "tol": scenario.tol,
        "sample_points": scenario.sample_points,
        "checks": checks,
        "max_residual": worst,
        "passed": passed,
    }
    _emit(report, args.out,
          f"maxwell-check: {'PASS' if passed else 'FAIL'}, max residual {worst:g} "
          f"(tol {scenario.tol:g})")
    return EXIT_PASS if passed else EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# stress-energy
# ---------------------------------------------------------------------------

def cmd_stress_energy(args) -> int:
    scenario = _scenario(args)
    is_complex = getattr(scenario.F, "is_complex", lambda: False)
    if is_complex():
        raise ScenarioError(
            "stress-energy checks need real fields (cosine modes); quadratic expressions "
            "in complex-exponential fields are not the physical quantities")
    system = MaxwellSystem(scenario.signature, scenario.r, scenario.F, scenario.J)
    rng = np.random.default_rng(scenario.seed)
    points = _scenario_points(scenario, rng)

    route_max = 0.0
    trace_max = 0.0
    conservation_max = 0.0
    for x in points:
        value = system.F.evaluate(x)
        t_def = stress_tensor_def(value)
        t_exp = stress_tensor_explicit(value)
        route_max = max(route_max, max((abs(t_def.get(i, j) - t_exp.get(i, j))
                                        for i in scenario.signature.axes()
                                        for j in scenario.signature.axes()), default=0.0))
        trace_max = max(trace_max, abs(trace(t_exp) - trace_formula(value)))
        conservation_max = max(conservation_max,
                               conservation_residual(system.F, system.J, x).max_abs())

    x0 = points[0]
    value0 = system.F.evaluate(x0)
    tensor0 = stress_tensor_explicit(value0)
    summary = EnergyMomentumReport(
        force=lorentz_force(value0, system.J.evaluate(x0)),
        tensor=tensor0,
        trace=float(trace(tensor0)),
        trace_formula=float(trace_formula(value0)),
        conservation_residual_max=conservation_max,
        provenance={"point": [float(v) for v in x0], "aggregate_points": len(points)},
    )
    worst = max(route_max, trace_max, conservation_max)
    passed = worst <= scenario.tol
    report = {
        "command": "stress-energy",
        "signature": signature_to_json(scenario.signature),
        "r": scenario.r,
        "seed": scenario.seed,
        "tol": scenario.tol,
        "point": summary.provenance["point"],
        "T": bitensor_to_json(summary.tensor),
        "trace": summary.trace,
        "trace_formula": summary.trace_formula,
        "force": multivector_to_json(summary.force),
        "conservation_residual_max": summary.conservation_residual_max,
        "route_max_diff": route_max,
        "trace_max_diff": trace_max,
        "flux_direct": None,
        "flux_fourier": None,
        "flux_rel_err": None,
        "max_residual": worst,
        "passed": passed,
    }
    _emit(report, args.out,
          f"stress-energy: {'PASS' if passed else 'FAIL'}, max residual {worst:g} "
          f"(tol {scenario.tol:g})")
    return EXIT_PASS if passed else EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# flux-compare
# ---------------------------------------------------------------------------

def _bump_factory(spec: dict, sig: SpacetimeSignature, axis: int, r: int):
    kind = spec.get("kind", "scalar")
    width = float(spec["width"])
    scale = float(spec.get("scale", 1.0))
    center = {int(a): float(c) for a, c in spec["center"].items()}

    def bump(xi_plus: Multivector) -> float:
        q = 0.0
        for a, c in center.items():
            q += (xi_plus.coeff((a,)) - c) ** 2
        return scale * math.exp(-q / (2.0 * width ** 2))

    if kind == "scalar":
        if r != 1:
            raise ScenarioError("scalar spectrum requires field grade 1")

        def a_hat(xi_plus):
            return Multivector.scalar(sig, bump(xi_plus))

        return a_hat
    if kind == "spatial-transverse":
        if r != 2 or sig.k != 1 or sig.n != 2 or axis != 0:
            raise ScenarioError(
                "spatial-transverse spectrum requires grade 2 on a (1,2) space-time with axis 0")

        def a_hat(xi_plus):
            h = bump(xi_plus)
            xi1 = xi_plus.coeff((1,))
            xi2 = xi_plus.coeff((2,))
            return Multivector(sig, 1, {(1,): -xi2 * h, (2,): xi1 * h})

        return a_hat
    raise ScenarioError(f"unknown spectrum kind {kind!r}")


def cmd_flux_compare(args) -> int:
    if not args.config:
        raise ScenarioError("--config PATH is required for this command")
    data = _load_config(args.config)
    try:
        sig = SpacetimeSignature(int(data["signature"]["k"]), int(data["signature"]["n"]))
        r = int(data["r"])
        axis = int(data["axis"])
        coordinate = float(data.get("coordinate", 0.0))
        region = {int(a): (float(lo), float(hi)) for a, (lo, hi) in data["region"].items()}
        slice_bounds = {int(a): (float(lo), float(hi)) for a, (lo, hi) in data["slice_bounds"].items()}
        freq_points = int(data.get("freq_points", 24))
        freq_panels = int(data.get("freq_panels", 2))
        slice_points = int(data.get("slice_points", 8))
        slice_panels = int(data.get("slice_panels", 16))
        tol = args.tol if args.tol is not None else float(data.get("tol", 0.01))
        a_hat = _bump_factory(data["spectrum"], sig, axis, r)
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad flux-compare config: {exc}") from exc

    fourier = flux_T_fourier(a_hat, axis, region, sig, grade=r,
                             points=freq_points, panels=freq_panels)
    potential = synthesize_on_cone_potential(a_hat, axis, region, sig, grade=r,
                                             points=freq_points, panels=freq_panels)
    f_field = exterior_derivative_field(potential)
    direct = flux_T_direct(f_field, axis, coordinate, bounds=slice_bounds,
                           points=slice_points, panels=slice_panels)
    scale = fourier.max_abs()
    rel_err = (direct - fourier).max_abs() / scale if scale > 0 else direct.max_abs()
    # pointwise Lorenz residual of the synthesized potential, for the record
    rng = np.random.default_rng(0)
    gauge_max = max((interior_derivative(potential, x).max_abs()
                     for x in rng.uniform(-1.0, 1.0, size=(10, sig.dim))), default=0.0)
    passed = rel_err <= tol
    report = {
        "command": "flux-compare",
        "signature": signature_to_json(sig),
        "r": r,
        "axis": axis,
        "coordinate": coordinate,
        "tol": tol,
        "synth_modes": len(potential.modes),
        "T": None,
        "trace": None,
        "trace_formula": None,
        "force": None,
        "conservation_residual_max": None,
        "flux_direct": multivector_to_json(direct),
        "flux_fourier": multivector_to_json(fourier),
        "flux_rel_err": rel_err,
        "lorenz_residual_max": gauge_max,
        "passed": passed,
    }
    _emit(report, args.out,
          f"flux-compare: {'PASS' if passed else 'FAIL'}, relative error {rel_err:.3e} "
          f"(tol {tol:g})")
    return EXIT_PASS if passed else EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# classical
# ---------------------------------------------------------------------------

def _random_spatial_field(rng: np.random.Generator, grade: int = 1, nmodes: int = 2) -> AnalyticField:
    modes = []
    for _ in range(nmodes):
        if grade == 0:
            amp = Multivector.scalar(MINKOWSKI, float(rng.normal()))
        else:
            amp = Multivector(MINKOWSKI, 1, {(i,): float(rng.normal()) for i in (1, 2, 3)})
        modes.append(Mode(amplitude=amp, xi=tuple(rng.uniform(-0.7, 0.7, 4)),
                          phase=float(rng.uniform(0, 2 * math.pi))))
    return AnalyticField(MINKOWSKI, grade, modes)


def cmd_classical(args) -> int:
    seed = args.seed if args.seed is not None else 0
    tol = args.tol if args.tol is not None else 1e-9
    configs = args.configs
    samples = args.samples
    rng = np.random.default_rng(seed)

    agreement_max = 0.0
    first_sample = None
    for _ in range(configs):
        cf = ClassicalFields(E=_random_spatial_field(rng), B=_random_spatial_field(rng),
                             rho=_random_spatial_field(rng, grade=0), j=_random_spatial_field(rng))
        system = classical_pack(cf)
        for x in _sample_points(rng, 4, samples):
            inhom, hom = maxwell_residuals(system, x)
            got = residuals_to_classical(inhom, hom)
            want = classical_vector_residuals(cf, x)
            diffs = [abs(got["gauss"] - want["gauss"]), abs(got["monopole"] - want["monopole"])]
            diffs.extend(np.abs(got["faraday"] - want["faraday"]))
            diffs.extend(np.abs(got["ampere"] - want["ampere"]))
            agreement_max = max(agreement_max, float(max(diffs)))
            if first_sample is None:
                first_sample = {
                    "point": [float(v) for v in x],
                    "vector_form": {
                        "gauss": float(want["gauss"]),
                        "faraday": [float(v) for v in want["faraday"]],
                        "monopole": float(want["monopole"]),
                        "ampere": [float(v) for v in want["ampere"]],
                    },
                    "multivector_form": {
                        "gauss": float(got["gauss"]),
                        "faraday": [float(v) for v in got["faraday"]],
                        "monopole": float(got["monopole"]),
                        "ampere": [float(v) for v in got["ampere"]],
                    },
                }

    # vacuum plane wave: both differential residuals vanish identically
    e_amp = Multivector.blade(MINKOWSKI, (1,))
    b_amp = Multivector.blade(MINKOWSKI, (2,))
    xi = (1.0, 0.0, 0.0, 1.0)
    vacuum = classical_pack(ClassicalFields(
        E=AnalyticField(MINKOWSKI, 1, [Mode(amplitude=e_amp, xi=xi)]),
        B=AnalyticField(MINKOWSKI, 1, [Mode(amplitude=b_amp, xi=xi)]),
        rho=AnalyticField(MINKOWSKI, 0), j=AnalyticField(MINKOWSKI, 1)))
    vacuum_max = 0.0
    for x in _sample_points(rng, 4, samples):
        inhom, hom = maxwell_residuals(vacuum, x)
        vacuum_max = max(vacuum_max, inhom.max_abs(), hom.max_abs())

    worst = max(agreement_max, vacuum_max)
    passed = worst <= tol
    report = {
        "command": "classical",
        "seed": seed,
        "tol": tol,
        "configs": configs,
        "samples": samples,
        "agreement_max": agreement_max,
        "vacuum_residual_max": vacuum_max,
        "first_sample": first_sample,
        "max_residual": worst,
        "passed": passed,
    }
    _emit(report, args.out,
          f"classical: {'PASS' if passed else 'FAIL'}, reduction agreement {agreement_max:g}, "
          f"vacuum residual {vacuum_max:g} (tol {tol:g})")
    return EXIT_PASS if passed else EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extcalc",
        description="Exterior-algebra Maxwell and stress-energy verification suites.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="scenario JSON path")
        p.add_argument("--out", help="write the JSON report to this file instead of stdout")
        p.add_argument("--tol", type=float, default=None, help="tolerance override")
        p.add_argument("--seed", type=int, default=None, help="random seed override")
        p.add_argument("--points", type=int, default=None, help="quadrature nodes per axis")

    p = sub.add_parser("verify-identities", help="exhaustive product-identity suite")
    common(p)
    p.add_argument("--kmax", type=int, default=None,
                   help="largest time-axis count (default: anything within the cap)")
    p.add_argument("--nmax", type=int, default=None,
                   help="largest space-axis count (default: anything within the cap)")
    p.add_argument("--self-test-corruption", action="store_true",
                   help="flip a product sign internally to confirm the suite detects corruption")
    p.set_defaults(func=cmd_verify_identities)

    p = sub.add_parser("maxwell-check", help="differential/integral/fourier/gauge residuals")
    common(p)
    p.set_defaults(func=cmd_maxwell_check)

    p = sub.add_parser("stress-energy", help="stress tensor routes, trace, conservation")
    common(p)
    p.set_defaults(func=cmd_stress_energy)

    p = sub.add_parser("flux-compare", help="direct versus frequency-domain tensor flux")
    common(p)
    p.set_defaults(func=cmd_flux_compare)

    p = sub.add_parser("classical", help="classical (E, B, rho, j) reduction demo")
    common(p)
    p.add_argument("--configs", type=int, default=3, help="random configurations to test")
    p.add_argument("--samples", type=int, default=5, help="sample points per configuration")
    p.set_defaults(func=cmd_classical)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, GaugeViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
