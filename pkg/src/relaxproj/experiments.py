"""Experiment configs and their execution.

A config is a JSON document::

    {
      "name": "...",            # output directory name
      "kind": "orbit" | "scalar" | "faces_check" | "split_check"
              | "divergence_epiexp",
      "comment": "...",         # what the experiment demonstrates
      "parameters": { ... }     # kind-specific, see the _run_* functions
    }

Execution writes, per experiment, a machine-readable ``report.json``, a
plain-text ``report.txt``, the trajectory or summary CSV, and two-column
plot-data series. CSV floats carry 17 significant digits; re-running a
config with the same seeds reproduces every CSV byte for byte.
"""

import json
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import corpus, schedules
from .decomposition import (common_kernel, complement_coordinates, lift,
                            project_kernel, split)
from .errors import ConfigError
from .faces import face_of_projection
from .geometry import AffineSubspace, Polyhedron
from .iteration import (Collection, Cyclic, Farthest, RandomUniform, Scripted,
                        boundedness_report, divergence_experiment_line_epiexp,
                        fejer_check, run)
from .projectors import EpiExp, project_polyhedron
from .scalar import (ScalarProblem, closed_form_even, iterate_scalar,
                     regime_classify, summability_relation, write_csv)

_FMT = "{:.17g}".format

KINDS = ("orbit", "scalar", "faces_check", "split_check", "divergence_epiexp")


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    kind: str
    parameters: dict
    comment: str = ""


def bundled_names():
    """Names of the configs shipped with the package."""
    root = resources.files("relaxproj").joinpath("configs")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_config(source):
    """Load a config from a file path or a bundled name."""
    path = Path(source)
    if path.suffix == ".json" and path.exists():
        raw = path.read_text()
    else:
        res = resources.files("relaxproj").joinpath(f"configs/{source}.json")
        if not res.is_file():
            raise ConfigError(
                f"{source!r} is neither a config file nor a bundled name "
                f"(bundled: {', '.join(bundled_names())})")
        raw = res.read_text()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(doc)


def parse_config(doc):
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    for key in ("name", "kind", "parameters"):
        if key not in doc:
            raise ConfigError(f"config is missing the {key!r} field")
    if doc["kind"] not in KINDS:
        raise ConfigError(f"unknown kind {doc['kind']!r}; expected one of {KINDS}")
    if not isinstance(doc["parameters"], dict):
        raise ConfigError("'parameters' must be an object")
    return ExperimentConfig(str(doc["name"]), doc["kind"], doc["parameters"],
                            str(doc.get("comment", "")))


def build_set(spec):
    """Construct a projectable set from its JSON description."""
    try:
        kind = spec["type"]
        if kind == "polyhedron":
            return Polyhedron(np.array(spec["A"], dtype=float),
                              np.array(spec["b"], dtype=float),
                              ambient_dim=spec.get("ambient_dim"))
        if kind == "box":
            return corpus.box(spec["lo"], spec["hi"])
        if kind == "simplex":
            return corpus.simplex(spec["dim"], spec.get("scale", 1.0))
        if kind == "affine":
            return AffineSubspace.span(np.array(spec["base"], dtype=float),
                                       [np.array(v, dtype=float)
                                        for v in spec.get("directions", [])])
        if kind == "epi_exp":
            return EpiExp()
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad set spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown set type {spec.get('type')!r}")


def build_policy(spec):
    try:
        kind = spec["kind"]
        if kind == "cyclic":
            return Cyclic()
        if kind == "random_uniform":
            return RandomUniform(spec["seed"])
        if kind == "farthest":
            return Farthest()
        if kind == "scripted":
            return Scripted(spec["indices"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad policy spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown policy kind {spec.get('kind')!r}")


def build_schedule(spec):
    try:
        return schedules.from_config(spec)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad schedule spec {spec!r}: {exc}") from exc


def execute(cfg, out_dir, seed_override=None, steps_override=None):
    """Run a parsed config; writes artifacts under ``out_dir/<name>/`` and
    returns the report dictionary."""
    out = Path(out_dir) / cfg.name
    out.mkdir(parents=True, exist_ok=True)
    params = dict(cfg.parameters)
    if steps_override is not None:
        params["n_steps"] = int(steps_override)
    if seed_override is not None:
        params["seed"] = int(seed_override)
    started = time.perf_counter()
    runner = {
        "orbit": _run_orbit,
        "scalar": _run_scalar,
        "faces_check": _run_faces_check,
        "split_check": _run_split_check,
        "divergence_epiexp": _run_divergence,
    }[cfg.kind]
    report = runner(params, out)
    report["name"] = cfg.name
    report["kind"] = cfg.kind
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    elapsed = time.perf_counter() - started
    lines = [f"experiment: {cfg.name} ({cfg.kind})"]
    if cfg.comment:
        lines.append(cfg.comment)
    lines.extend(_summary_lines(report))
    lines.append(f"wall time: {elapsed:.2f}s")
    (out / "report.txt").write_text("\n".join(lines) + "\n")
    return report


def _summary_lines(report, prefix=""):
    lines = []
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            lines.append(f"{prefix}{key}:")
            lines.extend(_summary_lines(value, prefix + "  "))
        else:
            lines.append(f"{prefix}{key}: {value}")
    return lines


def _write_series(path, header, rows):
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_FMT(v) if isinstance(v, float) else str(v)
                              for v in row) + "\n")


def _require(params, key, kind):
    if key not in params:
        raise ConfigError(f"{kind} config needs parameter {key!r}")
    return params[key]


# ---------------------------------------------------------------- orbit


def _run_orbit(params, out):
    if "stress" in params:
        return _run_orbit_stress(params["stress"], out)
    sets = [build_set(s) for s in _require(params, "sets", "orbit")]
    collection = Collection(tuple(sets))
    policy = build_policy(_require(params, "policy", "orbit"))
    schedule = build_schedule(_require(params, "schedule", "orbit"))
    x0 = np.array(_require(params, "x0", "orbit"), dtype=float)
    n_steps = int(_require(params, "n_steps", "orbit"))
    window = int(params.get("window", max(1, n_steps // 10)))
    T = run(collection, policy, schedule, x0, n_steps)
    with open(out / "trajectory.csv", "w") as fh:
        T.write_csv(fh)
    _write_series(out / "norms.csv", "n,norm",
                  [(n, float(T.norms[n])) for n in range(len(T.norms))])
    bounded = boundedness_report(T, window)
    fejer = fejer_check(T, collection)
    return {
        "n_steps": n_steps,
        "verdict": bounded.verdict,
        "sup_norm": bounded.sup_norm,
        "sup_trailing_window": bounded.sup_trailing_window,
        "fejer": {"status": fejer.status,
                  "n_violations": fejer.n_violations,
                  "max_violation": fejer.max_violation},
        "diagnostics": T.diagnostics,
    }


def _run_orbit_stress(stress, out):
    n_runs = int(stress.get("n_runs", 50))
    seed = int(stress.get("seed", 7))
    n_steps = int(stress.get("n_steps", 10_000))
    window = int(stress.get("window", 500))
    instances = corpus.stress_instances(
        seed, n_runs,
        max_polyhedra=int(stress.get("max_polyhedra", 5)),
        max_dim=int(stress.get("max_dim", 6)),
        max_constraints=int(stress.get("max_constraints", 8)),
        lambda_max=float(stress.get("lambda_max", 1.9)))
    rows = []
    verdicts = {}
    sups = {}
    for inst in instances:
        T = run(inst.collection, inst.policy, inst.schedule, inst.x0, n_steps)
        rep = boundedness_report(T, window)
        rows.append((inst.index, inst.collection.ambient_dim,
                     len(inst.collection), inst.policy.name,
                     float(rep.sup_norm), rep.verdict))
        verdicts[rep.verdict] = verdicts.get(rep.verdict, 0) + 1
        sups[str(inst.index)] = float(rep.sup_norm)
    _write_series(out / "summary.csv",
                  "run,dim,n_sets,policy,sup_norm,verdict", rows)
    return {
        "n_runs": n_runs,
        "n_steps": n_steps,
        "verdicts": verdicts,
        "all_stable": verdicts.get("STABLE", 0) == n_runs,
        "sup_norms": sups,
    }


# ---------------------------------------------------------------- scalar


def _run_scalar(params, out):
    a = float(_require(params, "a", "scalar"))
    b = float(_require(params, "b", "scalar"))
    x0 = float(_require(params, "x0", "scalar"))
    P = ScalarProblem(a, b, x0)
    schedule = build_schedule(_require(params, "schedule", "scalar"))
    n_steps = int(_require(params, "n_steps", "scalar"))
    with open(out / "scalar.csv", "w") as fh:
        write_csv(P, schedule, n_steps, fh)
    xs = iterate_scalar(P, schedule, n_steps)
    _write_series(out / "magnitude.csv", "n,abs_x",
                  [(n, float(abs(xs[n]))) for n in range(len(xs))])
    regime = regime_classify(P, schedule, n_steps)
    max_rel = 0.0
    for n in range(min(n_steps // 2, 1000) + 1):
        cf = closed_form_even(P, schedule, n)
        max_rel = max(max_rel, abs(cf - xs[2 * n]) / max(1.0, abs(xs[2 * n])))
    report = {
        "n_steps": n_steps,
        "schedule": schedule.name,
        "regime": regime.regime.value,
        "even_limit_estimate": regime.even_limit_estimate,
        "odd_limit_estimate": regime.odd_limit_estimate,
        "trail_min_abs": regime.trail_min,
        "trail_max_abs": regime.trail_max,
        "closed_form_max_rel_dev": max_rel,
    }
    eps = 2.0 - schedule.values(2 * (min(n_steps, 2000) // 2))
    if np.all((eps >= 0.0) & (eps < 1.0)):
        chain = summability_relation(eps)
        report["summability"] = {
            "chain_holds": chain.chain_holds,
            "sum_eps": chain.sum_eps,
            "sum_delta": chain.sum_delta,
            "sum_eps_minus_half_squares": chain.sum_eps_minus_half_squares,
            "half_sum_eps": chain.half_sum_eps,
        }
    else:
        report["summability"] = "not applicable (defects leave [0,1[)"
    return report


# ---------------------------------------------------------------- faces


def _corpus_from(params):
    spec = params.get("corpus", {})
    return corpus.standard_corpus(
        seed=int(spec.get("seed", 20260810)),
        count=int(spec.get("count", 22)),
        max_dim=int(spec.get("max_dim", 6)),
        max_constraints=int(spec.get("max_constraints", 10)))


def _run_faces_check(params, out):
    polyhedra = _corpus_from(params)
    n_points = int(params.get("points_per_polyhedron", 100))
    scale = float(params.get("point_scale", 3.0))
    rng = np.random.default_rng(int(params.get("seed", 314159)))
    tolerance = float(params.get("tolerance", 1e-8))
    max_gap = 0.0
    rows = []
    for idx, C in enumerate(polyhedra):
        worst = 0.0
        for _ in range(n_points):
            x = rng.normal(size=C.ambient_dim) * scale
            face, p = face_of_projection(C, x)
            from .projectors import project_affine

            gap = float(np.linalg.norm(project_affine(face.hull, x) - p))
            worst = max(worst, gap)
        rows.append((idx, C.ambient_dim, C.n_constraints, worst))
        max_gap = max(max_gap, worst)
    _write_series(out / "summary.csv", "polyhedron,dim,n_constraints,max_gap", rows)
    return {
        "n_polyhedra": len(polyhedra),
        "points_per_polyhedron": n_points,
        "max_gap": max_gap,
        "tolerance": tolerance,
        "within_tolerance": max_gap <= tolerance,
    }


# ---------------------------------------------------------------- split


def _run_split_check(params, out):
    polyhedra = _corpus_from(params)
    big_dim = int(params.get("big_dim", 40))
    n_points = int(params.get("points_per_polyhedron", 25))
    rng = np.random.default_rng(int(params.get("seed", 271828)))
    tolerance = float(params.get("pointwise_tolerance", 1e-8))
    max_gap = 0.0
    rows = []
    embedded = []
    for idx, poly in enumerate(polyhedra):
        C, _ = corpus.embed_polyhedron(rng, poly, big_dim)
        embedded.append(C)
        S = split(C)
        worst = 0.0
        for _ in range(n_points):
            x = rng.normal(size=big_dim) * 2.0
            direct, _ = project_polyhedron(C, x)
            from .decomposition import project_via_split

            worst = max(worst, float(np.linalg.norm(project_via_split(S, x) - direct)))
        rows.append((idx, S.D.ambient_dim, worst))
        max_gap = max(max_gap, worst)
    _write_series(out / "summary.csv", "polyhedron,complement_dim,max_gap", rows)

    orbit = params.get("orbit", {})
    n_steps = int(orbit.get("n_steps", 200))
    orbit_tol = float(orbit.get("tolerance", 1e-7))
    members = embedded[: int(orbit.get("n_polyhedra", 3))]
    K = common_kernel(members)
    splits = [split(C, K) for C in members]
    C_col = Collection(tuple(members))
    D_col = Collection(tuple(S.D for S in splits))
    x0 = rng.normal(size=big_dim) * 2.0
    pseed = int(orbit.get("policy_seed", 5))
    sseed = int(orbit.get("schedule_seed", 6))
    lam_max = float(orbit.get("lambda_max", 1.8))
    T_full = run(C_col, RandomUniform(pseed),
                 schedules.random_uniform(lam_max, seed=sseed), x0, n_steps)
    k0 = project_kernel(splits[0], x0)
    y0 = complement_coordinates(splits[0], x0)
    T_small = run(D_col, RandomUniform(pseed),
                  schedules.random_uniform(lam_max, seed=sseed), y0, n_steps)
    orbit_gap = 0.0
    for n in range(n_steps + 1):
        recomposed = k0 + lift(splits[0], T_small.iterates[n])
        orbit_gap = max(orbit_gap, float(np.linalg.norm(
            recomposed - T_full.iterates[n])))
    return {
        "big_dim": big_dim,
        "n_polyhedra": len(polyhedra),
        "max_pointwise_gap": max_gap,
        "pointwise_tolerance": tolerance,
        "pointwise_ok": max_gap <= tolerance,
        "orbit_steps": n_steps,
        "orbit_max_gap": orbit_gap,
        "orbit_tolerance": orbit_tol,
        "orbit_ok": orbit_gap <= orbit_tol,
    }


# ---------------------------------------------------------------- divergence


def _run_divergence(params, out):
    x0 = np.array(params.get("x0", [0.0, 0.0]), dtype=float)
    n_steps = int(params.get("n_steps", 500))
    window = int(params.get("window", 10))
    T = divergence_experiment_line_epiexp(x0, n_steps)
    with open(out / "trajectory.csv", "w") as fh:
        T.write_csv(fh)
    _write_series(out / "norms.csv", "n,norm",
                  [(n, float(T.norms[n])) for n in range(len(T.norms))])
    _write_series(out / "first_coordinate.csv", "n,x_1",
                  [(n, float(T.iterates[n, 0])) for n in range(len(T.norms))])
    rep = boundedness_report(T, window)
    first = T.iterates[:, 0]
    burn = min(10, n_steps)
    per_cycle_decreasing = bool(np.all(first[burn + 2::2] < first[burn:-2:2])) \
        if n_steps >= burn + 2 else False
    ratio = float(T.norms[n_steps] / T.norms[min(50, n_steps)]) \
        if T.norms[min(50, n_steps)] > 0 else float("inf")
    return {
        "n_steps": n_steps,
        "verdict": rep.verdict,
        "sup_norm": rep.sup_norm,
        "final_norm": float(T.norms[n_steps]),
        "norm_ratio_final_over_50": ratio,
        "first_coordinate_final": float(first[n_steps]),
        "first_coordinate_decreasing_per_cycle": per_cycle_decreasing,
    }
