"""Command-line driver.

Subcommands ``check-algebra``, ``run-fusion``, ``run-braid`` and ``render``.
Every command writes a JSON report (sorted keys, floats at 15 significant
digits, no timestamps) so identical config and seed give identical bytes.
Exit status: 0 when every check passed, 1 when a check failed, 2 for
invalid configuration or clearance problems found before simulation.

Report schema (``schema_version`` 1)::

    {"schema": "mixpunct.report", "schema_version": 1, "command": str,
     "config": {...} | null, "checks": [{"name": str, "ok": bool, ...}],
     "passed": bool, ...command-specific fields}
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

import numpy as np

from . import anyon_algebra as aa
from .config import ConfigError, ExperimentConfig, load_config
from .defects import ClearanceError, DefectError
from .encoding_braiding import (
    braid,
    branch_signs,
    build_quartet,
    fusion_counts,
    logical_x,
    plan_braid,
    prepare_quartet,
    read_logical,
    sample_fusion,
)
from .pauli_gf2 import states_equal
from .render import Scene, render

__all__ = [
    "REPORT_SCHEMA_VERSION",
    "cmd_check_algebra",
    "cmd_run_fusion",
    "cmd_run_braid",
    "cmd_render",
    "dumps_report",
    "main",
]

REPORT_SCHEMA_VERSION = 1
SNAPSHOTS = ("empty", "fresh", "prepared", "post-braid")
TOL = aa.TOL


def _clean(obj):
    """JSON-ready copy: complex as [re, im], floats at 15 significant digits."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(float(obj.real)), _clean(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(f"{float(obj):.15g}")
        return 0.0 if x == 0 else x
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def dumps_report(report: dict) -> str:
    return json.dumps(_clean(report), sort_keys=True, indent=2) + "\n"


def _report(command: str, cfg: ExperimentConfig | None, checks: list[dict], **extra) -> dict:
    return {
        "schema": "mixpunct.report",
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": command,
        "config": cfg.to_dict() if cfg is not None else None,
        "checks": checks,
        "passed": all(c["ok"] for c in checks),
        **extra,
    }


def _check(name: str, ok, **detail) -> dict:
    return {"name": name, "ok": bool(ok), **detail}


# -- check-algebra -----------------------------------------------------------


def cmd_check_algebra(tamper: bool = False) -> tuple[dict, int]:
    """Anyon-model checks. ``tamper`` flips one sign of F as a negative control."""
    checks = [_check(f"toric {r['relation']}", r["ok"], value=r["value"], expected=r["expected"])
              for r in aa.toric_r_checks()]
    ising = aa.ISING
    checks.append(_check("ising sigma x sigma = 1 + psi",
                         ising.fuse("sigma", "sigma") == {"1": 1, "psi": 1}))
    checks.append(_check("ising psi x sigma = sigma", ising.fuse("psi", "sigma") == {"sigma": 1}))
    checks.append(_check("toric e x m = eps", aa.TORIC.fuse("e", "m") == {"eps": 1}))
    for m in (ising, aa.TORIC):
        checks.append(_check(f"{m.name} fusion commutative and unital",
                             m.is_commutative() and m.is_unital()))

    f = ising.f_symbols["sigma4"].copy()
    if tamper:
        f[1, 1] *= -1
    eye = np.eye(2)
    checks.append(_check("F unitary", np.allclose(f.conj().T @ f, eye, atol=TOL, rtol=0)))
    checks.append(_check("F self-inverse", np.allclose(f @ f, eye, atol=TOL, rtol=0)))
    checks.append(_check("F Hermitian", np.allclose(f, f.conj().T, atol=TOL, rtol=0)))
    expected_b = np.exp(-1j * np.pi / 4) * np.array([[0, 1], [1, 0]])
    try:
        b = aa.braid_matrix(ising, f)
    except np.linalg.LinAlgError as exc:
        b = None
        checks.append(_check("B = exp(-i pi/4) X", False, error=str(exc)))
    if b is not None:
        checks.append(_check("B = exp(-i pi/4) X", np.allclose(b, expected_b, atol=TOL, rtol=0)))
        checks.append(_check("B unitary", np.allclose(b.conj().T @ b, eye, atol=TOL, rtol=0)))
        checks.append(_check("B^2 = -i I", np.allclose(b @ b, -1j * eye, atol=TOL, rtol=0)))
    f_punct = aa.fusion_basis_change()
    checks.append(_check("F_punct equals F", np.allclose(f_punct, f, atol=TOL, rtol=0)))
    report = _report(
        "check-algebra", None, checks,
        tampered=tamper,
        matrices={
            "F": aa.matrix_to_json(f),
            "B": aa.matrix_to_json(b) if b is not None else None,
            "F_punct": aa.matrix_to_json(f_punct),
        },
    )
    return report, 0 if report["passed"] else 1


# -- run-fusion --------------------------------------------------------------


def _quartet(cfg: ExperimentConfig):
    return build_quartet(cfg.rows, cfg.cols, cfg.boundary, cfg.anchors, cfg.size,
                         np.random.default_rng(cfg.seed))


def cmd_run_fusion(cfg: ExperimentConfig) -> tuple[dict, int]:
    code, quartet = _quartet(cfg)
    prepare_quartet(code, quartet, cfg.signs)
    records = sample_fusion(code, cfg.shots, cfg.seed)
    counts = fusion_counts(records)
    n = cfg.shots
    expected = aa.oracle_fuse_probabilities(aa.oracle_prepare(*cfg.signs))
    freqs = {}
    checks = []
    for key, c in counts.items():
        p = c / n
        freqs[key] = {"count": c, "frequency": p, "stderr": math.sqrt(p * (1 - p) / n)}
    for key, p in expected.items():
        tol = 3 * math.sqrt(p * (1 - p) / n)
        got = freqs[key]["frequency"]
        checks.append(_check(f"freq({key}) within 3 sigma of {p}", abs(got - p) <= tol,
                             frequency=got, expected=p, tolerance=tol))
    anti = counts["1,psi"] + counts["psi,1"] + counts["other"]
    checks.append(_check("no anticorrelated outcomes", anti == 0, count=anti))
    report = _report(
        "run-fusion", cfg, checks,
        initial_label=read_logical(code, quartet).value,
        frequencies=freqs,
        shots=[list(r) for r in records],
    )
    return report, 0 if report["passed"] else 1


# -- run-braid ---------------------------------------------------------------


def _oracle_label(state: np.ndarray) -> tuple[int, int]:
    """Which encoded basis state the oracle amplitudes equal, up to phase."""
    for signs in ((1, 1), (-1, -1)):
        if aa.equal_up_to_phase(state, aa.oracle_prepare(*signs)):
            return signs
    raise ValueError("oracle state is not an encoded basis state")


def cmd_run_braid(cfg: ExperimentConfig) -> tuple[dict, int]:
    """Braid on both basis states, the same-pair control and a double braid."""
    try:
        code0, quartet = _quartet(cfg)
        plans = {
            "main": plan_braid(code0, cfg.moving, cfg.around, cfg.margin),
            "control": plan_braid(code0, *cfg.control, cfg.margin),
        }
    except (ClearanceError, DefectError) as exc:
        report = _report("run-braid", cfg, [_check("clearance", False, error=str(exc))], simulated=False)
        return report, 2

    refs = {}
    for signs in ((1, 1), (-1, -1)):
        c = code0.copy()
        prepare_quartet(c, quartet, signs)
        refs[signs] = c
    main = (cfg.moving, cfg.around)
    runs = []
    checks = []
    for signs, ref in refs.items():
        for name, pair in (("main", main), ("control", cfg.control)):
            c = ref.copy()
            braid(c, *pair, margin=cfg.margin)
            predicted = aa.oracle_braid(aa.oracle_prepare(*signs), pair)
            target_signs = _oracle_label(predicted)
            target = refs[target_signs]
            t_lat = branch_signs(ref, c, quartet)
            t_orc = np.real(predicted / aa.oracle_prepare(*signs)).astype(int)
            run = {
                "run": name,
                "moving": pair[0],
                "around": pair[1],
                "initial_label": read_logical(ref, quartet).value,
                "final_label": read_logical(c, quartet).value,
                "expected_label": read_logical(target, quartet).value,
                "branch_signs": t_lat.tolist(),
                "oracle_branch_signs": t_orc.tolist(),
            }
            runs.append(run)
            tag = f"{name} {pair[0]} around {pair[1]} on {run['initial_label']}"
            checks.append(_check(f"{tag}: states_equal {run['expected_label']}",
                                 states_equal(c.state, target.state)))
            checks.append(_check(f"{tag}: branch signs match oracle", np.array_equal(t_lat, t_orc)))
            if name == "main":
                static = ref.copy()
                static.apply(logical_x(static))
                flips = target_signs != signs
                checks.append(_check(f"{tag}: " + ("equals" if flips else "differs from") + " static logical X",
                                     states_equal(c.state, static.state) == flips))
    c = refs[(1, 1)].copy()
    braid(c, *main, margin=cfg.margin)
    braid(c, *main, margin=cfg.margin)
    checks.append(_check("double braid returns to the initial state",
                         states_equal(c.state, refs[(1, 1)].state)))
    report = _report("run-braid", cfg, checks, simulated=True, runs=runs,
                     path_lengths={k: len(v) for k, v in plans.items()})
    return report, 0 if report["passed"] else 1


# -- render ------------------------------------------------------------------


def build_scene(cfg: ExperimentConfig, snapshot: str) -> Scene:
    if snapshot not in SNAPSHOTS:
        raise ValueError(f"unknown snapshot {snapshot!r}; choose from {', '.join(SNAPSHOTS)}")
    code, quartet = _quartet(cfg)
    g = code.geometry
    if snapshot == "empty":
        return Scene(g, title="empty lattice")
    if snapshot == "fresh":
        return Scene(g, sorted(code.punctures.values(), key=lambda p: p.id), title="fresh quartet")
    prepare_quartet(code, quartet, cfg.signs)
    overlays = {"e": set(), "m": set()}
    for se, sm in quartet.strings.values():
        overlays["e"].update(se.path)
        overlays["m"].update(sm.path)
    title = "prepared quartet"
    if snapshot == "post-braid":
        braid(code, cfg.moving, cfg.around, margin=cfg.margin)
        entry = next(e for e in reversed(code.log) if e["op"] == "braid")
        loops = set()
        for pid in (entry["moving"], entry["around"]):
            xl, _ = code.puncture_loops(pid)
            loops.update(g.edges[q] for q in xl.support)
        overlays = {"loop": loops}
        title = f"after braiding {entry['moving']} around {entry['around']}"
    return Scene(g, sorted(code.punctures.values(), key=lambda p: p.id), overlays, title)


def cmd_render(cfg: ExperimentConfig, snapshot: str, fmt: str = "ascii") -> str:
    return render(build_scene(cfg, snapshot), fmt)


# -- entry point -------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mixpunct", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH")
    common.add_argument("--seed", type=int)
    common.add_argument("--shots", type=int)
    common.add_argument("--out", metavar="PATH")
    p = sub.add_parser("check-algebra", parents=[common], help="verify anyon-model data")
    p.add_argument("--tamper", action="store_true", help="negative control: flip a sign in F")
    sub.add_parser("run-fusion", parents=[common], help="fusion statistics on the quartet")
    sub.add_parser("run-braid", parents=[common], help="braid experiments and controls")
    p = sub.add_parser("render", parents=[common], help="draw a lattice snapshot")
    p.add_argument("--snapshot", default="fresh", choices=SNAPSHOTS)
    p.add_argument("--format", default="ascii", choices=("ascii", "svg"))
    return ap


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    overrides = {k: getattr(args, k) for k in ("seed", "shots") if getattr(args, k) is not None}
    if overrides.get("shots", 1) < 1:
        print("config error: --shots must be at least 1", file=sys.stderr)
        return 2
    cfg = dataclasses.replace(cfg, **overrides)

    if args.command == "render":
        out = args.out or cfg.diagram
        _emit(cmd_render(cfg, args.snapshot, args.format), out)
        return 0
    if args.command == "check-algebra":
        report, code = cmd_check_algebra(args.tamper)
    elif args.command == "run-fusion":
        report, code = cmd_run_fusion(cfg)
    else:
        report, code = cmd_run_braid(cfg)
    _emit(dumps_report(report), args.out or cfg.report)
    return code


if __name__ == "__main__":
    sys.exit(main())
