"""Command-line interface: build models, verify them, and extract anyon data.

Every subcommand is a thin wrapper over a library operation and writes a
deterministic JSON report (sorted keys, rationals rendered as "p/q").
Exit codes: 0 pass, 1 verification failure, 2 usage or spec error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import anyon, circuitmap, extraction, kmatrix
from . import lattice as lat
from .exactmath import IntMatrix
from .stabilizer import (assert_commuting, logical_dimension,
                         scalar_consistency)


class SpecError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Shared argument plumbing
# ---------------------------------------------------------------------------


def _add_param_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", help="path to a JSON model/param spec")
    p.add_argument("--N", help="comma-separated cyclic factors, e.g. 2,4")
    p.add_argument("--n", help="comma-separated type-I exponents")
    p.add_argument("--nij", help='type-II exponents as "i,j,v;i,j,v;..."')
    p.add_argument("--L", type=int, help="torus size (square)")
    p.add_argument("--Lx", type=int)
    p.add_argument("--Ly", type=int)
    p.add_argument("--type", dest="model_type",
                   choices=["tc", "ds", "tqd", "spt"])


def _parse_int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v != ""]


def _parse_nij(text: str) -> dict:
    table = {}
    for part in text.split(";"):
        if not part:
            continue
        i, j, v = (int(t) for t in part.split(","))
        table[(i, j)] = v
    return table


def _load_spec(args) -> dict:
    spec: dict = {}
    if args.spec:
        try:
            with open(args.spec) as fh:
                spec = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"cannot read spec {args.spec}: {exc}")
    if getattr(args, "model_type", None):
        spec["type"] = args.model_type
    if args.N:
        spec["N"] = _parse_int_list(args.N)
    if args.n is not None and args.n != "":
        spec["n"] = _parse_int_list(args.n)
    if args.nij:
        spec["nij"] = _parse_nij(args.nij)
    for key in ("L", "Lx", "Ly"):
        val = getattr(args, key, None)
        if val is not None:
            spec[key] = val
    return spec


def _params_from_spec(spec: dict) -> lat.TqdParams:
    if "N" not in spec:
        raise SpecError("missing --N / spec key 'N'")
    nij = spec.get("nij")
    if isinstance(nij, dict):
        nij = {tuple(map(int, str(k).strip("()").replace(" ", "").split(",")))
               if isinstance(k, str) else k: v for k, v in nij.items()}
    try:
        return lat.TqdParams(spec["N"], spec.get("n", [0] * len(spec["N"])),
                             nij)
    except ValueError as exc:
        raise SpecError(str(exc))


def _build_model(spec: dict):
    if "type" not in spec:
        spec = dict(spec)
        spec["type"] = "tqd" if "N" in spec else "ds"
    try:
        return lat.build_from_spec(spec)
    except ValueError as exc:
        raise SpecError(str(exc))


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_model_build(args) -> int:
    group, model = _build_model(_load_spec(args))
    report = {
        "kind": model.kind,
        "Lx": model.lattice.Lx,
        "Ly": model.lattice.Ly,
        "edge_dims": list(model.lattice.edge_dims),
        "vertex_dims": list(model.lattice.vertex_dims),
        "n_sites": model.system.n_sites,
        "n_generators": len(group.generators),
        "labels": sorted(model.labels),
    }
    _emit(report, args)
    return 0


def cmd_verify(args) -> int:
    spec = _load_spec(args)
    check = args.check
    if check == "condensation-equality":
        params = _params_from_spec(spec)
        Lx = int(spec.get("Lx", spec.get("L", 3)))
        Ly = int(spec.get("Ly", spec.get("L", Lx)))
        equal = lat.condensation_equal(params, Lx, Ly)
        _emit({"check": check, "equal": equal}, args)
        return 0 if equal else 1
    group, model = _build_model(spec)
    if check == "commuting":
        bad = assert_commuting(group)
        _emit({"check": check, "commuting": not bad,
               "violations": [list(pair) for pair in bad]}, args)
        return 0 if not bad else 1
    if check == "scalar":
        result = scalar_consistency(group)
        _emit({"check": check, "consistent": result.consistent}, args)
        return 0 if result.consistent else 1
    if check == "degeneracy":
        dim = logical_dimension(group)
        expected = _expected_dimension(model)
        _emit({"check": check, "logical_dimension": dim,
               "expected": expected}, args)
        return 0 if expected is None or dim == expected else 1
    raise SpecError(f"unknown verify check {check!r}")


def _expected_dimension(model) -> int | None:
    if model.kind == "tc":
        return model.tc_N ** 2
    if model.kind in ("ds", "tqd"):
        out = 1
        for N in model.params.N:
            out *= N * N
        return out
    if model.kind == "spt":
        return 1
    return None


def cmd_anyons_extract(args) -> int:
    spec = _load_spec(args)
    spec.setdefault("L", 3)
    group, model = _build_model(spec)
    report = extraction.extraction_report(model)
    _emit(report, args)
    return 0 if report["iso_match"] in (True, None) else 1


def cmd_theory(args) -> int:
    spec = _load_spec(args)
    what = args.what
    if what == "tqd":
        params = _params_from_spec(spec)
        theory = anyon.tqd_theory(params.N, params.n, params.nij)
        report = theory.to_json_dict()
        report["census"] = anyon.topological_spins_census(theory)
        _emit(report, args)
        return 0
    if what == "condense":
        params = _params_from_spec(spec)
        result, iso = anyon.stack_condense_to_tqd(params.N, params.n,
                                                  params.nij)
        report = {"condensed": result.theory.to_json_dict(),
                  "matches_tqd": bool(iso)}
        _emit(report, args)
        return 0 if iso else 1
    if what == "lagrangian":
        params = _params_from_spec(spec)
        theory = anyon.tqd_theory(params.N, params.n, params.nij)
        subs = anyon.lagrangian_subgroups(theory)
        report = {"count": len(subs),
                  "subgroups": [sorted(map(list, sub)) for sub in subs]}
        _emit(report, args)
        return 0
    if what == "stack":
        params = _params_from_spec(spec)
        stacked = anyon.stack_theories(
            [anyon.zn_tc_theory(N * N) for N in params.N])
        report = stacked.to_json_dict()
        report["census"] = anyon.topological_spins_census(stacked)
        _emit(report, args)
        return 0
    if what == "iso":
        params = _params_from_spec(spec)
        t_direct = anyon.tqd_theory(params.N, params.n, params.nij)
        t_k = kmatrix.theory_from_k(kmatrix.build_k_tqd(params))
        _, iso_cond = anyon.stack_condense_to_tqd(params.N, params.n,
                                                  params.nij)
        report = {"kmatrix_match": anyon.theories_isomorphic(t_direct, t_k),
                  "condensation_match": bool(iso_cond)}
        _emit(report, args)
        return 0 if all(report.values()) else 1
    if what == "fusion-group":
        params = _params_from_spec(spec)
        direct = anyon.fusion_group(params.N, params.n, params.nij)
        via_cocycle = anyon.fusion_group_from_cocycle(params.N, params.n,
                                                      params.nij)
        report = {"fusion_group": direct, "via_cocycle": via_cocycle,
                  "match": direct == via_cocycle}
        _emit(report, args)
        return 0 if direct == via_cocycle else 1
    if what == "cocycle":
        params = _params_from_spec(spec)
        M = params.M
        zero = (0,) * M
        one = tuple(1 for _ in range(M))
        samples = {}
        for g, h, k in ((zero, zero, zero), (one, one, one),
                        (one, zero, one), (zero, one, one)):
            val = anyon.cocycle_value(params.N, params.n, params.nij, g, h, k)
            samples[f"{g}|{h}|{k}"] = str(val)
        _emit({"samples": samples}, args)
        return 0
    raise SpecError(f"unknown theory subcommand {what!r}")


def cmd_kmatrix(args) -> int:
    spec = _load_spec(args)
    what = args.what
    if what == "transform":
        if not args.spec:
            raise SpecError("kmatrix transform needs --spec with K and W")
        K = IntMatrix(spec["K"])
        W = IntMatrix(spec["W"])
        try:
            out = kmatrix.transform(K, W)
        except ValueError as exc:
            raise SpecError(str(exc))
        _emit({"K": out.tolist()}, args)
        return 0
    params = _params_from_spec(spec)
    K = kmatrix.build_k_tqd(params)
    if what == "build":
        _emit(kmatrix.to_json_dict(K), args)
        return 0
    if what == "census":
        census = kmatrix.census(K)
        _emit({"census": {str(k): v for k, v in sorted(
            census.items(), key=lambda kv: kv[0].fraction)}}, args)
        return 0
    if what == "condense-check":
        cm = kmatrix.condensation_matrices(params)
        report = dict(cm.report)
        report["all_identities_hold"] = cm.all_identities_hold
        _emit(report, args)
        return 0 if cm.all_identities_hold else 1
    raise SpecError(f"unknown kmatrix subcommand {what!r}")


def cmd_spt_cocycle(args) -> int:
    spec = _load_spec(args)
    Lx = int(spec.get("Lx", spec.get("L", args.ell + 3)))
    Ly = int(spec.get("Ly", spec.get("L", 6)))
    _, model = lat.build_spt(Lx, Ly)
    report = extraction.spt_report(model, args.ell)
    _emit(report, args)
    return 0 if report["cocycle_valid"] else 1


def cmd_appendixa_check(args) -> int:
    tri = circuitmap.TriangularLattice(3)
    rng = random.Random(7)
    n_checked, ok = 0, True
    for _ in range(args.samples):
        b = {v: rng.randrange(2) for v in tri.vertices()}
        lhs = circuitmap.amplitude_psi(tri, b)
        rhs = (-1) ** circuitmap.domain_wall_count(tri, b)
        ok = ok and (lhs == rhs)
        n_checked += 1
    table1 = circuitmap.table1_identity()
    report = {"psi_identity": {"checked": n_checked, "ok": ok},
              "table1": table1}
    _emit(report, args)
    return 0 if ok and table1["agree"] else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tqdstab",
        description="Exact stabilizer models of twisted quantum doubles")
    parser.add_argument("--out", help="write the JSON report to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p_model = sub.add_parser("model", help="model builders")
    model_sub = p_model.add_subparsers(dest="subcommand", required=True)
    p_build = model_sub.add_parser("build")
    _add_param_args(p_build)
    p_build.set_defaults(func=cmd_model_build)

    p_verify = sub.add_parser("verify", help="stabilizer-group checks")
    p_verify.add_argument("check", choices=[
        "commuting", "scalar", "degeneracy", "condensation-equality"])
    _add_param_args(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_anyons = sub.add_parser("anyons", help="anyon-data extraction")
    anyons_sub = p_anyons.add_subparsers(dest="subcommand", required=True)
    p_extract = anyons_sub.add_parser("extract")
    _add_param_args(p_extract)
    p_extract.set_defaults(func=cmd_anyons_extract)

    p_theory = sub.add_parser("theory", help="abstract anyon theories")
    p_theory.add_argument("what", choices=[
        "tqd", "condense", "lagrangian", "stack", "iso", "fusion-group",
        "cocycle"])
    _add_param_args(p_theory)
    p_theory.set_defaults(func=cmd_theory)

    p_kmatrix = sub.add_parser("kmatrix", help="K-matrix computations")
    p_kmatrix.add_argument("what", choices=[
        "build", "census", "condense-check", "transform"])
    _add_param_args(p_kmatrix)
    p_kmatrix.set_defaults(func=cmd_kmatrix)

    p_spt = sub.add_parser("spt", help="SPT boundary cocycle")
    spt_sub = p_spt.add_subparsers(dest="subcommand", required=True)
    p_cocycle = spt_sub.add_parser("cocycle")
    p_cocycle.add_argument("--ell", type=int, default=4)
    _add_param_args(p_cocycle)
    p_cocycle.set_defaults(func=cmd_spt_cocycle)

    p_appa = sub.add_parser("appendixa", help="amplitude/circuit identities")
    appa_sub = p_appa.add_subparsers(dest="subcommand", required=True)
    p_check = appa_sub.add_parser("check")
    p_check.add_argument("--samples", type=int, default=50)
    p_check.set_defaults(func=cmd_appendixa_check)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SpecError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (KeyError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
