"""``qinv`` command-line driver.

Exit codes: 0 the property holds, 3 it fails, 4 the verdict is unknown,
2 usage, parse or validation error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from .matrix import Matrix
from .oracle import ExperimentConfig, GuardExceeded, run_experiment
from .parser import ParseError, parse_matrix
from .problem import FORMAT, MATRIX_FILE_SCHEMA, ProblemError, load_problem, read_json, validate
from .qi import NotInM, default_seed, QiReport, Verdict, adjugate_invariance, check_qi, closed_loop_set, h_invariance, h_map
from .rings import IntegersModP, ring_from_json
from .vandermonde import search_left_invertible, vandermonde

EXIT = {Verdict.TRUE: 0, Verdict.FALSE: 3, Verdict.UNKNOWN: 4}
INPUT_ERROR = 2


class InputError(Exception):
    pass


def _emit(out: Dict[str, Any], as_json: bool, text: List[str]) -> int:
    if as_json:
        print(json.dumps(out, indent=2, ensure_ascii=False))
    else:
        for line in text:
            print(line)
        if out["warnings"]:
            print("warnings:")
            for w in out["warnings"]:
                print(f"  - {w}")
    return out["exit_code"]


def _fmt_matrix(rows) -> str:
    return "[" + ", ".join("[" + ", ".join(r) + "]" for r in rows) + "]"


def _report_lines(title: str, rep: QiReport) -> List[str]:
    lines = [f"{title}: {rep.verdict.value} ({rep.method.value})"]
    for name, status in rep.preconditions:
        lines.append(f"  [{status}] {name}")
    for k, v in (rep.to_json().get("witness") or {}).items():
        if isinstance(v, list) and v and isinstance(v[0], list) and v[0] and isinstance(v[0][0], str):
            v = _fmt_matrix(v)
        lines.append(f"  {k}: {v}")
    for n in rep.notes:
        lines.append(f"  note: {n}")
    return lines


def _base(command: str) -> Dict[str, Any]:
    return {"format": FORMAT, "command": command, "exit_code": 0, "warnings": []}


def cmd_check_qi(args) -> int:
    prob = load_problem(args.file)
    out = _base("check-qi")
    try:
        qi = check_qi(prob.plant, prob.controller_set, method=args.method)
    except ValueError as e:
        raise InputError(str(e)) from None
    adj = adjugate_invariance(prob.plant, prob.controller_set, seed=args.seed)
    hinv = h_invariance(prob.plant, prob.controller_set, seed=args.seed)
    out["qi"] = qi.to_json()
    out["adjugate_invariance"] = adj.to_json()
    out["h_invariance"] = hinv.to_json()
    if qi.verdict == Verdict.TRUE and adj.verdict == Verdict.FALSE:
        out["warnings"].append(
            f"S is QI but not invariant under K -> K adj(I-GK) over {prob.ring}; "
            "quadratic invariance alone does not give convexity of the closed-loop set here")
    if qi.verdict == Verdict.TRUE and hinv.verdict == Verdict.UNKNOWN:
        out["warnings"].append("h-invariance could not be established: no invariance theorem applies")
    out["exit_code"] = EXIT[qi.verdict]
    text = _report_lines("qi", qi) + _report_lines("adjugate-invariance", adj) + _report_lines("h-invariance", hinv)
    return _emit(out, args.json, text)


def _read_k(source: str, ring) -> Matrix:
    obj = read_json(source)
    validate(obj, MATRIX_FILE_SCHEMA)
    if isinstance(obj, dict):
        obj = obj["K"]
    try:
        return parse_matrix(obj, ring)
    except ParseError as e:
        raise ProblemError(f"K: {e}") from None


def cmd_h_map(args) -> int:
    prob = load_problem(args.file)
    K = _read_k(args.k, prob.ring)
    G = prob.plant
    if K.shape != (G.cols, G.rows):
        raise InputError(f"K must be {G.cols}x{G.rows}, got {K.rows}x{K.cols}")
    out = _base("h-map")
    try:
        hK = h_map(K, G)
    except NotInM as e:
        out.update(h_of_k=None, in_s=None, det=str(e.det), exit_code=3)
        return _emit(out, args.json, [f"K is not in M: det(I - GK) = {e.det} is not a unit"])
    out["h_of_k"] = hK.to_strings()
    out["in_s"] = prob.controller_set.contains(hK).member
    lines = [f"h(K) = {_fmt_matrix(out['h_of_k'])}", f"h(K) in S: {str(out['in_s']).lower()}"]
    return _emit(out, args.json, lines)


def cmd_closed_loop(args) -> int:
    prob = load_problem(args.file)
    if prob.p11 is None:
        raise InputError("closed-loop needs p11, p12 and p21 in the problem file")
    out = _base("closed-loop")
    hinv = h_invariance(prob.plant, prob.controller_set, seed=args.seed)
    out["h_invariance"] = hinv.to_json()
    aff = closed_loop_set(prob.p11, prob.p12, prob.p21, prob.plant, prob.controller_set)
    out["affine_set"] = aff.to_json() if aff else None
    out["exit_code"] = EXIT[hinv.verdict]
    lines = _report_lines("h-invariance", hinv)
    if aff is None:
        out["warnings"].append("the closed-loop set is not known to be affine; nothing to report")
    else:
        lines.append(f"offset: {_fmt_matrix(out['affine_set']['offset'])}")
        lines.append(f"images: {len(aff.images)}")
        for i, M in enumerate(out["affine_set"]["images"]):
            lines.append(f"  [{i}] {_fmt_matrix(M)}")
    return _emit(out, args.json, lines)


def cmd_oracle(args) -> int:
    try:
        cfg = ExperimentConfig(p=args.p, m=args.m, n=args.n, gen_count=args.gens, trials=args.trials,
                               seed=args.seed if args.seed is not None else default_seed())
        IntegersModP(args.p)
    except (ValueError, GuardExceeded) as e:
        raise InputError(str(e)) from None
    rep = run_experiment(cfg)
    runtime = rep.pop("runtime_ms")
    if args.timing:
        rep["runtime_ms"] = runtime
    out = _base("oracle")
    out["report"] = rep
    if rep["exploratory"]:
        out["warnings"].append(f"p = {cfg.p} is outside the hypotheses (p odd, p >= 2*min(m,n)+1); "
                               "discrepancies are recorded, not asserted against")
    out["exit_code"] = 0 if not rep["discrepancies"] or rep["exploratory"] else 3
    lines = [f"trials: {rep['trials']}", f"agreements: {rep['agreements']}",
             f"qi true: {rep['qi_true']}", f"discrepancies: {len(rep['discrepancies'])}"]
    for d in rep["discrepancies"]:
        lines.append(f"  trial {d['trial']}: qi={d['qi']} h_invariant={d['h_invariant']} engine={d['engine_qi']}")
    if args.timing:
        lines.append(f"runtime_ms: {runtime}")
    return _emit(out, args.json, lines)


def cmd_vandermonde(args) -> int:
    try:
        ring = ring_from_json(_ring_arg(args.ring))
        points = [p.strip() for p in args.points.split(",") if p.strip()]
        n_max = args.n_max or len(points)
        res = search_left_invertible(ring, args.n, points, n_max)
    except (ValueError, ParseError, TypeError) as e:
        raise InputError(str(e)) from None
    out = _base("vandermonde")
    if res is None:
        out.update(points=[], left_inverse=None, product=None, exit_code=3)
        return _emit(out, args.json, [f"no left-invertible Vandermonde matrix on subsets of {args.points} over {ring}"])
    pts, L = res
    V = vandermonde(ring, pts, args.n)
    out["points"] = [str(p) for p in pts]
    out["left_inverse"] = L.to_strings()
    out["product"] = (L @ V).to_strings()
    lines = [f"points: {', '.join(out['points'])}", f"V = {_fmt_matrix(V.to_strings())}",
             f"L = {_fmt_matrix(out['left_inverse'])}", f"L V = {_fmt_matrix(out['product'])}"]
    return _emit(out, args.json, lines)


def _ring_arg(text: str) -> Dict[str, Any]:
    """``zz``, ``qq``, ``zbeta``, ``mod7`` / ``mod:7``, or a JSON ring object."""
    t = text.strip().lower()
    named = {"zz": "integers", "z": "integers", "integers": "integers", "qq": "rationals", "q": "rationals",
             "rationals": "rationals", "zbeta": "zbeta"}
    if t in named:
        return {"kind": named[t]}
    if t.startswith("mod"):
        digits = t[3:].lstrip(":_")
        if digits.isdigit():
            return {"kind": "mod_p", "p": int(digits)}
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise ValueError(f"unknown ring {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qinv", description="Quadratic invariance over commutative rings.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        if seed:
            p.add_argument("--seed", type=int, default=None, help="random seed (default: $QINV_SEED or 0)")

    p = sub.add_parser("check-qi", help="decide QI, adjugate invariance and h-invariance")
    p.add_argument("file", help="problem JSON file, or corpus:NAME")
    p.add_argument("--method", choices=["auto", "generators", "sparsity"], default="auto")
    common(p)
    p.set_defaults(func=cmd_check_qi)

    p = sub.add_parser("h-map", help="compute h(K) = -K(I-GK)^-1")
    p.add_argument("file")
    p.add_argument("--k", required=True, help="JSON file holding K (a matrix, or {\"K\": matrix})")
    common(p, seed=False)
    p.set_defaults(func=cmd_h_map)

    p = sub.add_parser("closed-loop", help="affine set of closed-loop maps")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_closed_loop)

    p = sub.add_parser("oracle", help="brute-force QI vs h-invariance agreement over Z/p")
    p.add_argument("--p", type=int, default=7)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--gens", type=int, default=3)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--timing", action="store_true", help="include runtime in the report")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("vandermonde", help="search for a left-invertible Vandermonde matrix")
    p.add_argument("--ring", required=True, help="zz, qq, zbeta, modP, or a JSON ring object")
    p.add_argument("--points", required=True, help="comma-separated candidate points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--n-max", type=int, default=None)
    common(p, seed=False)
    p.set_defaults(func=cmd_vandermonde)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else 0
    try:
        return args.func(args)
    except (InputError, ProblemError) as e:
        if getattr(args, "json", False):
            out = _base(args.command)
            out.update(exit_code=INPUT_ERROR, error=str(e))
            print(json.dumps(out, indent=2, ensure_ascii=False))
        print(f"qinv: error: {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
