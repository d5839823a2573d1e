"""Command line interface."""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import report as R
from .ci import anticanonical_divisor, ci_data, singularity_census, slab_table
from .cracked import is_cracked
from .errors import CracklatError, PalpParseError, TheoremViolation
from .laurent import build_ambient, is_smooth_ambient, verify_embedding
from .lattice import primitive_vector
from .palp import parse_palp_all, parse_palp_matrices, to_polytope
from .polytope import lattice_length, polar_dual
from .scaffolding import Shape, scaffold_shape_p1, search_full_scaffolding, validate_scaffolding

EXIT_OK, EXIT_INPUT, EXIT_ALARM = 0, 1, 2


def _vectors(s):
    if not s:
        return None
    try:
        return [tuple(int(x) for x in part.split(",")) for part in s.split(";") if part.strip()]
    except ValueError:
        raise CracklatError(f"bad vector list {s!r}")


def read_problem(args) -> dict:
    text = sys.stdin.read() if args.input == "-" else open(args.input).read()
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CracklatError(f"bad JSON: {exc}")
        prob = R.problem_from_json(doc)
        shape_name = (doc.get("problem", doc)).get("shape")
    else:
        ms = parse_palp_matrices(text, args.orientation)
        if len(ms) != 1:
            raise PalpParseError(f"expected one matrix, found {len(ms)}", 1)
        P = to_polytope(ms[0], fano=args.fano, reflexive=args.reflexive)
        prob = {"polytope": P, "shape": None, "scaffolding": None, "palp_id": ms[0].id}
        shape_name = None
    name = getattr(args, "shape", None) or getattr(args, "fan", None)
    if name:
        prob["shape"] = make_shape(name, prob["polytope"], args)
        prob["scaffolding"] = None
        shape_name = name
    prob["shape_name"] = shape_name
    return prob


def choose_p1_direction(P):
    """Direction of the longest edge (then lexicographically least) along which P° cracks."""
    dual = polar_dual(P)
    cands = []
    for E in P.edges():
        a, b = E.vertices
        u = primitive_vector(tuple(x - y for x, y in zip(b, a)))
        if next(x for x in u if x) < 0:
            u = tuple(-x for x in u)
        cands.append((-lattice_length(E), u))
    for _, u in sorted(set(cands)):
        sh = Shape.p1(u)
        if is_cracked(dual, sh.cracking_fan).verdict:
            return u
    return None


def make_shape(name, P, args):
    n = P.ambient_dim
    u = _vectors(getattr(args, "u", None))
    nu = _vectors(getattr(args, "nu_basis", None))
    nbar = _vectors(getattr(args, "nbar_basis", None))
    if name == "p1" and not (u or nu or nbar) and n > 1:
        d = choose_p1_direction(P)
        if d is None:
            raise CracklatError("no edge direction along which the polar polytope is cracked")
        return Shape.p1(d)
    if u:
        nbar = u
    return R.build_shape(name, n, nu, nbar)


def get_scaffolding(prob):
    """Given scaffolding (validated) or one constructed for the shape: ``(S, search certificate)``."""
    if prob["scaffolding"] is not None:
        return validate_scaffolding(prob["scaffolding"]), None
    shape = prob["shape"]
    if shape is None:
        raise CracklatError("a shape is required")
    if shape.d == 1:
        return scaffold_shape_p1(prob["polytope"], shape), None
    return search_full_scaffolding(prob["polytope"], shape)


def problem_doc(prob, S=None):
    return R.problem_to_json(prob["polytope"], prob["shape"], prob.get("shape_name"), S or prob.get("scaffolding"), prob.get("palp_id"))


def run_pipeline(prob, stop_after=None) -> dict:
    """All stages; later stages are skipped when an earlier one fails or is negative."""
    P = prob["polytope"]
    rep = R.new_report(problem_doc(prob))
    st = rep["stages"]
    try:
        st["census"] = R.census_json(singularity_census(P))
    except CracklatError as exc:
        st["census"] = R.error_json(exc)
    shape = prob["shape"]
    if shape is None:
        return rep
    try:
        dual = polar_dual(P)
        crack = is_cracked(dual, shape.cracking_fan)
        st["cracked"] = R.crack_json(crack, shape.cracking_fan)
    except CracklatError as exc:
        st["cracked"] = R.error_json(exc)
        return rep
    if stop_after == "cracked" or not crack.verdict:
        return rep
    try:
        S, cert = get_scaffolding(prob)
    except TheoremViolation:
        raise
    except CracklatError as exc:
        st["scaffolding"] = R.error_json(exc)
        return rep
    sc = {"status": "ok", "found": S is not None}
    if cert is not None:
        sc["search"] = R.search_json(cert)
    if S is None:
        st["scaffolding"] = sc
        return rep
    from .scaffolding import is_full

    sc["struts"] = [{"D": R.jsonable(s.D.coeffs), "chi": R.jsonable(s.chi)} for s in S.struts]
    sc.update(R.fullness_json(is_full(S)))
    st["scaffolding"] = sc
    if stop_after == "scaffolding":
        return rep
    try:
        model = build_ambient(S)
        model.check_projecting_struts()
        smooth = is_smooth_ambient(model)
        emb = verify_embedding(model)
        amb = R.ambient_json(model, smooth)
        amb["embedding"] = {"faces": len([f for f in emb.faces if f is not None]), "cones_checked": len(emb.cones)}
        st["ambient"] = amb
    except TheoremViolation:
        raise
    except CracklatError as exc:
        st["ambient"] = R.error_json(exc)
        return rep
    if stop_after == "ambient":
        return rep
    try:
        ci = ci_data(model)
        st["ci"] = R.ci_json(ci)
        st["anticanonical"] = R.anticanonical_json(anticanonical_divisor(model, ci))
    except TheoremViolation:
        raise
    except CracklatError as exc:
        st["ci"] = R.error_json(exc)
        return rep
    if stop_after == "ci":
        return rep
    if not (smooth.verdict and model.dual.is_lattice):
        return rep
    try:
        slabs = slab_table(model, ci)
        st["slabs"] = {"status": "ok", "slabs": [R.slab_json(s) for s in slabs]}
        st["positivity"] = {"status": "ok", "positive": all(s.bpf for s in slabs)}
    except TheoremViolation:
        raise
    except CracklatError as exc:
        st["slabs"] = R.error_json(exc)
    return rep


# subcommands -------------------------------------------------------------

def cmd_polar(args):
    prob = read_problem(args)
    D = polar_dual(prob["polytope"])
    return {"polar": R.jsonable(D.vertices), "reflexive": D.is_lattice}


def cmd_cracked(args):
    prob = read_problem(args)
    P = prob["polytope"]
    if args.polar:
        P = polar_dual(P)
    if prob["shape"] is None:
        raise CracklatError("--fan is required")
    rep = is_cracked(P, prob["shape"].cracking_fan)
    return R.crack_json(rep, prob["shape"].cracking_fan)


def _stage(args, name):
    prob = read_problem(args)
    rep = run_pipeline(prob, stop_after=None if name in ("slabs", "positivity") else name)
    return rep, rep["stages"]


def cmd_scaffold(args):
    rep, st = _stage(args, "scaffolding")
    return {"cracked": st["cracked"], "scaffolding": st["scaffolding"], "problem": rep["problem"]}


def cmd_ambient(args):
    rep, st = _stage(args, "ambient")
    return st["ambient"]


def cmd_ci(args):
    rep, st = _stage(args, "ci")
    return {"ci": st["ci"], "anticanonical": st["anticanonical"]}


def cmd_slabs(args):
    rep, st = _stage(args, "slabs")
    return st["slabs"]


def cmd_positivity(args):
    rep, st = _stage(args, "positivity")
    out = dict(st["positivity"])
    out["slabs"] = st["slabs"].get("slabs")
    return out


def cmd_report(args):
    return run_pipeline(read_problem(args))


def _scan_one(job):
    pid, text, shape, opts = job
    try:
        ms = parse_palp_matrices(text)
        P = to_polytope(ms[0])
        ns = argparse.Namespace(**opts)
        prob = {"polytope": P, "shape": make_shape(shape, P, ns) if shape else None, "scaffolding": None, "palp_id": pid}
        prob["shape_name"] = shape
        rep = run_pipeline(prob)
        code = EXIT_OK
    except TheoremViolation as exc:
        rep = {"schema": R.SCHEMA, "input": {"palp_id": pid}, "alarm": R.error_json(exc)}
        code = EXIT_ALARM
    except Exception as exc:
        rep = {"schema": R.SCHEMA, "input": {"palp_id": pid}, "error": R.error_json(exc)}
        code = EXIT_INPUT
    st = rep.get("stages", {})
    pos = st.get("positivity", {})
    rep["positive"] = pos.get("positive") if pos.get("status") == "ok" else None
    return pid, R.dumps(rep), code


def cmd_scan(args):
    text = sys.stdin.read() if args.input == "-" else open(args.input).read()
    entries = parse_palp_all(text, args.orientation)
    if args.ids:
        want = [int(x) for x in args.ids.split(",") if x.strip()]
        byid = {i: m for i, m in entries}
        missing = [i for i in want if i not in byid]
        if missing:
            raise CracklatError(f"ids not in input: {missing}")
        entries = [(i, byid[i]) for i in want]
    done = {}
    if args.resume and os.path.exists(args.resume):
        with open(args.resume) as fh:
            for line in fh:
                if line.strip():
                    rec = json.loads(line)
                    done[rec["id"]] = (rec["line"], rec["code"])
    opts = {"u": None, "nu_basis": args.nu_basis, "nbar_basis": args.nbar_basis}
    jobs = []
    for i, m in entries:
        if i in done:
            continue
        body = f"{m.rows} {m.cols}\n" + "\n".join(" ".join(str(x) for x in r) for r in m.entries)
        if m.orientation == "columns" and m.rows == m.cols:
            raise CracklatError("square matrices need an explicit orientation")
        jobs.append((i, body, args.shape, opts))
    workers = int(os.environ.get("CRACKLAT_THREADS", "0") or 0) or min(4, os.cpu_count() or 1)
    ck = open(args.resume, "a") if args.resume else None
    try:
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as ex:
                results = ex.map(_scan_one, jobs)
                for pid, line, code in results:
                    done[pid] = (line, code)
                    if ck:
                        ck.write(json.dumps({"id": pid, "line": line, "code": code}) + "\n")
                        ck.flush()
        else:
            for job in jobs:
                pid, line, code = _scan_one(job)
                done[pid] = (line, code)
                if ck:
                    ck.write(json.dumps({"id": pid, "line": line, "code": code}) + "\n")
                    ck.flush()
    finally:
        if ck:
            ck.close()
    lines = [done[i][0] for i, _ in entries]
    code = max((done[i][1] for i, _ in entries), default=EXIT_OK)
    return "\n".join(lines) + ("\n" if lines else ""), code


COMMANDS = {
    "polar": cmd_polar,
    "cracked": cmd_cracked,
    "scaffold": cmd_scaffold,
    "ambient": cmd_ambient,
    "ci": cmd_ci,
    "slabs": cmd_slabs,
    "positivity": cmd_positivity,
    "report": cmd_report,
    "scan": cmd_scan,
}


def build_parser():
    p = argparse.ArgumentParser(prog="cracklat", description="Cracked polytopes, scaffoldings and their ambient toric models.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        q = sub.add_parser(name)
        q.add_argument("--in", dest="input", required=True, help="PALP or JSON file, '-' for stdin")
        q.add_argument("--out", default="-", help="output file (default stdout)")
        q.add_argument("--orientation", choices=["rows", "columns"])
        q.add_argument("--fano", action="store_true", help="require a Fano polytope")
        q.add_argument("--reflexive", action="store_true", help="require a reflexive polytope")
        q.add_argument("--shape", help="p1, p2, p1xp1xp1 or pk:k1,...,kr")
        q.add_argument("--fan", help="alias of --shape")
        q.add_argument("--nu-basis", help="basis of N_U, as 'a,b,c;d,e,f'")
        q.add_argument("--nbar-basis", help="basis of the shape part of N")
        q.add_argument("--u", help="edge direction for the P^1 shape")
        if name == "cracked":
            q.add_argument("--polar", action="store_true", help="test the polar polytope instead")
        if name == "scan":
            q.add_argument("--ids", help="comma separated entry ids")
            q.add_argument("--resume", help="checkpoint file")
    return p


def _write(out, text):
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        res = COMMANDS[args.command](args)
        code = EXIT_OK
        if isinstance(res, tuple):
            text, code = res
        else:
            text = json.dumps(R.jsonable(res), sort_keys=True, indent=1) + "\n"
        _write(args.out, text)
        return code
    except TheoremViolation as exc:
        doc = {"schema": R.SCHEMA, "input": {"palp_id": None}, "alarm": R.error_json(exc)}
        _write(args.out, json.dumps(doc, sort_keys=True, indent=1) + "\n")
        return EXIT_ALARM
    except (CracklatError, OSError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(f"cracklat: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
