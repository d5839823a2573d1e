"""JSON reports (schema ``cracklat.report/1``) and problem documents."""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .errors import CracklatError, ScaffoldingError, TheoremViolation
from .fan import Fan, ToricDivisor, product_projective_fan
from .lattice import LatticeSplitting
from .polytope import Face, LatticePolytope, RationalCone

SCHEMA = "cracklat.report/1"
_BIG = 2**53


def jsonable(x):
    """Plain JSON data; big integers and fractions become strings."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x) if abs(x) >= _BIG else x
    if isinstance(x, Fraction):
        return jsonable(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (frozenset, set)):
        return [jsonable(v) for v in sorted(x)]
    if isinstance(x, LatticePolytope):
        return {"vertices": jsonable(x.vertices), "dim": x.dim}
    if isinstance(x, Face):
        return {"dim": x.dim, "vertices": jsonable(x.vertices)}
    if isinstance(x, RationalCone):
        return {"rays": jsonable(x.rays), "lineality": jsonable(x.lineality), "apex": jsonable(x.apex)}
    if isinstance(x, Fan):
        return {"rays": jsonable(x.rays), "cones": [sorted(c) for c in x.maximal_cones], "lineality": jsonable(x.lineality)}
    if isinstance(x, ToricDivisor):
        return jsonable(x.coeffs)
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def parse_int(x):
    if isinstance(x, str):
        if "/" in x:
            return Fraction(x)
        return int(x)
    return x


def dumps(doc) -> str:
    return json.dumps(jsonable(doc), sort_keys=True, separators=(",", ":"))


def digest(vertices) -> str:
    """Hash of the vertex set, independent of vertex order."""
    return hashlib.sha256(dumps(sorted(tuple(v) for v in vertices)).encode()).hexdigest()


# problem documents --------------------------------------------------------

def shape_spec_fan(name: str) -> Fan:
    """Named shape fans: p1, p2, p1xp1xp1 and pk:k1,...,kr."""
    name = name.strip().lower()
    if name == "p1":
        return product_projective_fan([1])
    if name == "p2":
        return product_projective_fan([2])
    if name == "p1xp1xp1":
        return product_projective_fan([1, 1, 1])
    if name.startswith("pk:"):
        try:
            ks = [int(t) for t in name[3:].split(",") if t]
        except ValueError:
            raise CracklatError(f"bad shape {name!r}")
        if not ks:
            raise CracklatError(f"bad shape {name!r}")
        return product_projective_fan(ks)
    raise CracklatError(f"unknown shape {name!r}")


def build_shape(name: str, n: int, nu_basis=None, nbar_basis=None):
    from .scaffolding import Shape

    fan = shape_spec_fan(name)
    if nbar_basis:
        split = LatticeSplitting.from_nbar([tuple(v) for v in nbar_basis])
    elif nu_basis:
        split = LatticeSplitting.from_nu([tuple(v) for v in nu_basis])
    elif fan.ambient_dim == n:
        split = LatticeSplitting.trivial(n)
    else:
        raise CracklatError("shape rank differs from the lattice rank: give a splitting")
    if split.rank != n or split.dim_nbar != fan.ambient_dim:
        raise CracklatError("splitting does not match the shape")
    return Shape(fan, split)


def problem_from_json(doc: dict) -> dict:
    """Read ``{"polytope": {"vertices"}, "shape", "nu_basis", "nbar_basis", "struts"}``.

    A report document is accepted too (its ``problem`` entry is used).
    """
    from .scaffolding import Scaffolding, Strut

    if "problem" in doc:
        doc = doc["problem"]
    try:
        V = [tuple(parse_int(x) for x in v) for v in doc["polytope"]["vertices"]]
    except (KeyError, TypeError) as exc:
        raise CracklatError(f"missing polytope vertices: {exc}")
    if not V:
        raise CracklatError("empty vertex list")
    P = LatticePolytope.from_vertices(V, len(V[0]))
    out = {"polytope": P, "shape": None, "scaffolding": None, "palp_id": doc.get("palp_id")}
    if doc.get("shape"):
        sh = build_shape(doc["shape"], P.ambient_dim, doc.get("nu_basis"), doc.get("nbar_basis"))
        out["shape"] = sh
        if doc.get("struts"):
            struts = []
            for s in doc["struts"]:
                D = ToricDivisor(sh.fan, [parse_int(a) for a in s["D"]])
                struts.append(Strut(D, tuple(parse_int(c) for c in s.get("chi", ()))))
            out["scaffolding"] = Scaffolding(P, sh, struts)
    return out


def problem_to_json(P, shape=None, shape_name=None, scaffolding=None, palp_id=None) -> dict:
    doc = {"polytope": {"vertices": jsonable(P.vertices)}}
    if palp_id is not None:
        doc["palp_id"] = palp_id
    if shape is not None:
        doc["shape"] = shape_name
        doc["nbar_basis"] = jsonable(shape.splitting.nbar)
        doc["nu_basis"] = jsonable(shape.splitting.nu)
    if scaffolding is not None:
        doc["struts"] = [{"D": jsonable(s.D.coeffs), "chi": jsonable(s.chi)} for s in scaffolding.struts]
    return doc


# stage serializers ---------------------------------------------------------

def crack_json(rep, fan) -> dict:
    w = None
    if rep.witness is not None:
        sigma, v, T = rep.witness
        w = {"cone": sorted(sigma), "vertex": jsonable(v), "tangent_cone": jsonable(T)}
    return {
        "status": "ok",
        "cracked": rep.verdict,
        "pieces": rep.n_pieces,
        "fan": jsonable(fan),
        "piece_vertices": [jsonable(Q.vertices) for _, Q in rep.pieces],
        "witness": w,
    }


def fullness_json(rep) -> dict:
    return {
        "full": rep.verdict,
        "vertical_faces": [jsonable(E.vertices) for E in rep.vertical],
        "covering": jsonable(rep.covering),
    }


def search_json(cert) -> dict:
    return {
        "found": cert.found,
        "vertical_faces": jsonable(cert.vertical),
        "groups": jsonable(cert.groups),
        "candidates": cert.n_candidates,
        "signatures": jsonable(cert.signatures),
        "faces_without_candidate": jsonable(cert.faces_without_candidate),
        "nodes": cert.nodes,
    }


def smooth_json(rep) -> dict:
    return {
        "smooth": rep.verdict,
        "smooth_at_vertices": rep.vertex_verdict,
        "vertex_cones": [
            {"vertex": jsonable(v), "iota": jsonable(y), "cone": jsonable(C), "unimodular": ok}
            for v, y, C, ok in rep.vertex_cones
        ],
        "cracked": rep.crack.verdict,
        "full": None if rep.full is None else rep.full.verdict,
    }


def ambient_json(model, smooth=None) -> dict:
    d = {
        "status": "ok",
        "dim": model.dim,
        "Q_vertices": jsonable(model.Q.vertices),
        "rays": jsonable(model.fan.rays),
        "ray_kinds": [[f"{k}{i}" for k, i in kinds] for kinds in model.ray_kind],
        "theta": jsonable(model.theta),
        "coker_theta": jsonable(model.coker_theta()),
    }
    if smooth is not None:
        d.update(smooth_json(smooth))
    return d


def ci_json(ci) -> dict:
    return {
        "status": "ok",
        "groups": jsonable(ci.groups),
        "exponents": jsonable(ci.exponents),
        "L": [jsonable(L.coeffs) for L in ci.L],
        "classes": jsonable(ci.classes),
        "multidegrees": jsonable(ci.multidegrees),
        "degenerate": ci.degenerate,
    }


def slab_json(s) -> dict:
    from .ci import f1_class, is_f1

    stratum = None
    if s.stratum_fan is not None:
        stratum = {"fan": jsonable(s.stratum_fan), "cone": jsonable(s.stratum_cone)}
        if is_f1(s.stratum_fan):
            stratum["type"] = "F1"
            if s.divisor is not None:
                stratum["divisor_class_hE"] = jsonable(f1_class(s.divisor))
    return {
        "wall": sorted(s.wall),
        "factor": s.factor,
        "polytope": jsonable(s.polytope.vertices),
        "labels": jsonable(s.labels),
        "stratum": stratum,
        "divisor": None if s.divisor is None else jsonable(s.divisor.coeffs),
        "induced": None if s.induced is None else jsonable(s.induced.coeffs),
        "image": jsonable(s.sections),
        "image_dim": s.image_dim,
        "h0": s.h0,
        "basepoint_free": s.bpf,
    }


def anticanonical_json(rep) -> dict:
    return {
        "status": "ok",
        "D_S": jsonable(rep.divisor.coeffs),
        "class": jsonable(rep.klass),
        "minus_K": jsonable(rep.minus_k),
        "identity": rep.identity,
    }


def census_json(c) -> dict:
    return {
        "status": "ok",
        "counts": c["counts"],
        "cones": [{"rays": jsonable(r), "type": t, "index": i} for r, t, i in c["cones"]],
    }


def error_json(exc) -> dict:
    d = {"status": "error", "error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ScaffoldingError):
        d["code"] = exc.code
        d["witness"] = _safe(exc.witness)
    if isinstance(exc, TheoremViolation) and exc.certificates is not None:
        cert = exc.certificates
        d["certificates"] = smooth_json(cert) if hasattr(cert, "vertex_cones") else _safe(cert)
    return d


def _safe(x):
    try:
        return jsonable(x)
    except TypeError:
        return repr(x)


STAGES = ("cracked", "scaffolding", "ambient", "ci", "slabs", "positivity", "anticanonical", "census")


def new_report(problem: dict) -> dict:
    verts = problem["polytope"]["vertices"]
    rep = {
        "schema": SCHEMA,
        "input": {"sha256": digest(verts), "palp_id": problem.get("palp_id")},
        "problem": problem,
        "stages": {k: {"status": "skipped"} for k in STAGES},
    }
    return rep


def load_report(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise CracklatError("not a cracklat report")
    return doc
