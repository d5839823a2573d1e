"""Reading and writing PALP integer matrices.

Grammar: an entry is a header line ``R C [comment]`` followed by ``R`` rows
of ``C`` integers.  Blank lines between entries and lines starting with
``#`` are ignored.  The smaller of R and C is the dimension; the vertices
run along the other axis.  A square header needs an explicit orientation.
A comment token of the form ``id:K`` sets the entry id.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import NotFanoError, PalpParseError
from .polytope import LatticePolytope


@dataclass(frozen=True)
class PalpMatrix:
    rows: int
    cols: int
    entries: tuple
    orientation: str  # "rows" (vertices are rows) or "columns"
    comment: str = ""
    line: int = 1

    @property
    def vertices(self) -> tuple:
        if self.orientation == "rows":
            return self.entries
        return tuple(zip(*self.entries))

    @property
    def dim(self) -> int:
        return min(self.rows, self.cols)

    @property
    def id(self) -> Optional[int]:
        for tok in self.comment.split():
            if tok.startswith("id:"):
                try:
                    return int(tok[3:])
                except ValueError:
                    return None
        return None


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise PalpParseError(f"non-integer entry in {' '.join(tokens)!r}", lineno)


def parse_palp_matrices(text: str, orientation: Optional[str] = None) -> list:
    if orientation not in (None, "rows", "columns"):
        raise ValueError("orientation must be 'rows' or 'columns'")
    lines = text.splitlines()
    out = []
    i = 0
    while i < len(lines):
        raw = lines[i].strip()
        if not raw or raw.startswith("#"):
            i += 1
            continue
        lineno = i + 1
        toks = raw.split()
        if len(toks) < 2:
            raise PalpParseError("header needs two integers", lineno)
        try:
            R, C = int(toks[0]), int(toks[1])
        except ValueError:
            raise PalpParseError(f"malformed header {raw!r}", lineno)
        if R <= 0 or C <= 0:
            raise PalpParseError("header counts must be positive", lineno)
        comment = " ".join(toks[2:])
        rows = []
        i += 1
        while len(rows) < R:
            if i >= len(lines):
                raise PalpParseError(f"expected {R} rows, found {len(rows)}", i)
            body = lines[i].strip()
            if not body:
                raise PalpParseError(f"expected {R} rows, found {len(rows)}", i + 1)
            vals = _ints(body.split(), i + 1)
            if len(vals) != C:
                raise PalpParseError(f"expected {C} entries, found {len(vals)}", i + 1)
            rows.append(tuple(vals))
            i += 1
        if orientation is not None:
            orient = orientation
        elif R > C:
            orient = "rows"
        elif C > R:
            orient = "columns"
        else:
            raise PalpParseError("square matrix: orientation is ambiguous", lineno)
        out.append(PalpMatrix(R, C, tuple(rows), orient, comment, lineno))
    return out


def to_polytope(m: PalpMatrix, fano: bool = False, reflexive: bool = False) -> LatticePolytope:
    V = m.vertices
    P = LatticePolytope.from_vertices(V, len(V[0]))
    if fano or reflexive:
        from .fan import _require_fano

        try:
            _require_fano(P)
        except NotFanoError as exc:
            raise PalpParseError(str(exc), m.line)
    if reflexive and not P.polar_dual().is_lattice:
        raise PalpParseError("polytope is not reflexive", m.line)
    return P


def parse_palp(text: str, orientation: Optional[str] = None, fano: bool = False, reflexive: bool = False) -> LatticePolytope:
    """Parse a single PALP matrix into a polytope."""
    ms = parse_palp_matrices(text, orientation)
    if len(ms) != 1:
        raise PalpParseError(f"expected one matrix, found {len(ms)}", 1)
    return to_polytope(ms[0], fano, reflexive)


def parse_palp_all(text: str, orientation: Optional[str] = None) -> list:
    """All entries as ``(id, PalpMatrix)``; entries without an id get their position."""
    return [(m.id if m.id is not None else k, m) for k, m in enumerate(parse_palp_matrices(text, orientation))]


def emit_palp(P: LatticePolytope, comment: str = "", orientation: str = "rows") -> str:
    V = [tuple(int(x) for x in v) for v in P.vertices]
    if orientation == "rows":
        head = f"{len(V)} {P.ambient_dim}"
        body = [" ".join(str(x) for x in v) for v in V]
    else:
        head = f"{P.ambient_dim} {len(V)}"
        body = [" ".join(str(v[j]) for v in V) for j in range(P.ambient_dim)]
    if comment:
        head += " " + comment
    return "\n".join([head] + body) + "\n"


def load_selected() -> list:
    """The bundled reflexive 3-polytopes used in the examples, as ``(id, polytope)``."""
    from importlib.resources import files

    text = files("cracklat.data").joinpath("ks3_selected.palp").read_text()
    return [(i, to_polytope(m)) for i, m in parse_palp_all(text)]
