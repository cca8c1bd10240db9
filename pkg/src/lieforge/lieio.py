"""Text formats for algebras (.lie) and graphs (.graph).

.lie grammar (1-based indices, '#' comments, blank lines ignored):

    dim N
    basis name1 ... nameN          # optional
    [i,j] = c1*k1 + c2*k2 + ...    # i < j; c rational "p" or "p/q"

Unspecified pairs are zero.  Emission is canonical: pairs in
lexicographic order, terms by target index, rationals without spaces,
so parse(emit(L)) reproduces L byte for byte.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .catalog import GraphSpec
from .core import LieAlgebra, default_names
from .errors import ParseError
from .linalg import vec_is_zero

_TERM_RE = re.compile(r"^(?P<coef>[+-]?\d+(?:/\d+)?)\*(?P<target>\d+)$")
_PAIR_RE = re.compile(r"^\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*=\s*(.*)$")


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def parse_rational(text: str, lineno: int | None = None) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ParseError(f"malformed rational {text!r}", lineno)
    return Fraction(text)


def parse_lie(text: str) -> LieAlgebra:
    dim: int | None = None
    names: tuple[str, ...] | None = None
    table: dict[tuple[int, int], list] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("dim"):
            if dim is not None:
                raise ParseError("duplicate dim line", lineno)
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise ParseError("expected 'dim N' with N >= 1", lineno)
            dim = int(parts[1])
            continue
        if line.startswith("basis"):
            if dim is None:
                raise ParseError("basis line before dim", lineno)
            if names is not None:
                raise ParseError("duplicate basis line", lineno)
            given = line.split()[1:]
            if len(given) != dim:
                raise ParseError(
                    f"basis line has {len(given)} names, expected {dim}", lineno)
            if len(set(given)) != dim:
                raise ParseError("basis names must be distinct", lineno)
            names = tuple(given)
            continue
        match = _PAIR_RE.match(line)
        if not match:
            raise ParseError(f"unrecognized line {line!r}", lineno)
        if dim is None:
            raise ParseError("bracket line before dim", lineno)
        i, j = int(match.group(1)), int(match.group(2))
        if i == j:
            raise ParseError(f"diagonal pair [{i},{j}]", lineno)
        if not (1 <= i < j <= dim):
            raise ParseError(
                f"pair [{i},{j}] must satisfy 1 <= i < j <= {dim}", lineno)
        key = (i - 1, j - 1)
        if key in table:
            raise ParseError(f"duplicate pair [{i},{j}]", lineno)
        value = [Fraction(0)] * dim
        body = match.group(3).strip()
        if body != "0":
            for term in _split_terms(body, lineno):
                tmatch = _TERM_RE.match(re.sub(r"\s+", "", term))
                if not tmatch:
                    raise ParseError(f"malformed term {term.strip()!r}", lineno)
                coef = parse_rational(tmatch.group("coef"), lineno)
                target = int(tmatch.group("target"))
                if not (1 <= target <= dim):
                    raise ParseError(f"target index {target} out of range", lineno)
                value[target - 1] += coef
        table[key] = value
    if dim is None:
        raise ParseError("missing dim line")
    return LieAlgebra(dim, table, names=names)


def _split_terms(body: str, lineno: int) -> list[str]:
    """Split 'c1*k1 + c2*k2 - c3*k3' into signed terms."""
    out = []
    current = ""
    for ch in body:
        if ch in "+-" and current.strip() and current.rstrip()[-1] not in "+-*/":
            out.append(current)
            current = "-" if ch == "-" else ""
        else:
            current += ch
    if current.strip():
        out.append(current)
    if not out:
        raise ParseError("empty bracket value", lineno)
    return out


def _format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def emit_lie(L: LieAlgebra) -> str:
    lines = [f"dim {L.dim}"]
    if tuple(L.names) != default_names(L.dim):
        lines.append("basis " + " ".join(L.names))
    for (i, j) in sorted(L.table):
        value = L.table[(i, j)]
        if vec_is_zero(value):
            continue
        terms = [f"{_format_rational(c)}*{t + 1}"
                 for t, c in enumerate(value) if c != 0]
        lines.append(f"[{i + 1},{j + 1}] = " + " + ".join(terms))
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> GraphSpec:
    vertices: int | None = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertices":
            if vertices is not None:
                raise ParseError("duplicate vertices line", lineno)
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise ParseError("expected 'vertices M' with M >= 1", lineno)
            vertices = int(parts[1])
        elif parts[0] == "edge":
            if vertices is None:
                raise ParseError("edge line before vertices", lineno)
            if len(parts) != 3 or not parts[1].isdigit() or not parts[2].isdigit():
                raise ParseError("expected 'edge i j'", lineno)
            i, j = int(parts[1]), int(parts[2])
            if not (1 <= i < j <= vertices):
                raise ParseError(
                    f"edge ({i},{j}) must satisfy 1 <= i < j <= {vertices}", lineno)
            if (i, j) in edges:
                raise ParseError(f"duplicate edge ({i},{j})", lineno)
            edges.append((i, j))
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno)
    if vertices is None:
        raise ParseError("missing vertices line")
    return GraphSpec(vertices, tuple(edges))


def emit_graph(g: GraphSpec) -> str:
    lines = [f"vertices {g.vertex_count}"]
    lines += [f"edge {i} {j}" for (i, j) in g.edges]
    return "\n".join(lines) + "\n"
