"""Constructors for the algebra families used throughout: Heisenberg,
abelian, graph algebras, and a small registry of named examples.

Basis orders are pinned per entry so emitted tables are byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import LieAlgebra, center, commutator, structure_predicates
from .errors import DimensionMismatchError, LieforgeError
from .linalg import Vector, vec_is_zero, vector, zero_vector


def heisenberg(m: int) -> LieAlgebra:
    """h_m: basis x1, y1, ..., xm, ym, z with mu(x_i, y_i) = z."""
    if m < 1:
        raise LieforgeError("heisenberg(m) requires m >= 1")
    n = 2 * m + 1
    z = n - 1
    table = {}
    for i in range(m):
        table[(2 * i, 2 * i + 1)] = [1 if t == z else 0 for t in range(n)]
    names = []
    for i in range(m):
        names += [f"x{i + 1}", f"y{i + 1}"]
    names.append("z")
    degrees = [1] * (2 * m) + [2]
    return LieAlgebra(n, table, names=names, degrees=degrees)


def abelian(l: int) -> LieAlgebra:
    if l < 1:
        raise LieforgeError("abelian(l) requires l >= 1")
    return LieAlgebra(l, {}, degrees=[1] * l)


@dataclass(frozen=True)
class GraphSpec:
    """A simple graph: vertex count and duplicate-free edges (i, j), i < j.

    Vertices are 1-based to match the usual v_1, ..., v_m labeling.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for (i, j) in self.edges:
            if not (1 <= i < j <= self.vertex_count):
                raise DimensionMismatchError(
                    f"edge ({i},{j}) invalid for {self.vertex_count} vertices")
            if (i, j) in seen:
                raise DimensionMismatchError(f"duplicate edge ({i},{j})")
            seen.add((i, j))


def _edge_name(i: int, j: int) -> str:
    if i < 10 and j < 10:
        return f"a{i}{j}"
    return f"a{i}_{j}"


def graph_algebra(g: GraphSpec) -> LieAlgebra:
    """2-step nilpotent algebra of a graph: mu(v_i, v_j) = a_ij on edges."""
    m = g.vertex_count
    n = m + len(g.edges)
    table = {}
    for pos, (i, j) in enumerate(g.edges):
        target = m + pos
        table[(i - 1, j - 1)] = [1 if t == target else 0 for t in range(n)]
    names = [f"v{i + 1}" for i in range(m)] + [_edge_name(i, j) for i, j in g.edges]
    degrees = [1] * m + [2] * len(g.edges)
    return LieAlgebra(n, table, names=names, degrees=degrees)


def _table_from_brackets(n, names, entries) -> LieAlgebra:
    index = {name: i for i, name in enumerate(names)}
    table: dict[tuple[int, int], list] = {}
    for (a, b), combo in entries.items():
        i, j = index[a], index[b]
        value = [Fraction(0)] * n
        for name, coeff in combo:
            value[index[name]] += Fraction(coeff)
        sign = 1
        if i > j:
            i, j = j, i
            sign = -1
        table[(i, j)] = [sign * v for v in value]
    return LieAlgebra(n, table, names=names)


def sl2() -> LieAlgebra:
    """sl_2 in the basis a, b, c: [a,b] = 2b, [a,c] = -2c, [b,c] = a."""
    return _table_from_brackets(3, ("a", "b", "c"), {
        ("a", "b"): [("b", 2)],
        ("a", "c"): [("c", -2)],
        ("b", "c"): [("a", 1)],
    })


def sl2_semidirect_c2() -> LieAlgebra:
    """sl_2 acting on its 2-dimensional irreducible module; basis a..e."""
    return _table_from_brackets(5, ("a", "b", "c", "d", "e"), {
        ("a", "b"): [("b", 2)],
        ("a", "c"): [("c", -2)],
        ("b", "c"): [("a", 1)],
        ("a", "d"): [("d", 1)],
        ("a", "e"): [("e", -1)],
        ("b", "e"): [("d", 1)],
        ("c", "d"): [("e", 1)],
    })


def contraction_example() -> LieAlgebra:
    """The contraction of sl_2 with [a1, a2] set to zero.

    mu(a1, y) = 2a1 and mu(a2, y) = -2a2: the weights must be opposite,
    or the span of y has no valid codimension-2 complement (the
    functional identity a1*([a1,h]) + a2*([a2,h]) = 0 would fail and
    mu + t(a1*^a2* (x) y) would not be a Lie bracket).  Deforming along
    a1* ^ a2* (x) y restores [a1, a2] = t y, which is sl_2 for t != 0.
    """
    return _table_from_brackets(3, ("a1", "a2", "y"), {
        ("a1", "y"): [("a1", 2)],
        ("a2", "y"): [("a2", -2)],
    })


def aff1() -> LieAlgebra:
    """The 2-dimensional non-abelian algebra [x, y] = y."""
    return _table_from_brackets(2, ("x", "y"), {("x", "y"): [("y", 1)]})


def non_gh_example(h: LieAlgebra, f: Vector | None = None) -> LieAlgebra:
    """Extension of h by a1, a2 via a functional f killing [h, h].

    mu restricted to h is h's bracket; mu(a1, x) = f(x) a2 and
    mu(a2, x) = f(x) a1 for x in h; mu(a1, a2) = 0.  Requires h
    non-perfect with nontrivial center and f nonzero with f([h,h]) = 0.
    The resulting codimension-2 deformations are not of
    Grunewald-O'Halloran type.
    """
    preds = structure_predicates(h)
    if preds.is_perfect:
        raise LieforgeError("base of the extension must be non-perfect")
    if center(h).is_zero():
        raise LieforgeError("base of the extension must have nontrivial center")
    comm = commutator(h)
    if f is None:
        # First coordinate functional that kills the commutator.
        f = next((vector([1 if t == c else 0 for t in range(h.dim)])
                  for c in range(h.dim)
                  if all(row[c] == 0 for row in comm.basis.entries)), None)
        if f is None:
            raise LieforgeError("no coordinate functional vanishes on [h, h]")
    else:
        f = vector(f)
    if vec_is_zero(f):
        raise LieforgeError("functional must be nonzero")
    for row in comm.basis.entries:
        if sum(a * b for a, b in zip(f, row)) != 0:
            raise LieforgeError("functional must vanish on [h, h]")
    n = h.dim + 2
    table = {}
    for (i, j), v in h.table.items():
        table[(i + 2, j + 2)] = zero_vector(2) + tuple(v)
    for x in range(h.dim):
        if f[x] != 0:
            table[(0, x + 2)] = tuple(
                f[x] if t == 1 else Fraction(0) for t in range(n))
            table[(1, x + 2)] = tuple(
                f[x] if t == 0 else Fraction(0) for t in range(n))
    names = ("a1", "a2") + tuple(h.names)
    L = LieAlgebra(n, table, names=names)
    L.require_valid()
    return L


NAMED_BUILDERS = {
    "sl2": sl2,
    "sl2_sd_c2": sl2_semidirect_c2,
    "contraction_ex": contraction_example,
    "aff1": aff1,
    "non_gh_ex": lambda: non_gh_example(heisenberg(1)),
}


def named(name: str) -> LieAlgebra:
    """Look up a registry algebra; every entry passes the Jacobi check."""
    try:
        builder = NAMED_BUILDERS[name]
    except KeyError:
        known = ", ".join(sorted(NAMED_BUILDERS))
        raise LieforgeError(f"unknown catalog name {name!r} (known: {known})")
    L = builder()
    L.require_valid()
    return L


def catalog_names() -> list[str]:
    return sorted(NAMED_BUILDERS)
