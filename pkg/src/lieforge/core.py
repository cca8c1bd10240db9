"""Lie algebras as structure constants, plus the multilinear calculus.

A LieAlgebra stores the bracket values mu(e_i, e_j) for i < j only
(antisymmetry is structural), each as an exact rational vector.  The
companion MultilinearMap type carries the composition calculus used by
the cohomology constraints: (phi o psi)(x_1, ..) = phi(psi(leading
args), trailing args), cyclic sums of trilinear maps, and the iterated
bracket powers mu^k (left-normed, arity k+1) and mu^(k) (arity 2^k).
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    DimensionMismatchError,
    InvalidAlgebraError,
    NotAnIdealError,
    ResourceCapError,
)
from .linalg import (
    Matrix,
    Subspace,
    Vector,
    vec_add,
    vec_is_zero,
    vec_scale,
    vector,
    zero_vector,
)

DEFAULT_CAP = 200_000


def coordinate_cap() -> int:
    """Configured guard on exact-elimination problem sizes."""
    raw = os.environ.get("LIEFORGE_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise ResourceCapError(f"LIEFORGE_CAP is not an integer: {raw!r}")


def check_cap(count: int, what: str):
    cap = coordinate_cap()
    if count > cap:
        raise ResourceCapError(
            f"{what} needs {count} coordinates, above the cap of {cap}"
            " (set LIEFORGE_CAP to raise it)")


def default_names(n: int) -> tuple[str, ...]:
    return tuple(f"e{i + 1}" for i in range(n))


class JacobiReport(NamedTuple):
    ok: bool
    violation: tuple[int, int, int] | None
    value: Vector | None


class LieAlgebra:
    """Finite-dimensional Lie algebra over Q given by structure constants.

    ``table`` maps ordered pairs (i, j) with i < j to the coordinate
    vector of mu(e_i, e_j); absent pairs are zero.  Instances are
    immutable and safe to share.  ``degrees`` optionally records an
    adapted grading (one positive integer per basis vector) for
    generated algebras.
    """

    __slots__ = ("dim", "names", "table", "degrees")

    def __init__(self, dim: int, table: dict, names: Sequence[str] | None = None,
                 degrees: Sequence[int] | None = None):
        clean: dict[tuple[int, int], Vector] = {}
        for (i, j), value in table.items():
            if not (0 <= i < j < dim):
                raise DimensionMismatchError(
                    f"table key ({i},{j}) out of range for dimension {dim}")
            v = vector(value)
            if len(v) != dim:
                raise DimensionMismatchError(
                    f"table value for ({i},{j}) has length {len(v)}, expected {dim}")
            if not vec_is_zero(v):
                clean[(i, j)] = v
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "table", clean)
        object.__setattr__(self, "names",
                           tuple(names) if names is not None else default_names(dim))
        if len(self.names) != dim:
            raise DimensionMismatchError("wrong number of basis names")
        object.__setattr__(self, "degrees",
                           tuple(degrees) if degrees is not None else None)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("LieAlgebra is immutable")

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, {len(self.table)} nonzero pairs)"

    def fingerprint(self):
        """Hashable identity of the structure table (used for caching)."""
        return (self.dim, tuple(sorted(self.table.items())))

    def bracket_basis(self, i: int, j: int) -> Vector:
        """mu(e_i, e_j) for arbitrary i, j."""
        if i == j:
            return zero_vector(self.dim)
        if i < j:
            return self.table.get((i, j), zero_vector(self.dim))
        v = self.table.get((j, i))
        return vec_scale(Fraction(-1), v) if v is not None else zero_vector(self.dim)

    def bracket(self, x: Sequence, y: Sequence) -> Vector:
        """Bilinear extension of the table: mu(x, y)."""
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatchError("bracket arguments must have the algebra's dimension")
        acc = [Fraction(0)] * self.dim
        for (i, j), value in self.table.items():
            c = x[i] * y[j] - x[j] * y[i]
            if c != 0:
                for t, e in enumerate(value):
                    if e != 0:
                        acc[t] += c * e
        return tuple(acc)

    def bracket_vec_basis(self, x: Sequence, j: int) -> Vector:
        """mu(x, e_j) for a vector x; linear in x."""
        acc = [Fraction(0)] * self.dim
        for i, c in enumerate(x):
            if c != 0 and i != j:
                for t, e in enumerate(self.bracket_basis(i, j)):
                    if e != 0:
                        acc[t] += c * e
        return tuple(acc)

    def validate(self) -> JacobiReport:
        """Check the Jacobi identity on all basis triples i < j < k."""
        for i, j, k in itertools.combinations(range(self.dim), 3):
            s = self.bracket(self.bracket_basis(i, j), unit(self.dim, k))
            s = vec_add(s, self.bracket(self.bracket_basis(j, k), unit(self.dim, i)))
            s = vec_add(s, self.bracket(self.bracket_basis(k, i), unit(self.dim, j)))
            if not vec_is_zero(s):
                return JacobiReport(False, (i, j, k), s)
        return JacobiReport(True, None, None)

    def require_valid(self):
        report = self.validate()
        if not report.ok:
            raise InvalidAlgebraError(
                f"Jacobi identity fails on basis triple {report.violation}",
                report.violation)

    def adjoint(self, x: Sequence) -> Matrix:
        """Matrix of ad_x : y -> mu(x, y) in the standard basis."""
        cols = [self.bracket_vec_basis(x, j) for j in range(self.dim)]
        return Matrix.from_columns(cols)

    def adjoint_matrices(self) -> list[Matrix]:
        return [self.adjoint(unit(self.dim, i)) for i in range(self.dim)]

    def mu_map(self) -> "MultilinearMap":
        values = {key: v for key, v in self.table.items()}
        return MultilinearMap(2, self.dim, values, alternating=True)


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


class MultilinearMap:
    """A d-multilinear map Q^n x ... x Q^n -> Q^n stored on basis tuples.

    Alternating maps keep only strictly increasing key tuples; other
    maps store every nonzero basis tuple.
    """

    __slots__ = ("arity", "dim", "values", "alternating")

    def __init__(self, arity: int, dim: int, values: dict, alternating: bool = False):
        clean = {}
        for key, v in values.items():
            v = vector(v)
            if alternating and list(key) != sorted(set(key)):
                raise ValueError("alternating maps store strictly increasing tuples")
            if not vec_is_zero(v):
                clean[tuple(key)] = v
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "values", clean)
        object.__setattr__(self, "alternating", alternating)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("MultilinearMap is immutable")

    def get(self, key: tuple[int, ...]) -> Vector:
        """Value on a basis tuple, resolving alternating sign conventions."""
        if not self.alternating:
            return self.values.get(key, zero_vector(self.dim))
        if len(set(key)) != len(key):
            return zero_vector(self.dim)
        order = tuple(sorted(key))
        v = self.values.get(order)
        if v is None:
            return zero_vector(self.dim)
        return v if _permutation_sign(key, order) == 1 else vec_scale(Fraction(-1), v)

    def is_zero(self) -> bool:
        return not self.values

    def evaluate(self, vectors: Sequence[Sequence]) -> Vector:
        """Multilinear extension on arbitrary vectors."""
        if len(vectors) != self.arity:
            raise DimensionMismatchError(f"expected {self.arity} arguments")
        supports = [[(i, c) for i, c in enumerate(v) if c != 0] for v in vectors]
        acc = [Fraction(0)] * self.dim
        for combo in itertools.product(*supports):
            key = tuple(i for i, _ in combo)
            coef = Fraction(1)
            for _, c in combo:
                coef *= c
            val = self.get(key)
            if not vec_is_zero(val):
                for t, e in enumerate(val):
                    if e != 0:
                        acc[t] += coef * e
        return tuple(acc)

    def eval_mixed(self, lead: Sequence, rest: tuple[int, ...]) -> Vector:
        """Evaluate with one arbitrary leading vector and basis-tail indices."""
        acc = [Fraction(0)] * self.dim
        for i, c in enumerate(lead):
            if c != 0:
                val = self.get((i,) + rest)
                if not vec_is_zero(val):
                    for t, e in enumerate(val):
                        if e != 0:
                            acc[t] += c * e
        return tuple(acc)

    def equal_pointwise(self, other: "MultilinearMap") -> bool:
        if (self.arity, self.dim) != (other.arity, other.dim):
            return False
        for key in itertools.product(range(self.dim), repeat=self.arity):
            if self.get(key) != other.get(key):
                return False
        return True


def _permutation_sign(key: tuple[int, ...], order: tuple[int, ...]) -> int:
    perm = [order.index(k) for k in key]
    sign = 1
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                sign = -sign
    return sign


def compose(phi: MultilinearMap, psi: MultilinearMap) -> MultilinearMap:
    """phi o psi: apply psi to the leading arity(psi) arguments.

    (phi o psi)(x_1, ..., x_{i+j-1}) = phi(psi(x_1, .., x_j), x_{j+1}, ..).
    """
    if phi.dim != psi.dim:
        raise DimensionMismatchError("maps over different spaces")
    n = phi.dim
    arity = phi.arity + psi.arity - 1
    check_cap(n ** arity * n, f"composition of arity {arity}")
    values = {}
    for key in itertools.product(range(n), repeat=arity):
        inner = psi.get(key[:psi.arity])
        if vec_is_zero(inner):
            continue
        v = phi.eval_mixed(inner, key[psi.arity:])
        if not vec_is_zero(v):
            values[key] = v
    return MultilinearMap(arity, n, values)


def cyclic_sum(t: MultilinearMap) -> MultilinearMap:
    """Pointwise cyclic symmetrization of a trilinear map."""
    if t.arity != 3:
        raise DimensionMismatchError("cyclic_sum is defined for arity-3 maps")
    n = t.dim
    values = {}
    for key in itertools.product(range(n), repeat=3):
        x, y, z = key
        v = vec_add(vec_add(t.get((x, y, z)), t.get((y, z, x))), t.get((z, x, y)))
        if not vec_is_zero(v):
            values[key] = v
    return MultilinearMap(3, n, values)


def functional_product(functionals: Sequence[Sequence], target: Sequence) -> MultilinearMap:
    """The map (x_1, .., x_d) -> f_1(x_1)...f_d(x_d) * target."""
    fs = [vector(f) for f in functionals]
    target = vector(target)
    n = len(target)
    values = {}
    for key in itertools.product(range(n), repeat=len(fs)):
        c = Fraction(1)
        for f, i in zip(fs, key):
            c *= f[i]
            if c == 0:
                break
        if c != 0:
            values[key] = vec_scale(c, target)
    return MultilinearMap(len(fs), n, values)


def bracket_power(L: LieAlgebra, k: int) -> MultilinearMap:
    """Left-normed power mu^k of arity k+1; mu^1 = mu."""
    if k < 1:
        raise ValueError("k must be >= 1")
    acc = L.mu_map()
    for _ in range(k - 1):
        acc = compose(L.mu_map(), acc)
    return acc


def derived_power(L: LieAlgebra, k: int) -> MultilinearMap:
    """mu^(k) of arity 2^k: mu^(k) = mu(mu^(k-1), mu^(k-1)); mu^(1) = mu."""
    if k < 1:
        raise ValueError("k must be >= 1")
    n = L.dim
    current = L.mu_map()
    for level in range(2, k + 1):
        arity = 2 ** level
        check_cap(n ** arity * n, f"derived power of arity {arity}")
        half = arity // 2
        values = {}
        for key in itertools.product(range(n), repeat=arity):
            left = current.get(key[:half])
            if vec_is_zero(left):
                continue
            right = current.get(key[half:])
            if vec_is_zero(right):
                continue
            v = L.bracket(left, right)
            if not vec_is_zero(v):
                values[key] = v
        current = MultilinearMap(arity, n, values)
    return current


class SeriesResult(NamedTuple):
    lower_central: tuple[Subspace, ...]
    derived: tuple[Subspace, ...]


def _span_brackets_with_algebra(L: LieAlgebra, s: Subspace) -> Subspace:
    vectors = []
    for row in s.basis.entries:
        for j in range(L.dim):
            v = L.bracket_vec_basis(row, j)
            if not vec_is_zero(v):
                vectors.append(v)
    return Subspace.from_vectors(L.dim, vectors)


def _span_brackets_internal(L: LieAlgebra, s: Subspace) -> Subspace:
    vectors = []
    rows = s.basis.entries
    for a in range(len(rows)):
        for b in range(a + 1, len(rows)):
            v = L.bracket(rows[a], rows[b])
            if not vec_is_zero(v):
                vectors.append(v)
    return Subspace.from_vectors(L.dim, vectors)


def _chain(first: Subspace, step) -> tuple[Subspace, ...]:
    out = [first]
    while True:
        nxt = step(out[-1])
        if nxt.equal(out[-1]):
            break
        out.append(nxt)
    return tuple(out)


def series(L: LieAlgebra) -> SeriesResult:
    """Lower central and derived series, truncated at stabilization.

    lower_central[0] is the whole algebra; the last listed term is the
    first one that repeats (so nilpotent algebras end with the zero
    subspace listed once).
    """
    full = Subspace.full(L.dim)
    lc = _chain(full, lambda s: _span_brackets_with_algebra(L, s))
    dv = _chain(full, lambda s: _span_brackets_internal(L, s))
    return SeriesResult(lc, dv)


def lower_central_dims(L: LieAlgebra) -> tuple[int, ...]:
    return tuple(s.dim for s in series(L).lower_central)


def derived_dims(L: LieAlgebra) -> tuple[int, ...]:
    return tuple(s.dim for s in series(L).derived)


def nilpotency_class(L: LieAlgebra) -> int | None:
    """Smallest k with g^{k+1} = 0, or None when the series stabilizes nonzero."""
    chain = series(L).lower_central
    if chain[-1].is_zero():
        return len(chain) - 1
    return None


def solvability_class(L: LieAlgebra) -> int | None:
    chain = series(L).derived
    if chain[-1].is_zero():
        return len(chain) - 1
    return None


def commutator(L: LieAlgebra) -> Subspace:
    """[g, g] as a subspace."""
    return Subspace.from_vectors(
        L.dim, [v for v in L.table.values()])


def center(L: LieAlgebra) -> Subspace:
    """{x : mu(x, .) = 0}, computed as a nullspace."""
    rows = []
    for j in range(L.dim):
        for t in range(L.dim):
            rows.append([L.bracket_basis(i, j)[t] for i in range(L.dim)])
    from .linalg import nullspace
    return nullspace(Matrix(rows))


def centralizer(L: LieAlgebra, s: Subspace) -> Subspace:
    """{x : mu(x, v) = 0 for all v in s}."""
    if s.ambient_dim != L.dim:
        raise DimensionMismatchError("subspace not in the algebra's space")
    if s.is_zero():
        return Subspace.full(L.dim)
    rows = []
    for v in s.basis.entries:
        for t in range(L.dim):
            rows.append([-L.bracket_vec_basis(v, i)[t] for i in range(L.dim)])
    from .linalg import nullspace
    return nullspace(Matrix(rows))


def adjoint_restricted(L: LieAlgebra, h: Sequence, s: Subspace) -> Matrix:
    """Matrix of ad_h restricted to s, in s's canonical basis.

    Requires h in s and s invariant under ad_h.
    """
    if not s.contains(h):
        raise NotAnIdealError("element does not lie in the subspace")
    rows = s.basis.entries
    pivots = [next(j for j, e in enumerate(r) if e != 0) for r in rows]
    cols = []
    for r in rows:
        image = L.bracket(vector(h), r)
        coords = [image[p] for p in pivots]
        rebuilt = zero_vector(L.dim)
        for c, row in zip(coords, rows):
            rebuilt = vec_add(rebuilt, vec_scale(c, row))
        if rebuilt != image:
            raise NotAnIdealError("subspace is not invariant under ad_h")
        cols.append(coords)
    return Matrix.from_columns(cols) if cols else Matrix.zero(0, 0)


def killing_form(L: LieAlgebra) -> Matrix:
    """B[i][j] = tr(ad_i ad_j)."""
    ads = L.adjoint_matrices()
    return Matrix([[ads[i].mul(ads[j]).trace() for j in range(L.dim)]
                   for i in range(L.dim)])


def direct_sum(L1: LieAlgebra, L2: LieAlgebra) -> LieAlgebra:
    n1, n2 = L1.dim, L2.dim
    n = n1 + n2
    table = {}
    for (i, j), v in L1.table.items():
        table[(i, j)] = tuple(v) + zero_vector(n2)
    for (i, j), v in L2.table.items():
        table[(i + n1, j + n1)] = zero_vector(n1) + tuple(v)
    degrees = None
    if L1.degrees is not None and L2.degrees is not None:
        degrees = L1.degrees + L2.degrees
    return LieAlgebra(n, table, names=tuple(L1.names) + tuple(L2.names),
                      degrees=degrees)


def is_ideal(L: LieAlgebra, s: Subspace) -> bool:
    for v in s.basis.entries:
        for j in range(L.dim):
            if not s.contains(L.bracket_vec_basis(v, j)):
                return False
    return True


def quotient(L: LieAlgebra, ideal: Subspace) -> LieAlgebra:
    """Quotient algebra; coset representatives are the non-pivot coordinates."""
    if not is_ideal(L, ideal):
        raise NotAnIdealError("subspace is not an ideal")
    pivots = [next(j for j, e in enumerate(r) if e != 0) for r in ideal.basis.entries]
    reps = [c for c in range(L.dim) if c not in pivots]
    m = len(reps)

    def project(x: Vector) -> Vector:
        residue = list(x)
        for row in ideal.basis.entries:
            lead = next(j for j, e in enumerate(row) if e != 0)
            f = residue[lead]
            if f != 0:
                for j in range(L.dim):
                    residue[j] -= f * row[j]
        return tuple(residue[c] for c in reps)

    table = {}
    for a in range(m):
        for b in range(a + 1, m):
            v = project(L.bracket_basis(reps[a], reps[b]))
            if not vec_is_zero(v):
                table[(a, b)] = v
    return LieAlgebra(m, table, names=tuple(L.names[c] for c in reps))


def change_of_basis(L: LieAlgebra, p: Matrix) -> LieAlgebra:
    """The orbit action g.mu with g = p: mu'(x, y) = p mu(p^-1 x, p^-1 y)."""
    if p.rows != L.dim or p.cols != L.dim:
        raise DimensionMismatchError("change-of-basis matrix has wrong shape")
    p_inv = p.inverse()
    cols = [p_inv.column(j) for j in range(L.dim)]
    table = {}
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            v = p.apply(L.bracket(cols[i], cols[j]))
            if not vec_is_zero(v):
                table[(i, j)] = v
    return LieAlgebra(L.dim, table, names=L.names)


class StructurePredicates(NamedTuple):
    is_perfect: bool
    has_abelian_factor: bool


def structure_predicates(L: LieAlgebra) -> StructurePredicates:
    """is_perfect: [g,g] = g; has_abelian_factor: Z(g) not inside [g,g]."""
    comm = commutator(L)
    perfect = comm.dim == L.dim
    z = center(L)
    abelian_factor = not comm.contains_subspace(z)
    return StructurePredicates(perfect, abelian_factor)


class InvariantVector(NamedTuple):
    """Isomorphism invariants; differing tuples certify non-isomorphism."""

    dim: int
    lower_central: tuple[int, ...]
    derived: tuple[int, ...]
    center_dim: int
    nilpotency_class: int | None
    solvability_class: int | None
    is_perfect: bool
    has_abelian_factor: bool
    killing_rank: int


def invariant_vector(L: LieAlgebra) -> InvariantVector:
    chain = series(L)
    lc = tuple(s.dim for s in chain.lower_central)
    dv = tuple(s.dim for s in chain.derived)
    nil = len(lc) - 1 if chain.lower_central[-1].is_zero() else None
    sol = len(dv) - 1 if chain.derived[-1].is_zero() else None
    preds = structure_predicates(L)
    return InvariantVector(
        dim=L.dim,
        lower_central=lc,
        derived=dv,
        center_dim=center(L).dim,
        nilpotency_class=nil,
        solvability_class=sol,
        is_perfect=preds.is_perfect,
        has_abelian_factor=preds.has_abelian_factor,
        killing_rank=killing_form(L).rank(),
    )


@dataclass(frozen=True)
class BasisDecomposition:
    """g = <a1, a2> + h with the dual functionals of the adapted basis.

    ``p`` has columns (a1, a2, h-basis); its inverse rows are the dual
    functionals a1*, a2*, h_j*.  ``projection_h`` is id - a1 a1* - a2 a2*.
    """

    a1: Vector
    a2: Vector
    h: Subspace
    p: Matrix
    p_inv: Matrix

    @classmethod
    def build(cls, a1: Sequence, a2: Sequence,
              h_vectors: Iterable[Sequence]) -> "BasisDecomposition":
        a1 = vector(a1)
        a2 = vector(a2)
        n = len(a1)
        h_rows = [vector(v) for v in h_vectors]
        cols = [a1, a2] + h_rows
        if len(cols) != n:
            raise DimensionMismatchError(
                f"decomposition has {len(cols)} vectors in dimension {n}")
        p = Matrix.from_columns(cols)
        p_inv = p.inverse()  # raises SingularMatrixError if not a direct sum
        h = Subspace.from_vectors(n, h_rows)
        return cls(a1=a1, a2=a2, h=h, p=p, p_inv=p_inv)

    @property
    def dim(self) -> int:
        return len(self.a1)

    def a1_dual(self) -> Vector:
        return self.p_inv.row(0)

    def a2_dual(self) -> Vector:
        return self.p_inv.row(1)

    def h_basis(self) -> tuple[Vector, ...]:
        return tuple(self.p.column(j) for j in range(2, self.dim))

    def projection_h(self) -> Matrix:
        n = self.dim
        a1s, a2s = self.a1_dual(), self.a2_dual()
        rows = []
        for t in range(n):
            rows.append([
                (Fraction(1) if t == c else Fraction(0))
                - self.a1[t] * a1s[c] - self.a2[t] * a2s[c]
                for c in range(n)])
        return Matrix(rows)


def adapted_basis(L: LieAlgebra) -> list[tuple[Vector, int]]:
    """Basis adapted to the lower central series, deepest layer first.

    Returns (vector, level) pairs where level i means the vector lies in
    g^i but not g^{i+1}; within each level the RREF basis rows of g^i
    are taken in order.  Deterministic given the structure table.
    """
    chain = series(L).lower_central
    terms = [s for s in chain if not s.is_zero()]
    out: list[tuple[Vector, int]] = []
    span: list[Vector] = []
    covered = Subspace.zero(L.dim)
    for level in range(len(terms), 0, -1):
        for row in terms[level - 1].basis.entries:
            if not covered.contains(row):
                span.append(row)
                covered = Subspace.from_vectors(L.dim, span)
                out.append((row, level))
    return out
