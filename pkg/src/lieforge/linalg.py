"""Exact rational linear algebra: matrices, subspaces, dual numbers.

Scalars are ``fractions.Fraction`` throughout (aliased ``Rational``), so
every computation in the package is exact.  Vectors are plain tuples of
Fractions.  Subspaces are stored in canonical reduced row-echelon form,
which makes subspace equality a syntactic comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Sequence

from .errors import DimensionMismatchError, SingularMatrixError

Rational = Fraction

Vector = tuple[Fraction, ...]


def rat(value) -> Fraction:
    """Coerce ints, strings like ``p/q`` and Fractions to Fraction."""
    return Fraction(value)


def vector(entries: Iterable) -> Vector:
    return tuple(Fraction(e) for e in entries)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Fraction, v: Vector) -> Vector:
    return tuple(c * a for a in v)


def vec_is_zero(v: Vector) -> bool:
    return all(a == 0 for a in v)


def vec_dot(u: Vector, v: Vector) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


class Matrix:
    """Immutable dense matrix over the rationals."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        data = tuple(tuple(Fraction(e) for e in row) for row in entries)
        if data and any(len(row) != len(data[0]) for row in data):
            raise DimensionMismatchError("ragged rows in matrix literal")
        object.__setattr__(self, "entries", data)
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", len(data[0]) if data else 0)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "Matrix":
        cols = [tuple(Fraction(e) for e in c) for c in columns]
        if not cols:
            return cls([])
        n = len(cols[0])
        return cls([[c[i] for c in cols] for i in range(n)])

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(e) for e in row) for row in self.entries)
        return f"Matrix({self.rows}x{self.cols}: {body})"

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix([[self.entries[i][j] for i in range(self.rows)]
                       for j in range(self.cols)])

    def apply(self, v: Sequence) -> Vector:
        """Matrix-vector product (v as a column)."""
        if len(v) != self.cols:
            raise DimensionMismatchError(
                f"matrix has {self.cols} columns, vector has {len(v)} entries")
        return tuple(sum((row[j] * v[j] for j in range(self.cols)), Fraction(0))
                     for row in self.entries)

    def mul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatchError("inner dimensions do not match")
        ot = other.transpose()
        return Matrix([[vec_dot(r, c) for c in ot.entries] for r in self.entries])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return self.mul(other)

    def add(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError("matrix shapes differ")
        return Matrix([[a + b for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.entries, other.entries)])

    def scale(self, c) -> "Matrix":
        c = Fraction(c)
        return Matrix([[c * e for e in row] for row in self.entries])

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionMismatchError("trace of a non-square matrix")
        return sum((self.entries[i][i] for i in range(self.rows)), Fraction(0))

    def rank(self) -> int:
        return reduce(self).rank

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionMismatchError("determinant of a non-square matrix")
        work = [list(row) for row in self.entries]
        n = self.rows
        det = Fraction(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if work[r][col] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                work[col], work[piv] = work[piv], work[col]
                det = -det
            det *= work[col][col]
            inv = 1 / work[col][col]
            for r in range(col + 1, n):
                f = work[r][col] * inv
                if f == 0:
                    continue
                for c in range(col, n):
                    work[r][c] -= f * work[col][c]
        return det

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionMismatchError("inverse of a non-square matrix")
        n = self.rows
        work = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)]
                for i, row in enumerate(self.entries)]
        reduced, _, pivots = _rref_in_place(work)
        if sum(1 for p in pivots if p < n) != n:
            raise SingularMatrixError("matrix is singular")
        return Matrix([row[n:] for row in reduced])


class RrefResult(NamedTuple):
    rref: Matrix
    rank: int
    pivots: tuple[int, ...]


def _rref_in_place(work: list[list[Fraction]]):
    """Gauss-Jordan to canonical RREF; returns (rows, rank, pivot cols)."""
    n_rows = len(work)
    n_cols = len(work[0]) if work else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = 1 / work[r][c]
        work[r] = [e * inv for e in work[r]]
        for i in range(n_rows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return work, r, tuple(pivots)


def reduce(m: Matrix) -> RrefResult:
    """Canonical reduced row-echelon form of ``m`` with rank and pivots."""
    work = [list(row) for row in m.entries]
    rows, rank, pivots = _rref_in_place(work)
    return RrefResult(Matrix(rows), rank, pivots)


class Subspace:
    """A subspace of Q^n held as a canonical RREF basis (no zero rows).

    Equal subspaces have byte-identical basis matrices, so ``equal`` is
    entry-wise comparison.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: Matrix, _canonical: bool = False):
        if not _canonical:
            raise TypeError("use Subspace.from_vectors / zero / full")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Subspace is immutable")

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        rows = [tuple(Fraction(e) for e in v) for v in vectors]
        for v in rows:
            if len(v) != ambient_dim:
                raise DimensionMismatchError(
                    f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        if not rows:
            return cls.zero(ambient_dim)
        res = reduce(Matrix(rows))
        kept = [res.rref.entries[i] for i in range(res.rank)]
        return cls(ambient_dim, Matrix(kept) if kept else Matrix.zero(0, ambient_dim),
                   _canonical=True)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Matrix.zero(0, ambient_dim), _canonical=True)

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Matrix.identity(ambient_dim), _canonical=True)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def basis_vectors(self) -> tuple[Vector, ...]:
        return self.basis.entries

    def is_zero(self) -> bool:
        return self.basis.rows == 0

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of Q^{self.ambient_dim})"

    def _check_ambient(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError(
                f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError("vector/ambient dimension mismatch")
        residue = [Fraction(e) for e in v]
        # Basis is RREF: eliminate pivot coordinates one row at a time.
        for row in self.basis.entries:
            lead = next(j for j, e in enumerate(row) if e != 0)
            f = residue[lead]
            if f != 0:
                for j in range(lead, self.ambient_dim):
                    residue[j] -= f * row[j]
        return all(e == 0 for e in residue)

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check_ambient(other)
        return all(self.contains(r) for r in other.basis.entries)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        return Subspace.from_vectors(
            self.ambient_dim, list(self.basis.entries) + list(other.basis.entries))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.ambient_dim)
        # x in S∩T  <=>  x = a·S_rows = b·T_rows; solve [S^T | -T^T](a,b)=0.
        s_rows, t_rows = self.basis.entries, other.basis.entries
        n = self.ambient_dim
        system = Matrix([[s_rows[i][r] for i in range(len(s_rows))]
                         + [-t_rows[j][r] for j in range(len(t_rows))]
                         for r in range(n)])
        combos = nullspace(system)
        vectors = []
        for combo in combos.basis.entries:
            v = zero_vector(n)
            for i, row in enumerate(s_rows):
                v = vec_add(v, vec_scale(combo[i], row))
            vectors.append(v)
        return Subspace.from_vectors(n, vectors)

    def equal(self, other: "Subspace") -> bool:
        self._check_ambient(other)
        return self.basis.entries == other.basis.entries

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace)
                and self.ambient_dim == other.ambient_dim
                and self.basis.entries == other.basis.entries)

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis.entries))


def nullspace(m: Matrix) -> Subspace:
    """The kernel {x : m x = 0} as a subspace of the column space."""
    res = reduce(m)
    pivots = set(res.pivots)
    free = [c for c in range(m.cols) if c not in pivots]
    vectors = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, p in enumerate(res.pivots):
            v[p] = -res.rref.entries[r][f]
        vectors.append(v)
    return Subspace.from_vectors(m.cols, vectors)


@dataclass(frozen=True)
class DualScalar:
    """Dual number a + b·eps with eps^2 = 0, over exact rationals."""

    a: Fraction
    b: Fraction

    @classmethod
    def of(cls, a, b=0) -> "DualScalar":
        return cls(Fraction(a), Fraction(b))

    @classmethod
    def zero(cls) -> "DualScalar":
        return cls(Fraction(0), Fraction(0))

    @classmethod
    def one(cls) -> "DualScalar":
        return cls(Fraction(1), Fraction(0))

    @classmethod
    def eps(cls) -> "DualScalar":
        return cls(Fraction(0), Fraction(1))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __add__(self, other: "DualScalar") -> "DualScalar":
        return DualScalar(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "DualScalar") -> "DualScalar":
        return DualScalar(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "DualScalar":
        return DualScalar(-self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, DualScalar):
            return DualScalar(self.a * other.a, self.a * other.b + self.b * other.a)
        c = Fraction(other)
        return DualScalar(self.a * c, self.b * c)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"({self.a} + {self.b}eps)"


class SparseEchelon:
    """Incremental row-echelon accumulator over Q with integer rows.

    Rows are scaled to integers and kept fraction-free internally
    (content-normalized after every combination); this is an
    implementation detail, results are exact rationals.  Rows are only
    forward-reduced, which keeps the stored pivot rows sparse.
    """

    __slots__ = ("ncols", "pivot_rows")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivot_rows: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    @staticmethod
    def _scale_to_int(row: dict) -> dict[int, int]:
        denom = 1
        for v in row.values():
            if isinstance(v, Fraction):
                denom = denom * v.denominator // gcd(denom, v.denominator)
        out = {}
        for c, v in row.items():
            iv = int(v * denom) if isinstance(v, Fraction) else v * denom
            if iv:
                out[c] = iv
        return out

    @staticmethod
    def _normalize(row: dict[int, int]) -> dict[int, int]:
        g = 0
        for v in row.values():
            g = gcd(g, v)
        if g > 1:
            row = {c: v // g for c, v in row.items()}
        lead = min(row)
        if row[lead] < 0:
            row = {c: -v for c, v in row.items()}
        return row

    def _reduce(self, row: dict[int, int]) -> dict[int, int]:
        while row:
            lead = min(row)
            piv = self.pivot_rows.get(lead)
            if piv is None:
                return self._normalize(row)
            a, b = piv[lead], row[lead]
            g = gcd(a, b)
            a //= g
            b //= g
            new = {}
            for c, v in row.items():
                new[c] = v * a
            for c, v in piv.items():
                w = new.get(c, 0) - v * b
                if w:
                    new[c] = w
                elif c in new:
                    del new[c]
            row = new
            if row:
                row = self._normalize(row)
        return row

    def add(self, row: dict) -> bool:
        """Insert a row (dict col -> value); True if the rank grew."""
        row = self._scale_to_int(row)
        if not row:
            return False
        row = self._reduce(row)
        if not row:
            return False
        self.pivot_rows[min(row)] = row
        return True

    def reduces_to_zero(self, row: dict) -> bool:
        """Would this row be dependent on the current rows?  Non-mutating."""
        row = self._scale_to_int(row)
        return not self._reduce(row)

    def annihilates(self, vec: Sequence[Fraction]) -> bool:
        """True when every accumulated row has zero dot product with vec.

        The stored rows span the same row space as everything added, so
        this decides membership of ``vec`` in the kernel of the whole
        constraint system.
        """
        for row in self.pivot_rows.values():
            if sum(v * vec[c] for c, v in row.items()) != 0:
                return False
        return True

    def pivot_columns(self) -> list[int]:
        return sorted(self.pivot_rows)

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.pivot_rows]

    def nullspace_vectors(self) -> list[Vector]:
        """Kernel basis, one vector per free column (unit there).

        Deterministic given the insertion history: vector ``v_f`` has a 1
        at free column f, 0 at other free columns, and pivot coordinates
        solved by back-substitution.
        """
        pivots = self.pivot_columns()
        out = []
        for f in self.free_columns():
            v: dict[int, Fraction] = {f: Fraction(1)}
            for p in reversed(pivots):
                row = self.pivot_rows[p]
                s = Fraction(0)
                for c, coef in row.items():
                    if c != p and c in v:
                        s += coef * v[c]
                if s != 0:
                    v[p] = -s / row[p]
            out.append(tuple(v.get(c, Fraction(0)) for c in range(self.ncols)))
        return out
