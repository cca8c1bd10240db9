"""Second cohomology constrained to varieties of Lie brackets.

For a bracket mu the tangent space to the variety at mu is cut out of
the alternating 2-cochains by linear conditions:

* all varieties: d(omega)(x,y,z) = sc mu(omega(x,y),z) + sc omega(mu(x,y),z) = 0
* at most k-step nilpotent: the first-order term of (mu + eps*omega)^k,
  sum_{i=1..k} mu^{k-i}(omega(mu^{i-1}(x_1..x_i), x_{i+1}), x_{i+2}, ..) = 0
* at most k-step solvable: the first-order term of (mu + eps*omega)^(k),
  built by the recursion s_1 = omega,
  s_i = mu(mu^(i-1), s_{i-1}) + mu(s_{i-1}, mu^(i-1)) + omega(mu^(i-1), mu^(i-1)).

Coboundaries are the image of f -> mu(f.,.) + mu(.,f.) - f(mu); they lie
inside every tangent space (they are the derivative of the change-of-basis
orbit).  H = Z/B vanishing certifies rigidity; the converse may fail, so a
nonzero H is reported as inconclusive.

Cochain coordinates are pinned: lexicographic (i<j) pair order, then
target index.  All systems are solved by exact fraction-free elimination.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .core import (
    LieAlgebra,
    MultilinearMap,
    check_cap,
    compose,
    unit,
)
from .errors import DimensionMismatchError, LieforgeError, NotInVarietyError
from .linalg import (
    Matrix,
    SparseEchelon,
    Subspace,
    Vector,
    vec_add,
    vec_is_zero,
    vec_scale,
    vector,
    zero_vector,
)

CERTIFIED_RIGID = "CERTIFIED_RIGID"
INCONCLUSIVE = "INCONCLUSIVE"

# degree-1 cochains are endomorphisms of the underlying space
Cochain1 = Matrix


@dataclass(frozen=True)
class Variety:
    """L_n ("lie"), N_{n,k} ("nil", k) or S_{n,k} ("sol", k)."""

    kind: str
    k: int | None = None

    def __post_init__(self):
        if self.kind not in ("lie", "nil", "sol"):
            raise LieforgeError(f"unknown variety kind {self.kind!r}")
        if self.kind == "lie":
            if self.k is not None:
                raise LieforgeError("the full Lie variety takes no step bound")
        elif self.k is None or self.k < 1:
            raise LieforgeError("nil/sol varieties need a step bound k >= 1")

    def __str__(self) -> str:
        return self.kind if self.kind == "lie" else f"{self.kind}:{self.k}"


LIE = Variety("lie")


def nil(k: int) -> Variety:
    return Variety("nil", k)


def sol(k: int) -> Variety:
    return Variety("sol", k)


def parse_variety(text: str) -> Variety:
    text = text.strip().lower()
    if text == "lie":
        return LIE
    for kind in ("nil", "sol"):
        if text.startswith(kind + ":"):
            try:
                return Variety(kind, int(text[len(kind) + 1:]))
            except ValueError:
                break
    raise LieforgeError(f"cannot parse variety {text!r} (use lie, nil:K or sol:K)")


def pair_list(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


class Cochain2:
    """Alternating bilinear map Q^n x Q^n -> Q^n on basis pairs i < j.

    The flat coordinate vector has length n*C(n,2): pair (i,j) in lex
    order contributes its target coordinates contiguously.
    """

    __slots__ = ("dim", "values")

    def __init__(self, dim: int, values: dict):
        clean = {}
        for (i, j), v in values.items():
            if not (0 <= i < j < dim):
                raise DimensionMismatchError(f"cochain pair ({i},{j}) out of range")
            v = vector(v)
            if len(v) != dim:
                raise DimensionMismatchError("cochain value of wrong length")
            if not vec_is_zero(v):
                clean[(i, j)] = v
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "values", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Cochain2 is immutable")

    @classmethod
    def zero(cls, dim: int) -> "Cochain2":
        return cls(dim, {})

    @classmethod
    def from_flat(cls, dim: int, flat: Sequence) -> "Cochain2":
        pairs = pair_list(dim)
        if len(flat) != len(pairs) * dim:
            raise DimensionMismatchError("flat cochain vector has wrong length")
        values = {}
        for pos, pair in enumerate(pairs):
            v = tuple(Fraction(flat[pos * dim + t]) for t in range(dim))
            if not vec_is_zero(v):
                values[pair] = v
        return cls(dim, values)

    def to_flat(self) -> Vector:
        n = self.dim
        out = [Fraction(0)] * (len(pair_list(n)) * n)
        for pos, pair in enumerate(pair_list(n)):
            v = self.values.get(pair)
            if v is not None:
                for t in range(n):
                    out[pos * n + t] = v[t]
        return tuple(out)

    def get_pair(self, i: int, j: int) -> Vector:
        if i == j:
            return zero_vector(self.dim)
        if i < j:
            return self.values.get((i, j), zero_vector(self.dim))
        v = self.values.get((j, i))
        return vec_scale(Fraction(-1), v) if v is not None else zero_vector(self.dim)

    def evaluate(self, x: Sequence, y: Sequence) -> Vector:
        acc = [Fraction(0)] * self.dim
        for (i, j), v in self.values.items():
            c = x[i] * y[j] - x[j] * y[i]
            if c != 0:
                for t, e in enumerate(v):
                    if e != 0:
                        acc[t] += c * e
        return tuple(acc)

    def eval_vec_basis(self, x: Sequence, j: int) -> Vector:
        acc = [Fraction(0)] * self.dim
        for i, c in enumerate(x):
            if c != 0 and i != j:
                for t, e in enumerate(self.get_pair(i, j)):
                    if e != 0:
                        acc[t] += c * e
        return tuple(acc)

    def as_multilinear(self) -> MultilinearMap:
        return MultilinearMap(2, self.dim, dict(self.values), alternating=True)

    def is_zero(self) -> bool:
        return not self.values

    def scale(self, c) -> "Cochain2":
        c = Fraction(c)
        return Cochain2(self.dim, {k: vec_scale(c, v) for k, v in self.values.items()})

    def add(self, other: "Cochain2") -> "Cochain2":
        if self.dim != other.dim:
            raise DimensionMismatchError("cochain dimensions differ")
        values = dict(self.values)
        for k, v in other.values.items():
            values[k] = vec_add(values.get(k, zero_vector(self.dim)), v)
        return Cochain2(self.dim, values)


def mu_cochain(L: LieAlgebra) -> Cochain2:
    return Cochain2(L.dim, dict(L.table))


def coboundary(L: LieAlgebra, f: Matrix) -> Cochain2:
    """d1(f)(x,y) = mu(f x, y) + mu(x, f y) - f(mu(x, y)); spans B^2.

    The opposite sign convention f(mu) - mu(f.,.) - mu(.,f.) spans the
    same space, so every dimension downstream is unaffected; this one is
    fixed here once to avoid silent sign mismatches.
    """
    if f.rows != L.dim or f.cols != L.dim:
        raise DimensionMismatchError("endomorphism has wrong shape")
    n = L.dim
    values = {}
    for (i, j) in pair_list(n):
        v = L.bracket(f.column(i), unit(n, j))
        v = vec_add(v, L.bracket(unit(n, i), f.column(j)))
        v = vec_add(v, vec_scale(Fraction(-1), f.apply(L.bracket_basis(i, j))))
        values[(i, j)] = v
    return Cochain2(n, values)


def _elementary_coboundary_flat(L: LieAlgebra, a: int, b: int) -> dict[int, Fraction]:
    """Flat coordinates of d1 of the matrix unit e_b -> e_a (sparse)."""
    n = L.dim
    out: dict[int, Fraction] = {}
    pos = {pair: p for p, pair in enumerate(pair_list(n))}
    for (i, j) in pair_list(n):
        acc = [Fraction(0)] * n
        if i == b:
            for t, e in enumerate(L.bracket_basis(a, j)):
                acc[t] += e
        if j == b:
            for t, e in enumerate(L.bracket_basis(i, a)):
                acc[t] += e
        cb = L.bracket_basis(i, j)[b]
        if cb != 0:
            acc[a] -= cb
        base = pos[(i, j)] * n
        for t, e in enumerate(acc):
            if e != 0:
                out[base + t] = e
    return out


def differential(L: LieAlgebra, omega: Cochain2) -> MultilinearMap:
    """d(omega) as an alternating trilinear map (values on i<j<k)."""
    n = L.dim
    values = {}
    for (i, j, k) in itertools.combinations(range(n), 3):
        v = _differential_value(L, omega, i, j, k)
        if not vec_is_zero(v):
            values[(i, j, k)] = v
    return MultilinearMap(3, n, values, alternating=True)


def _differential_value(L: LieAlgebra, omega: Cochain2, i: int, j: int, k: int) -> Vector:
    acc = zero_vector(L.dim)
    for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
        acc = vec_add(acc, L.bracket_vec_basis(omega.get_pair(a, b), c))
        acc = vec_add(acc, omega.eval_vec_basis(L.bracket_basis(a, b), c))
    return acc


def nilpotency_constraint(L: LieAlgebra, omega: Cochain2, k: int) -> MultilinearMap:
    """The (k+1)-linear first-order term of (mu + eps*omega)^k.

    Evaluated from the defining sum over the split position of omega;
    equal (pointwise) to the sum of compositions mu^{k-1-j} o omega o mu^j.
    """
    if k < 1:
        raise LieforgeError("k must be >= 1")
    n = L.dim
    check_cap(n ** (k + 1) * n, f"nilpotency constraint of arity {k + 1}")
    values = {}

    def walk(a: Vector, b: Vector, prefix: tuple[int, ...]):
        if len(prefix) == k + 1:
            if not vec_is_zero(b):
                values[prefix] = b
            return
        if vec_is_zero(a) and vec_is_zero(b):
            return
        for c in range(n):
            a2 = L.bracket_vec_basis(a, c)
            b2 = vec_add(L.bracket_vec_basis(b, c), omega.eval_vec_basis(a, c))
            walk(a2, b2, prefix + (c,))

    for i in range(n):
        walk(unit(n, i), zero_vector(n), (i,))
    return MultilinearMap(k + 1, n, values)


def nilpotency_constraint_composed(L: LieAlgebra, omega: Cochain2, k: int) -> MultilinearMap:
    """Same map assembled as sum_{j=0..k-1} mu^{k-1-j} o omega o mu^j."""
    if k < 1:
        raise LieforgeError("k must be >= 1")
    n = L.dim
    check_cap(n ** (k + 1) * n, f"nilpotency constraint of arity {k + 1}")
    identity = MultilinearMap(1, n, {(i,): unit(n, i) for i in range(n)})
    omega_map = omega.as_multilinear()
    mu = L.mu_map()

    def mu_pow(p: int) -> MultilinearMap:
        if p == 0:
            return identity
        acc = mu
        for _ in range(p - 1):
            acc = compose(mu, acc)
        return acc

    total: MultilinearMap | None = None
    for j in range(k):
        term = compose(mu_pow(k - 1 - j), compose(omega_map, mu_pow(j)))
        if total is None:
            total = term
        else:
            merged = {}
            for key in total.values.keys() | term.values.keys():
                v = vec_add(total.get(key), term.get(key))
                if not vec_is_zero(v):
                    merged[key] = v
            total = MultilinearMap(k + 1, n, merged)
    assert total is not None
    return total


def solvability_constraint(L: LieAlgebra, omega: Cochain2, k: int) -> MultilinearMap:
    """The 2^k-linear first-order term of (mu + eps*omega)^(k)."""
    if k < 1:
        raise LieforgeError("k must be >= 1")
    n = L.dim
    check_cap(n ** (2 ** k) * n, f"solvability constraint of arity {2 ** k}")
    # level 1: (mu value, omega value) on each ordered basis pair
    concrete = {key: L.bracket_basis(*key)
                for key in itertools.product(range(n), repeat=2)}
    symbolic = {key: omega.get_pair(*key)
                for key in itertools.product(range(n), repeat=2)}
    for _ in range(k - 1):
        new_c, new_s = {}, {}
        for ku, av in concrete.items():
            for kv, cv in concrete.items():
                key = ku + kv
                bu, bv = symbolic[ku], symbolic[kv]
                new_c[key] = L.bracket(av, cv)
                s = L.bracket(av, bv)
                s = vec_add(s, L.bracket(bu, cv))
                s = vec_add(s, omega.evaluate(av, cv))
                new_s[key] = s
        concrete, symbolic = new_c, new_s
    values = {key: v for key, v in symbolic.items() if not vec_is_zero(v)}
    return MultilinearMap(2 ** k, n, values)


# ---------------------------------------------------------------------------
# Variety membership


def variety_membership(L: LieAlgebra, variety: Variety):
    """Raise NotInVarietyError (with a witness tuple) unless mu lies in it."""
    L.require_valid()
    if variety.kind == "lie":
        return
    if variety.kind == "nil":
        witness = _nilpotency_witness(L, variety.k)
        if witness is not None:
            raise NotInVarietyError(
                f"bracket power {variety.k} does not vanish on basis tuple {witness}",
                witness)
        return
    witness = _solvability_witness(L, variety.k)
    if witness is not None:
        raise NotInVarietyError(
            f"derived power {variety.k} does not vanish on basis tuple {witness}",
            witness)


def _nilpotency_witness(L: LieAlgebra, k: int) -> tuple[int, ...] | None:
    n = L.dim

    def walk(a: Vector, prefix: tuple[int, ...]):
        if len(prefix) == k + 1:
            return prefix if not vec_is_zero(a) else None
        if vec_is_zero(a):
            return None
        for c in range(n):
            hit = walk(L.bracket_vec_basis(a, c), prefix + (c,))
            if hit is not None:
                return hit
        return None

    for i in range(n):
        hit = walk(unit(n, i), (i,))
        if hit is not None:
            return hit
    return None


def _solvability_witness(L: LieAlgebra, k: int) -> tuple[int, ...] | None:
    n = L.dim
    # generating sets with witness tuples, span-compressed level by level
    gens: list[tuple[Vector, tuple[int, ...]]] = [(unit(n, i), (i,)) for i in range(n)]
    for _ in range(k):
        ech = SparseEchelon(n)
        new: list[tuple[Vector, tuple[int, ...]]] = []
        for (u, tu) in gens:
            for (v, tv) in gens:
                w = L.bracket(u, v)
                if vec_is_zero(w):
                    continue
                if ech.add({c: e for c, e in enumerate(w) if e != 0}):
                    new.append((w, tu + tv))
        gens = new
        if not gens:
            return None
    return gens[0][1]


# ---------------------------------------------------------------------------
# Constraint-row assembly (sparse, exact)


def _delta_rows(L: LieAlgebra) -> Iterator[dict[int, Fraction]]:
    """One scalar row per (i<j<k triple, target coordinate)."""
    n = L.dim
    pos = {pair: p for p, pair in enumerate(pair_list(n))}
    # ad columns: for c, t: mu(e_t, e_c) sparse as {s: val}
    right_mult = [[{s: val for s, val in enumerate(L.bracket_basis(t, c)) if val != 0}
                   for t in range(n)] for c in range(n)]
    for (i, j, k) in itertools.combinations(range(n), 3):
        rows: list[dict[int, Fraction]] = [dict() for _ in range(n)]
        touched = False
        for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
            p, sign = ((a, b), 1) if a < b else ((b, a), -1)
            base = pos[p] * n
            cols = right_mult[c]
            for t in range(n):
                for s, val in cols[t].items():
                    rows[s][base + t] = rows[s].get(base + t, Fraction(0)) + sign * val
                    touched = True
            mu_ab = L.bracket_basis(a, b)
            for u, cu in enumerate(mu_ab):
                if cu == 0 or u == c:
                    continue
                q, sgn2 = ((u, c), 1) if u < c else ((c, u), -1)
                qbase = pos[q] * n
                for s in range(n):
                    rows[s][qbase + s] = rows[s].get(qbase + s, Fraction(0)) + sgn2 * cu
                touched = True
        if touched:
            for row in rows:
                row = {c: v for c, v in row.items() if v != 0}
                if row:
                    yield row


class _ColumnSparse:
    """Columns (cochain coordinate -> sparse vector) of a symbolic value."""

    __slots__ = ("cols",)

    def __init__(self, cols: dict[int, dict[int, Fraction]] | None = None):
        self.cols = cols if cols is not None else {}

    def is_zero(self) -> bool:
        return not self.cols

    def add_entry(self, coord: int, row: int, val: Fraction):
        col = self.cols.setdefault(coord, {})
        new = col.get(row, Fraction(0)) + val
        if new:
            col[row] = new
        else:
            del col[row]
            if not col:
                del self.cols[coord]

    def rows(self) -> Iterator[dict[int, Fraction]]:
        transposed: dict[int, dict[int, Fraction]] = {}
        for coord, col in self.cols.items():
            for r, v in col.items():
                transposed.setdefault(r, {})[coord] = v
        for r in sorted(transposed):
            yield transposed[r]

    def flat_items(self, n: int) -> Iterator[tuple[int, Fraction]]:
        for coord, col in self.cols.items():
            for r, v in col.items():
                yield coord * n + r, v


def _apply_op(op: list[dict[int, Fraction]], b: _ColumnSparse) -> _ColumnSparse:
    """op is column-sparse (op[t] = image of e_t); compute op . b."""
    out = _ColumnSparse()
    for coord, col in b.cols.items():
        for t, v in col.items():
            for s, m in op[t].items():
                out.add_entry(coord, s, v * m)
    return out


def _omega_columns(L: LieAlgebra, a: Vector, b: int,
                   pos: dict[tuple[int, int], int]) -> _ColumnSparse:
    """Symbolic omega(a, e_b) as columns over cochain coordinates."""
    n = L.dim
    out = _ColumnSparse()
    for u, cu in enumerate(a):
        if cu == 0 or u == b:
            continue
        p, sign = ((u, b), 1) if u < b else ((b, u), -1)
        base = pos[p] * n
        for t in range(n):
            out.add_entry(base + t, t, sign * cu)
    return out


def _omega_columns_pair(L: LieAlgebra, a: Vector, c: Vector,
                        pos: dict[tuple[int, int], int]) -> _ColumnSparse:
    """Symbolic omega(a, c) for two concrete vectors."""
    n = L.dim
    out = _ColumnSparse()
    for (i, j), p in pos.items():
        coef = a[i] * c[j] - a[j] * c[i]
        if coef != 0:
            base = p * n
            for t in range(n):
                out.add_entry(base + t, t, coef)
    return out


def _right_mult_ops(L: LieAlgebra) -> list[list[dict[int, Fraction]]]:
    """For each b, the column-sparse matrix of v -> mu(v, e_b)."""
    n = L.dim
    return [[{s: val for s, val in enumerate(L.bracket_basis(t, b)) if val != 0}
             for t in range(n)] for b in range(n)]


def _product_op_bases(L: LieAlgebra, max_len: int,
                      ops: list[list[dict[int, Fraction]]]):
    """Span bases of {M_{b_r} ... M_{b_1}} for r = 0 .. max_len."""
    n = L.dim
    identity = [{t: Fraction(1)} for t in range(n)]
    bases: list[list[list[dict[int, Fraction]]]] = [[identity]]
    for _ in range(max_len):
        ech = SparseEchelon(n * n)
        reps: list[list[dict[int, Fraction]]] = []
        for prev in bases[-1]:
            for b in range(n):
                new_op = [dict() for _ in range(n)]
                for t in range(n):
                    for mid, v in prev[t].items():
                        for s, m in ops[b][mid].items():
                            new_op[t][s] = new_op[t].get(s, Fraction(0)) + v * m
                new_op = [{s: v for s, v in col.items() if v != 0} for col in new_op]
                flat = {t * n + s: v for t in range(n) for s, v in new_op[t].items()}
                if flat and ech.add(flat):
                    reps.append(new_op)
        bases.append(reps)
    return bases


def _nil_rows(L: LieAlgebra, k: int) -> Iterator[dict[int, Fraction]]:
    """Constraint rows of the k-step nilpotency tangent condition.

    Walks basis tuples depth-first carrying the concrete left-normed
    bracket and the symbolic first-order part.  Once the concrete part
    dies the remaining suffixes act by right-multiplication operators
    only, so the subtree is replaced by a precomputed span basis of
    operator products.
    """
    n = L.dim
    pos = {pair: p for p, pair in enumerate(pair_list(n))}
    ops = _right_mult_ops(L)
    products = _product_op_bases(L, k - 1, ops)

    def emit(b: _ColumnSparse):
        yield from b.rows()

    def walk(a: Vector, b: _ColumnSparse, depth: int):
        if depth == k + 1:
            yield from emit(b)
            return
        if vec_is_zero(a):
            if b.is_zero():
                return
            for op in products[k + 1 - depth]:
                yield from emit(_apply_op(op, b))
            return
        for c in range(n):
            a2 = L.bracket_vec_basis(a, c)
            b2 = _apply_op(ops[c], b)
            for coord, col in _omega_columns(L, a, c, pos).cols.items():
                for r, v in col.items():
                    b2.add_entry(coord, r, v)
            if vec_is_zero(a2) and b2.is_zero():
                continue
            yield from walk(a2, b2, depth + 1)

    if k == 1:
        # first-order term of mu^1 is omega itself: all coordinates vanish
        for p, pair in enumerate(pair_list(n)):
            for t in range(n):
                yield {p * n + t: Fraction(1)}
        return
    for (i, j) in pair_list(n):
        start = _ColumnSparse()
        base = pos[(i, j)] * n
        for t in range(n):
            start.add_entry(base + t, t, Fraction(1))
        yield from walk(L.bracket_basis(i, j), start, 2)


def _sol_rows(L: LieAlgebra, k: int) -> Iterator[dict[int, Fraction]]:
    """Constraint rows of the k-step solvability tangent condition.

    Level items are pairs (concrete derived-power value, symbolic
    first-order part); the level transition is bilinear in the items,
    so each level is span-compressed before being paired again.
    """
    n = L.dim
    pos = {pair: p for p, pair in enumerate(pair_list(n))}
    if k == 1:
        for p, pair in enumerate(pair_list(n)):
            for t in range(n):
                yield {p * n + t: Fraction(1)}
        return
    items: list[tuple[Vector, _ColumnSparse]] = []
    ech = SparseEchelon(n + n * len(pos) * n)
    for (i, j) in pair_list(n):
        b = _ColumnSparse()
        base = pos[(i, j)] * n
        for t in range(n):
            b.add_entry(base + t, t, Fraction(1))
        a = L.bracket_basis(i, j)
        flat = {c: v for c, v in enumerate(a) if v != 0}
        flat.update({n + c: v for c, v in b.flat_items(n)})
        if flat and ech.add(flat):
            items.append((a, b))
    for level in range(2, k + 1):
        check_cap(len(items) ** 2, f"solvability level {level} pairing")
        ech = SparseEchelon(n + n * len(pos) * n)
        new_items: list[tuple[Vector, _ColumnSparse]] = []
        for (au, bu) in items:
            for (av, bv) in items:
                a = L.bracket(au, av)
                b = _ColumnSparse()
                # mu(a_u, s_v): columns of s_v pushed through x -> mu(a_u, x)
                for coord, col in bv.cols.items():
                    for t, v in col.items():
                        for s, val in enumerate(L.bracket_vec_basis(au, t)):
                            if val != 0:
                                b.add_entry(coord, s, v * val)
                # mu(s_u, a_v) = -mu(a_v, s_u)
                for coord, col in bu.cols.items():
                    for t, v in col.items():
                        for s, val in enumerate(L.bracket_vec_basis(av, t)):
                            if val != 0:
                                b.add_entry(coord, s, -v * val)
                for coord, col in _omega_columns_pair(L, au, av, pos).cols.items():
                    for r, v in col.items():
                        b.add_entry(coord, r, v)
                if vec_is_zero(a) and b.is_zero():
                    continue
                flat = {c: v for c, v in enumerate(a) if v != 0}
                flat.update({n + c: v for c, v in b.flat_items(n)})
                if ech.add(flat):
                    new_items.append((a, b))
        items = new_items
        if not items:
            return
    for (_, b) in items:
        yield from b.rows()


# ---------------------------------------------------------------------------
# Cohomology spaces and certificates


@dataclass(frozen=True)
class CohomologySpace:
    variety: Variety
    Z_dim: int
    B_dim: int
    H_dim: int
    Z_basis: tuple[Cochain2, ...]
    H_representatives: tuple[Cochain2, ...]


_COHOMOLOGY_CACHE: dict = {}


def cohomology(L: LieAlgebra, variety: Variety) -> CohomologySpace:
    """Z, B and H = Z/B for the tangent space of the given variety at mu."""
    key = (L.fingerprint(), str(variety))
    hit = _COHOMOLOGY_CACHE.get(key)
    if hit is not None:
        return hit
    variety_membership(L, variety)
    n = L.dim
    check_cap(n * n * (n - 1) * (n - 2) // 6,
              f"differential codomain for dimension {n}")
    ncols = n * (n * (n - 1) // 2)

    constraints = SparseEchelon(ncols)
    for row in _delta_rows(L):
        constraints.add(row)
    if variety.kind == "nil":
        for row in _nil_rows(L, variety.k):
            constraints.add(row)
    elif variety.kind == "sol":
        for row in _sol_rows(L, variety.k):
            constraints.add(row)

    z_flat = constraints.nullspace_vectors()
    z_basis = tuple(Cochain2.from_flat(n, v) for v in z_flat)

    b_space = SparseEchelon(ncols)
    for a in range(n):
        for b in range(n):
            flat = _elementary_coboundary_flat(L, a, b)
            if flat:
                assert constraints.annihilates(_sparse_to_dense(flat, ncols)), \
                    "coboundary escapes the tangent space"
                b_space.add(flat)
    b_dim = b_space.rank

    reps = []
    for z in z_basis:
        flat = z.to_flat()
        if b_space.add({c: v for c, v in enumerate(flat) if v != 0}):
            reps.append(z)

    space = CohomologySpace(
        variety=variety,
        Z_dim=len(z_basis),
        B_dim=b_dim,
        H_dim=len(z_basis) - b_dim,
        Z_basis=z_basis,
        H_representatives=tuple(reps),
    )
    assert space.H_dim == len(space.H_representatives)
    _COHOMOLOGY_CACHE[key] = space
    return space


def _sparse_to_dense(row: dict[int, Fraction], ncols: int) -> Vector:
    return tuple(row.get(c, Fraction(0)) for c in range(ncols))


def in_tangent_space(L: LieAlgebra, omega: Cochain2, variety: Variety) -> bool:
    """Direct membership test of omega in Z (evaluates the constraints)."""
    if not differential(L, omega).is_zero():
        return False
    if variety.kind == "nil":
        return nilpotency_constraint(L, omega, variety.k).is_zero()
    if variety.kind == "sol":
        return solvability_constraint(L, omega, variety.k).is_zero()
    return True


def rigidity_certificate(L: LieAlgebra, variety: Variety) -> str:
    """CERTIFIED_RIGID when H vanishes; a nonzero H proves nothing."""
    space = cohomology(L, variety)
    return CERTIFIED_RIGID if space.H_dim == 0 else INCONCLUSIVE


# ---------------------------------------------------------------------------
# Dual-number oracle

DualVector = tuple[Vector, Vector]


def _dual_bracket(L: LieAlgebra, omega: Cochain2,
                  u: DualVector, v: DualVector) -> DualVector:
    a = L.bracket(u[0], v[0])
    b = vec_add(L.bracket(u[0], v[1]), L.bracket(u[1], v[0]))
    b = vec_add(b, omega.evaluate(u[0], v[0]))
    return (a, b)


def _dual_is_zero(u: DualVector) -> bool:
    return vec_is_zero(u[0]) and vec_is_zero(u[1])


def _dual_span_basis(n: int, vectors: list[DualVector]) -> list[DualVector]:
    ech = SparseEchelon(2 * n)
    basis = []
    for u in vectors:
        flat = {c: v for c, v in enumerate(u[0]) if v != 0}
        flat.update({n + c: v for c, v in enumerate(u[1]) if v != 0})
        if flat and ech.add(flat):
            basis.append(u)
    return basis


def dual_number_oracle(L: LieAlgebra, omega: Cochain2, variety: Variety) -> bool:
    """Does mu + eps*omega lie in the variety over the dual numbers?

    Checks, with exact dual-number arithmetic: alternation (structural
    for Cochain2 tables), the Jacobi identity on basis triples, and the
    vanishing of the k-th bracket power (nil) or derived power (sol),
    the latter two via span recursions over Q^(2n).
    """
    variety_membership(L, variety)
    n = L.dim
    basis_duals = [(unit(n, i), zero_vector(n)) for i in range(n)]
    for (i, j, k) in itertools.combinations(range(n), 3):
        acc = (zero_vector(n), zero_vector(n))
        for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
            inner = _dual_bracket(L, omega, basis_duals[a], basis_duals[b])
            term = _dual_bracket(L, omega, inner, basis_duals[c])
            acc = (vec_add(acc[0], term[0]), vec_add(acc[1], term[1]))
        if not _dual_is_zero(acc):
            return False
    if variety.kind == "nil":
        current = basis_duals
        for _ in range(variety.k):
            images = [_dual_bracket(L, omega, u, e)
                      for u in current for e in basis_duals]
            current = _dual_span_basis(n, images)
            if not current:
                return True
        return False
    if variety.kind == "sol":
        current = basis_duals
        for _ in range(variety.k):
            images = [_dual_bracket(L, omega, u, v)
                      for u in current for v in current]
            current = _dual_span_basis(n, images)
            if not current:
                return True
        return False
    return True


def tangent_subspace(L: LieAlgebra, variety: Variety) -> Subspace:
    """Z as a subspace of the flat cochain coordinate space."""
    space = cohomology(L, variety)
    ncols = L.dim * (L.dim * (L.dim - 1) // 2)
    return Subspace.from_vectors(ncols, [z.to_flat() for z in space.Z_basis])
