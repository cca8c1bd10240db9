"""Linear deformations mu_t = mu + t*phi with validated directions.

mu_t is a Lie bracket for every t exactly when phi is itself a Lie
bracket and a 2-cocycle for mu (sc(mu o phi + phi o mu) = 0); both are
checked at construction.  The workhorse direction is the wedge cocycle
of a codimension-2 subalgebra h with complement <a1, a2>:

    phi = a1* ^ a2* (x) y,   phi(u, v) = (a1*(u) a2*(v) - a2*(u) a1*(v)) y

for y centralizing h, valid whenever a1*([a1,h]) + a2*([a2,h]) = 0 on h
(automatic for nilpotent algebras by a trace argument).  Dixmier
cocycles from a derivation of a codimension-1 ideal are also provided.

Non-triviality is certified per sampled t by comparing isomorphism
invariants of mu and mu_t; a NONTRIVIAL verdict is a literal tuple
inequality at every sample.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .catalog import GraphSpec, abelian, graph_algebra, heisenberg
from .cohomology import Cochain2, Variety, nil, variety_membership
from .core import (
    BasisDecomposition,
    InvariantVector,
    LieAlgebra,
    adapted_basis,
    commutator,
    direct_sum,
    invariant_vector,
    is_ideal,
    nilpotency_class,
    series,
    structure_predicates,
    unit,
)
from .errors import (
    HypothesisFailedError,
    InvalidDeformationError,
    LieforgeError,
    NotInVarietyError,
    ScenarioRejectedError,
    SearchExhaustedError,
)
from .hall import free_nilpotent, hall_basis, left_normed_word
from .linalg import (
    Matrix,
    Subspace,
    Vector,
    nullspace,
    vec_add,
    vec_is_zero,
    vec_scale,
    vector,
    zero_vector,
)

DEFAULT_SAMPLES: tuple[Fraction, ...] = (
    Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2))

NONTRIVIAL = "NONTRIVIAL"
UNDETERMINED = "UNDETERMINED"


@dataclass(frozen=True)
class WedgeCocycle:
    """a1* ^ a2* (x) y as a materialized 2-cochain."""

    decomposition: BasisDecomposition
    y: Vector
    cochain: Cochain2

    @classmethod
    def build(cls, dec: BasisDecomposition, y) -> "WedgeCocycle":
        y = vector(y)
        n = dec.dim
        a1s, a2s = dec.a1_dual(), dec.a2_dual()
        values = {}
        for i in range(n):
            for j in range(i + 1, n):
                c = a1s[i] * a2s[j] - a2s[i] * a1s[j]
                if c != 0:
                    values[(i, j)] = vec_scale(c, y)
        return cls(dec, y, Cochain2(n, values))


@dataclass(frozen=True)
class DeformationChecks:
    direction_is_bracket: bool
    cocycle: bool
    sc_mu_phi_zero: bool | None
    sc_phi_mu_zero: bool | None
    variety: str | None
    variety_at_samples: tuple[tuple[str, bool], ...]


@dataclass(frozen=True)
class LinearDeformation:
    base: LieAlgebra
    direction: Cochain2
    provenance: str
    checks: DeformationChecks

    def evaluate(self, t) -> LieAlgebra:
        """The bracket mu + t*phi (table-wise)."""
        t = Fraction(t)
        n = self.base.dim
        table = dict(self.base.table)
        for pair, v in self.direction.values.items():
            table[pair] = vec_add(table.get(pair, zero_vector(n)), vec_scale(t, v))
        return LieAlgebra(n, table, names=self.base.names)


def _cyclic_value(f, i, j, k) -> Vector:
    acc = None
    for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
        v = f(a, b, c)
        acc = v if acc is None else vec_add(acc, v)
    return acc


def _direction_is_bracket(phi: Cochain2) -> bool:
    n = phi.dim
    for (i, j, k) in itertools.combinations(range(n), 3):
        s = _cyclic_value(lambda a, b, c: phi.eval_vec_basis(phi.get_pair(a, b), c),
                          i, j, k)
        if not vec_is_zero(s):
            return False
    return True


def make_deformation(L: LieAlgebra, phi: Cochain2, provenance: str,
                     variety: Variety | None = None,
                     samples: tuple[Fraction, ...] = DEFAULT_SAMPLES,
                     record_split_identities: bool = False) -> LinearDeformation:
    """Validate (phi Lie bracket, 2-cocycle) and package the family."""
    if phi.dim != L.dim:
        raise InvalidDeformationError("direction has the wrong dimension")
    n = L.dim
    bracket_ok = _direction_is_bracket(phi)

    sc_mu_phi = True
    sc_phi_mu = True
    cocycle_ok = True
    for (i, j, k) in itertools.combinations(range(n), 3):
        mu_phi = _cyclic_value(
            lambda a, b, c: L.bracket_vec_basis(phi.get_pair(a, b), c), i, j, k)
        phi_mu = _cyclic_value(
            lambda a, b, c: phi.eval_vec_basis(L.bracket_basis(a, b), c), i, j, k)
        if not vec_is_zero(mu_phi):
            sc_mu_phi = False
        if not vec_is_zero(phi_mu):
            sc_phi_mu = False
        if not vec_is_zero(vec_add(mu_phi, phi_mu)):
            cocycle_ok = False
    if not bracket_ok:
        raise InvalidDeformationError("direction is not a Lie bracket")
    if not cocycle_ok:
        raise InvalidDeformationError("direction is not a 2-cocycle for the base")

    membership = []
    if variety is not None:
        defm_preview = LinearDeformation(
            L, phi, provenance,
            DeformationChecks(True, True, None, None, None, ()))
        for t in samples:
            ok = True
            try:
                variety_membership(defm_preview.evaluate(t), variety)
            except NotInVarietyError:
                ok = False
            membership.append((str(t), ok))

    checks = DeformationChecks(
        direction_is_bracket=bracket_ok,
        cocycle=cocycle_ok,
        sc_mu_phi_zero=sc_mu_phi if record_split_identities else None,
        sc_phi_mu_zero=sc_phi_mu if record_split_identities else None,
        variety=str(variety) if variety is not None else None,
        variety_at_samples=tuple(membership),
    )
    return LinearDeformation(L, phi, provenance, checks)


@dataclass(frozen=True)
class Witness:
    """Per-sample invariant comparison between mu and mu_t."""

    samples: tuple[Fraction, ...]
    verdict: str
    base_invariants: InvariantVector
    sample_invariants: tuple[tuple[Fraction, InvariantVector], ...]
    differing: tuple[tuple[Fraction, str | None], ...]

    def differing_fields(self) -> tuple[str, ...]:
        return tuple(f for _, f in self.differing if f is not None)


def witness(defm: LinearDeformation,
            samples: tuple[Fraction, ...] = DEFAULT_SAMPLES) -> Witness:
    """NONTRIVIAL iff the invariant vectors differ at every sampled t."""
    base_inv = invariant_vector(defm.base)
    per_sample = []
    differing = []
    nontrivial = True
    for t in samples:
        inv = invariant_vector(defm.evaluate(t))
        per_sample.append((Fraction(t), inv))
        field = next((name for name in InvariantVector._fields
                      if getattr(inv, name) != getattr(base_inv, name)), None)
        differing.append((Fraction(t), field))
        if field is None:
            nontrivial = False
    return Witness(
        samples=tuple(Fraction(t) for t in samples),
        verdict=NONTRIVIAL if nontrivial else UNDETERMINED,
        base_invariants=base_inv,
        sample_invariants=tuple(per_sample),
        differing=tuple(differing),
    )


class CodimTwoReport:
    """The four hypotheses of the codimension-2 wedge construction."""

    def __init__(self, h_subalgebra: bool, complement: bool,
                 functional_identity: bool, y_centralizes: bool,
                 detail: str | None = None):
        self.h_subalgebra = h_subalgebra
        self.complement = complement
        self.functional_identity = functional_identity
        self.y_centralizes = y_centralizes
        self.detail = detail

    @property
    def ok(self) -> bool:
        return (self.h_subalgebra and self.complement
                and self.functional_identity and self.y_centralizes)

    def failures(self) -> tuple[str, ...]:
        out = []
        if not self.h_subalgebra:
            out.append("h_subalgebra")
        if not self.complement:
            out.append("complement")
        if not self.functional_identity:
            out.append("functional_identity")
        if not self.y_centralizes:
            out.append("y_centralizes")
        return tuple(out)

    def as_dict(self) -> dict:
        return {
            "h_subalgebra": self.h_subalgebra,
            "complement": self.complement,
            "functional_identity": self.functional_identity,
            "y_centralizes": self.y_centralizes,
            "detail": self.detail,
        }


def check_codim2_hypotheses(L: LieAlgebra, dec: BasisDecomposition,
                            y) -> CodimTwoReport:
    y = vector(y)
    if dec.dim != L.dim:
        return CodimTwoReport(False, False, False, False,
                              "decomposition dimension mismatch")
    h_rows = dec.h.basis.entries
    h_sub = all(dec.h.contains(L.bracket(u, v))
                for a, u in enumerate(h_rows) for v in h_rows[a + 1:])
    complement = dec.h.dim == L.dim - 2  # P invertible by construction
    a1s, a2s = dec.a1_dual(), dec.a2_dual()
    detail = None
    functional = True
    for h in dec.h_basis():
        val = (sum(x * yv for x, yv in zip(a1s, L.bracket(dec.a1, h)))
               + sum(x * yv for x, yv in zip(a2s, L.bracket(dec.a2, h))))
        if val != 0:
            functional = False
            detail = f"a1*([a1,h]) + a2*([a2,h]) = {val} on an h-basis vector"
            break
    centralizes = True
    for h in dec.h_basis():
        if not vec_is_zero(L.bracket(y, h)):
            centralizes = False
            detail = detail or "y does not centralize h"
            break
    return CodimTwoReport(h_sub, complement, functional, centralizes, detail)


def deform_codim2(L: LieAlgebra, dec: BasisDecomposition, y,
                  variety: Variety | None = None,
                  samples: tuple[Fraction, ...] = DEFAULT_SAMPLES) -> LinearDeformation:
    """mu_t = mu + t (a1* ^ a2* (x) y), hypotheses checked first."""
    report = check_codim2_hypotheses(L, dec, y)
    if not report.ok:
        raise HypothesisFailedError(
            f"codimension-2 hypotheses failed: {', '.join(report.failures())}"
            + (f" ({report.detail})" if report.detail else ""),
            clause=report.failures()[0])
    wedge = WedgeCocycle.build(dec, y)
    return make_deformation(L, wedge.cochain, "codim2_wedge",
                            variety=variety, samples=samples,
                            record_split_identities=True)


def dixmier_cocycle(L: LieAlgebra, ideal: Subspace, x, d: Matrix) -> Cochain2:
    """phi_D(x, h) = D(h), phi_D(h, h') = 0, for a derivation D of the
    codimension-1 ideal and a fixed x outside it."""
    x = vector(x)
    n = L.dim
    if ideal.ambient_dim != n or ideal.dim != n - 1:
        raise HypothesisFailedError("ideal must have codimension 1",
                                    clause="codim1")
    if not is_ideal(L, ideal):
        raise HypothesisFailedError("subspace is not an ideal", clause="ideal")
    if ideal.contains(x):
        raise HypothesisFailedError("x must lie outside the ideal", clause="x")
    rows = ideal.basis.entries
    for h in rows:
        if not ideal.contains(d.apply(h)):
            raise HypothesisFailedError("D does not preserve the ideal",
                                        clause="derivation")
    for a, u in enumerate(rows):
        for v in rows[a + 1:]:
            lhs = d.apply(L.bracket(u, v))
            rhs = vec_add(L.bracket(d.apply(u), v), L.bracket(u, d.apply(v)))
            if lhs != rhs:
                raise HypothesisFailedError("D is not a derivation of the ideal",
                                            clause="derivation")
    # dual functional of x and projection onto the ideal
    p = Matrix.from_columns([x] + list(rows))
    p_inv = p.inverse()
    x_dual = p_inv.row(0)
    values = {}
    for i in range(n):
        for j in range(i + 1, n):
            xi, xj = x_dual[i], x_dual[j]
            pi_i = vec_sub_scaled(unit(n, i), xi, x)
            pi_j = vec_sub_scaled(unit(n, j), xj, x)
            v = vec_add(vec_scale(xi, d.apply(pi_j)),
                        vec_scale(-xj, d.apply(pi_i)))
            if not vec_is_zero(v):
                values[(i, j)] = v
    return Cochain2(n, values)


def vec_sub_scaled(u: Vector, c: Fraction, v: Vector) -> Vector:
    return tuple(a - c * b for a, b in zip(u, v))


def deform_gh(L: LieAlgebra, ideal: Subspace, x, d: Matrix,
              variety: Variety | None = None,
              samples: tuple[Fraction, ...] = DEFAULT_SAMPLES) -> LinearDeformation:
    """Grunewald-O'Halloran family from a derivation of a codim-1 ideal.

    The ideal stays an ideal of mu_t; checked at the sampled values.
    """
    phi = dixmier_cocycle(L, ideal, x, d)
    defm = make_deformation(L, phi, "dixmier", variety=variety, samples=samples)
    for t in samples:
        if not is_ideal(defm.evaluate(t), ideal):
            raise InvalidDeformationError(
                f"ideal not preserved at t = {t}")  # pragma: no cover
    return defm


# ---------------------------------------------------------------------------
# Scenario builders (one per non-rigidity construction)


@dataclass(frozen=True)
class ScenarioResult:
    name: str
    deformation: LinearDeformation
    witness: Witness
    details: tuple[tuple[str, str], ...]

    def detail(self, key: str) -> str:
        return dict(self.details)[key]


def _unit_decomposition(n: int, a1: int, a2: int) -> BasisDecomposition:
    rest = [unit(n, i) for i in range(n) if i not in (a1, a2)]
    return BasisDecomposition.build(unit(n, a1), unit(n, a2), rest)


def _sample_classes(defm: LinearDeformation, samples) -> tuple[str, ...]:
    out = []
    for t in samples:
        c = nilpotency_class(defm.evaluate(t))
        out.append(f"t={t}:class={c}")
    return tuple(out)


def scenario_free_nilpotent(m: int, k: int,
                            samples: tuple[Fraction, ...] = DEFAULT_SAMPLES) -> ScenarioResult:
    """Deform the free k-step algebra into a (k+1)-step one.

    a1 = x1, a2 = the degree-k chain word, y = another degree-k basis
    word; [a1, a2]_t = t*y makes the family exactly (k+1)-step for
    t != 0.  The (2,2) case is excluded: that algebra is the
    3-dimensional Heisenberg algebra, which is rigid in its nilpotent
    variety (dimension 3 leaves no room for a 3-step deformation).
    """
    if (m, k) == (2, 2):
        raise ScenarioRejectedError(
            "the free 2-step algebra on 2 generators is the 3-dimensional "
            "Heisenberg algebra; it is rigid in every nilpotent variety of "
            "3-dimensional brackets, so no such deformation exists")
    L = free_nilpotent(m, k)
    basis = hall_basis(m, k)
    chain = left_normed_word(basis, k)
    a2_idx = basis.position(chain)
    y_idx = next(p for p, w in enumerate(basis.words)
                 if w.degree == k and p != a2_idx)
    dec = _unit_decomposition(L.dim, 0, a2_idx)
    defm = deform_codim2(L, dec, unit(L.dim, y_idx),
                         variety=nil(k + 1), samples=samples)
    wit = witness(defm, samples)
    details = (("a1", L.names[0]), ("a2", L.names[a2_idx]),
               ("y", L.names[y_idx]),
               ("classes", "; ".join(_sample_classes(defm, samples))))
    return ScenarioResult("free-nonrigid", defm, wit, details)


def scenario_heisenberg(m: int,
                        samples: tuple[Fraction, ...] = DEFAULT_SAMPLES) -> ScenarioResult:
    """3-step deformation of h_m (m >= 2): a1 = x1, a2 = x2, y = y1."""
    if m < 2:
        raise ScenarioRejectedError(
            "the 3-dimensional Heisenberg algebra (m = 1) is rigid in its "
            "nilpotent variety; the construction needs m > 1")
    L = heisenberg(m)
    dec = _unit_decomposition(L.dim, 0, 2)  # x1 and x2
    defm = deform_codim2(L, dec, unit(L.dim, 1), variety=nil(3), samples=samples)
    wit = witness(defm, samples)
    details = (("a1", "x1"), ("a2", "x2"), ("y", "y1"),
               ("classes", "; ".join(_sample_classes(defm, samples))))
    return ScenarioResult("heis-nonrigid", defm, wit, details)


def scenario_graph(g: GraphSpec,
                   samples: tuple[Fraction, ...] = DEFAULT_SAMPLES) -> ScenarioResult:
    """At-most-3-step deformation of a graph algebra.

    Excluded inputs: the one-edge-two-vertex graph (the Heisenberg
    algebra) and graphs on fewer than 3 vertices.
    """
    L = graph_algebra(g)
    if L.dim <= 2:
        raise ScenarioRejectedError(
            "graphs with at most two vertices and no edges give abelian "
            "algebras of dimension <= 2, which are rigid at this size")
    if invariant_vector(L) == invariant_vector(heisenberg(1)):
        raise ScenarioRejectedError(
            "this graph algebra is the 3-dimensional Heisenberg algebra, "
            "which is rigid in its nilpotent variety")
    m = g.vertex_count
    if not g.edges:
        # no edges: derivation of the abelian codim-1 ideal <v2, ..., vm>
        ideal = Subspace.from_vectors(m, [unit(m, i) for i in range(1, m)])
        d = Matrix([[1 if (r, c) == (2, 1) else 0 for c in range(m)]
                    for r in range(m)])  # v2 -> v3, rank one, nilpotent
        defm = deform_gh(L, ideal, unit(m, 0), d, variety=nil(3), samples=samples)
        details = (("case", "edgeless"), ("derivation", "v2 -> v3"),
                   ("classes", "; ".join(_sample_classes(defm, samples))))
    elif len(g.edges) == 1:
        (i, j) = g.edges[0]
        y_vertex = next(v for v in range(1, m + 1) if v not in (i, j))
        dec = _unit_decomposition(L.dim, i - 1, m)  # v_i and the edge
        defm = deform_codim2(L, dec, unit(L.dim, y_vertex - 1),
                             variety=nil(3), samples=samples)
        details = (("case", "single-edge"),
                   ("a1", L.names[i - 1]), ("a2", L.names[m]),
                   ("y", L.names[y_vertex - 1]),
                   ("classes", "; ".join(_sample_classes(defm, samples))))
    else:
        (i, _) = g.edges[0]
        dec = _unit_decomposition(L.dim, i - 1, m)  # v_i and the first edge
        defm = deform_codim2(L, dec, unit(L.dim, m + 1),
                             variety=nil(3), samples=samples)
        details = (("case", "multi-edge"),
                   ("a1", L.names[i - 1]), ("a2", L.names[m]),
                   ("y", L.names[m + 1]),
                   ("classes", "; ".join(_sample_classes(defm, samples))))
    return ScenarioResult("graph-nonrigid", defm, witness(defm, samples), details)


# -- abelian-factor dispatcher ----------------------------------------------


def _lift(v: Vector, total: int) -> Vector:
    return tuple(v) + zero_vector(total - len(v))


def _is_h1(L: LieAlgebra) -> bool:
    return L.dim == 3 and nilpotency_class(L) == 2


def _branch_block(L, base_dim: int, l: int, variety: Variety, samples):
    """Non-abelian bracket supported on the factor coordinates."""
    n = L.dim
    if variety.kind == "nil":
        if l < 3:
            raise LieforgeError("block branch in a nilpotent variety needs l >= 3")
        phi = Cochain2(n, {(base_dim, base_dim + 1): unit(n, base_dim + 2)})
        label = "heisenberg block on c1, c2, c3"
    else:
        phi = Cochain2(n, {(base_dim, base_dim + 1): unit(n, base_dim + 1)})
        label = "solvable block [c1, c2] = c2"
    defm = make_deformation(L, phi, "abelian_factor_block",
                            variety=variety, samples=samples)
    return defm, (("branch", "a:factor-block"), ("block", label))


def _branch_nonperfect(L, base: LieAlgebra, l: int, variety: Variety, samples):
    """l = 1: a1 = the factor generator a, a2 = b outside [g, g], y = a."""
    n = L.dim
    m = base.dim
    comm = commutator(base)
    h_vectors = [_lift(r, n) for r in comm.basis.entries]
    span = list(h_vectors)
    b_vec = None
    covered = Subspace.from_vectors(n, span)
    for i in range(m):
        cand = unit(n, i)
        if not covered.contains(cand):
            if b_vec is None:
                b_vec = cand
            else:
                span.append(cand)
                h_vectors.append(cand)
            covered = Subspace.from_vectors(n, span + [b_vec])
    assert b_vec is not None  # base is non-perfect
    a_vec = unit(n, m)
    dec = BasisDecomposition.build(a_vec, b_vec, h_vectors)
    defm = deform_codim2(L, dec, a_vec, variety=variety, samples=samples)
    return defm, (("branch", "b:non-perfect"), ("a2_coordinate", str(b_vec.index(1))))


def _branch_l2(L, base: LieAlgebra, variety: Variety, samples):
    """NIL, l = 2: a1 = c1, a2 = first generator-level vector, y = c2."""
    n = L.dim
    m = base.dim
    adapted = adapted_basis(base)
    x11 = next(v for v, level in adapted if level == 1)
    h_vectors = [_lift(v, n) for v, level in adapted if not v == x11]
    h_vectors.append(unit(n, m + 1))
    dec = BasisDecomposition.build(unit(n, m), _lift(x11, n), h_vectors)
    defm = deform_codim2(L, dec, unit(n, m + 1), variety=variety, samples=samples)
    return defm, (("branch", "c:l2"),)


def _degree2_dependent_pair(base: LieAlgebra):
    """First generator pair whose bracket depends on the others plus g^3."""
    chain = series(base).lower_central
    g3 = chain[2] if len(chain) > 2 else Subspace.zero(base.dim)
    adapted = adapted_basis(base)
    gens = [v for v, level in adapted if level == 1]
    pairs = list(itertools.combinations(range(len(gens)), 2))
    brackets = {pq: base.bracket(gens[pq[0]], gens[pq[1]]) for pq in pairs}
    for pq in pairs:
        others = [brackets[rs] for rs in pairs if rs != pq]
        span = Subspace.from_vectors(base.dim, others + list(g3.basis.entries))
        if span.contains(brackets[pq]):
            return gens[pq[0]], gens[pq[1]]
    return None


def _branch_dependent(L, base: LieAlgebra, variety: Variety, samples):
    """NIL, l = 1, 2-step quotient not free: deform a dependent pair onto c1."""
    n = L.dim
    m = base.dim
    pair = _degree2_dependent_pair(base)
    assert pair is not None, "dispatch requires a non-free 2-step quotient"
    u, v = pair
    # a1 = first generator of the pair, a2 = second, y = c1;
    # h carries everything else including c1 itself.
    adapted = adapted_basis(base)
    h_vectors = [_lift(w, n) for w, _ in adapted if not (w == u or w == v)]
    h_vectors.append(unit(n, m))
    dec = BasisDecomposition.build(_lift(u, n), _lift(v, n), h_vectors)
    defm = deform_codim2(L, dec, unit(n, m), variety=variety, samples=samples)
    return defm, (("branch", "d:dependent-pair"),)


def _in_shrinking_set(base: LieAlgebra, x: Vector, g2: Subspace) -> bool:
    """x kills g^2 and ad_x has rank at most 1."""
    for row in g2.basis.entries:
        if not vec_is_zero(base.bracket(x, row)):
            return False
    images = [base.bracket_vec_basis(x, j) for j in range(base.dim)]
    return Subspace.from_vectors(base.dim, images).dim <= 1


def _shrinking_candidates(base: LieAlgebra):
    """Deterministic candidate order: adapted vectors deepest level first,
    then pairwise sums and differences."""
    adapted = adapted_basis(base)
    for v, level in adapted:
        yield v, level
    chain = series(base).lower_central
    for (u, _), (v, _) in itertools.combinations(adapted, 2):
        for coeff in (Fraction(1), Fraction(-1)):
            w = vec_add(u, vec_scale(coeff, v))
            level = 0
            for i, term in enumerate(chain):
                if term.contains(w):
                    level = i + 1
                else:
                    break
            if level and not vec_is_zero(w):
                yield w, level


def _branch_free_quotient(L, base: LieAlgebra, variety: Variety, samples):
    """NIL, l = 1, free 2-step quotient: search the rank-<=1 set."""
    n = L.dim
    m = base.dim
    chain = series(base).lower_central
    g2 = chain[1]
    k_class = nilpotency_class(base)
    hits = [(level, pos, v) for pos, (v, level)
            in enumerate(_shrinking_candidates(base))
            if _in_shrinking_set(base, v, g2)]
    if not hits:
        raise SearchExhaustedError(
            "no vector with [x, g^2] = 0 and rank(ad_x) <= 1 found among the "
            f"{sum(1 for _ in _shrinking_candidates(base))} candidates "
            "(adapted vectors and their pairwise {1,-1} sums); widen the "
            "candidate order if the input is genuinely in this case")
    r0 = min(level for level, _, _ in hits)
    level_hits = sorted((pos, v) for level, pos, v in hits if level == r0)
    y0 = level_hits[0][1]
    n1 = base.dim - g2.dim
    if r0 == 1:
        if n1 != 2:
            raise SearchExhaustedError(
                f"a depth-1 rank-one vector exists but the algebra has {n1} "
                "generators; expected exactly 2 (diagnostic: the dispatch "
                "reached an input outside the covered case split)")
        if k_class < 3:
            raise SearchExhaustedError(
                "free 2-step quotient on 2 generators with class < 3 is the "
                "Heisenberg algebra; it should have been rejected earlier")
        adapted = adapted_basis(base)
        x1 = next(v for v, level in adapted if level == 1
                  and Subspace.from_vectors(
                      base.dim,
                      list(g2.basis.entries) + [y0, v]).dim == g2.dim + 2)
        mid = base.bracket(x1, y0)
        g3 = chain[2] if len(chain) > 2 else Subspace.zero(base.dim)
        if vec_is_zero(mid) or g3.contains(mid):
            raise SearchExhaustedError(
                "the bracket of the two generators fell into the third "
                "lower-central term, contradicting freeness of the 2-step "
                "quotient (diagnostic: dispatch reached an uncovered input)")
        deep = [v for v, level in adapted if level >= 3]
        h_vectors = [_lift(x1, n)] + [_lift(v, n) for v in deep] + [unit(n, m)]
        dec = BasisDecomposition.build(_lift(y0, n), _lift(mid, n), h_vectors)
        defm = deform_codim2(L, dec, unit(n, m), variety=variety, samples=samples)
        return defm, (("branch", "e:free-quotient-r1"), ("r0", "1"))
    # r0 >= 2: pick a basis with [y0, b] = 0 for every b except one x1
    kernel = nullspace(base.adjoint(y0))
    adapted = adapted_basis(base)
    inside = [v for v, level in adapted if level >= 2]
    covered = Subspace.from_vectors(base.dim, inside)
    for row in kernel.basis.entries:
        if not covered.contains(row):
            inside.append(row)
            covered = Subspace.from_vectors(base.dim, inside)
    if kernel.dim == base.dim:
        x1 = next(v for v, level in adapted if level == 1)
        inside = [v for v in inside if not v == x1]
    else:
        x1 = next(unit(base.dim, i) for i in range(base.dim)
                  if not kernel.contains(unit(base.dim, i)))
    h_vectors = [_lift(v, n) for v in inside]
    dec = BasisDecomposition.build(_lift(x1, n), unit(n, m), h_vectors)
    defm = deform_codim2(L, dec, _lift(y0, n), variety=variety, samples=samples)
    return defm, (("branch", "e:free-quotient-r2plus"), ("r0", str(r0)))


def scenario_abelian_factor(base: LieAlgebra, l: int, variety: Variety,
                            samples: tuple[Fraction, ...] = DEFAULT_SAMPLES) -> ScenarioResult:
    """Non-trivial deformation of base (+) abelian(l) inside the variety.

    Dispatches on the variety and the factor size: a fixed non-abelian
    block on the factor when it is large enough, the non-perfect
    construction for a 1-dimensional factor outside nilpotent
    varieties, and the two nilpotent l = 1 cases split by whether the
    2-step quotient of the base is free.  The pair (Heisenberg(1), l=1)
    in a nilpotent variety is the unique rejected case.
    """
    if l < 1:
        raise LieforgeError("the abelian factor must have dimension >= 1")
    base.require_valid()
    L = direct_sum(base, abelian(l))
    variety_membership(L, variety)

    if variety.kind == "nil":
        k = variety.k
        if k < 2:
            raise LieforgeError(
                "nilpotent dispatch needs k >= 2 (at k = 1 the variety is a "
                "single abelian point)")
        if k > L.dim - 1:
            raise LieforgeError(
                f"the step bound k = {k} exceeds dim - 1 = {L.dim - 1}")
        if l >= 3:
            defm, details = _branch_block(L, base.dim, l, variety, samples)
        elif l == 2:
            defm, details = _branch_l2(L, base, variety, samples)
        else:
            if _is_h1(base):
                raise ScenarioRejectedError(
                    "the Heisenberg algebra plus a line is rigid in the "
                    "2-step variety of dimension 4 (a nilpotent algebra with "
                    "an abelian factor is rigid there exactly in this case)")
            chain = series(base).lower_central
            g2 = chain[1]
            g3 = chain[2] if len(chain) > 2 else Subspace.zero(base.dim)
            n1 = base.dim - g2.dim
            n2 = g2.dim - g3.dim
            if n2 < n1 * (n1 - 1) // 2:
                defm, details = _branch_dependent(L, base, variety, samples)
            else:
                preds = structure_predicates(base)
                assert not preds.has_abelian_factor, \
                    "a free 2-step quotient is incompatible with an abelian factor"
                defm, details = _branch_free_quotient(L, base, variety, samples)
    elif variety.kind == "sol":
        if variety.k < 2:
            raise LieforgeError(
                "solvable dispatch needs k >= 2 (at k = 1 the variety is a "
                "single abelian point)")
        if l >= 2:
            defm, details = _branch_block(L, base.dim, l, variety, samples)
        else:
            assert not structure_predicates(base).is_perfect
            defm, details = _branch_nonperfect(L, base, l, variety, samples)
    else:
        if l >= 2:
            defm, details = _branch_block(L, base.dim, l, variety, samples)
        else:
            if structure_predicates(base).is_perfect:
                raise LieforgeError(
                    "no uniform construction exists for a perfect base with "
                    "a 1-dimensional factor (it may be rigid or not); see "
                    "the exceptional-perfect scenario for a non-rigid case")
            defm, details = _branch_nonperfect(L, base, l, variety, samples)

    wit = witness(defm, samples)
    details = details + (("variety", str(variety)),)
    return ScenarioResult("abelian-factor", defm, wit, details)
