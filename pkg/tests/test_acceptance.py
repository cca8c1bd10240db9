"""Acceptance suite: one test per criterion, exact arithmetic throughout.

Every check is deterministic and asserted with exact equality.  Each
test prints a single PASS line when it completes (visible with
``pytest -s``); an assertion failure marks the criterion FAILED.
"""

import random

import pytest

from lieforge.catalog import (
    GraphSpec,
    abelian,
    aff1,
    catalog_names,
    contraction_example,
    graph_algebra,
    heisenberg,
    named,
)
from lieforge.cohomology import (
    CERTIFIED_RIGID,
    Cochain2,
    LIE,
    coboundary,
    cohomology,
    dual_number_oracle,
    in_tangent_space,
    nil,
    nilpotency_constraint,
    nilpotency_constraint_composed,
    pair_list,
    rigidity_certificate,
    sol,
)
from lieforge.core import (
    BasisDecomposition,
    MultilinearMap,
    adjoint_restricted,
    center,
    change_of_basis,
    commutator,
    cyclic_sum,
    direct_sum,
    functional_product,
    invariant_vector,
    killing_form,
    nilpotency_class,
    solvability_class,
    structure_predicates,
    unit,
)
from lieforge.deform import (
    DEFAULT_SAMPLES,
    NONTRIVIAL,
    deform_codim2,
    scenario_abelian_factor,
    scenario_free_nilpotent,
    scenario_graph,
    scenario_heisenberg,
    witness,
)
from lieforge.errors import ScenarioRejectedError, SingularMatrixError
from lieforge.hall import free_nilpotent, hall_basis, left_normed_word, necklace_layer_sizes, normalize
from lieforge.linalg import Matrix, Subspace, vector

SEED = 20220715


def report(number: int, text: str):
    print(f"ACCEPTANCE {number:2d} PASS: {text}")


def suite_catalog():
    algebras = [(name, named(name)) for name in catalog_names()]
    algebras += [
        ("heis1", heisenberg(1)),
        ("heis2", heisenberg(2)),
        ("abelian3", abelian(3)),
        ("path3", graph_algebra(GraphSpec(3, ((1, 2), (2, 3))))),
    ]
    return algebras


def varieties_containing(L):
    out = [LIE]
    k = nilpotency_class(L)
    if k is not None:
        out.append(nil(max(k, 1)))
    s = solvability_class(L)
    if s is not None:
        out.append(sol(max(s, 1)))
    return out


def random_cochain(rng, n, span=2):
    return Cochain2(n, {pair: [rng.randint(-span, span) for _ in range(n)]
                        for pair in pair_list(n)})


def test_criterion_01_whitehead():
    space = cohomology(named("sl2"), LIE)
    assert space.H_dim == 0
    assert rigidity_certificate(named("sl2"), LIE) == CERTIFIED_RIGID
    report(1, "H^2(sl2) = 0 in the full variety (Whitehead)")


def test_criterion_02_semisimple_plus_factor():
    L = direct_sum(named("sl2"), abelian(1))
    assert cohomology(L, LIE).H_dim == 0
    report(2, "H^2(sl2 + line) = 0 in the full variety")


def test_criterion_03_exceptional_base():
    assert cohomology(named("sl2_sd_c2"), LIE).H_dim == 0
    report(3, "H^2(sl2 acting on C^2, dim 5) = 0 in the full variety")


def test_criterion_04_heisenberg_rigidity():
    for m in (1, 2, 3):
        space = cohomology(heisenberg(m), nil(2))
        assert space.H_dim == 0, f"H nonzero for m={m}"
    report(4, "H^2_{2-nil}(h_m) = 0 for m = 1, 2, 3")


FREE_PAIRS = ((2, 2), (3, 2), (2, 3), (4, 2), (2, 4))


def test_criterion_05_free_nilpotent_rigidity():
    for (m, k) in FREE_PAIRS:
        space = cohomology(free_nilpotent(m, k), nil(k))
        assert space.H_dim == 0, f"H nonzero for (m,k)=({m},{k})"
    report(5, "H^2_{k-nil}(free_k(m)) = 0 for (m,k) in "
              "{(2,2),(3,2),(2,3),(4,2),(2,4)}")


def test_criterion_06_free_nilpotent_nonrigidity():
    for (m, k) in FREE_PAIRS:
        if (m, k) == (2, 2):
            with pytest.raises(ScenarioRejectedError):
                scenario_free_nilpotent(m, k)
            continue
        res = scenario_free_nilpotent(m, k)
        assert res.deformation.checks.cocycle
        assert res.deformation.checks.direction_is_bracket
        assert res.witness.verdict == NONTRIVIAL
        for t in DEFAULT_SAMPLES:
            moved = res.deformation.evaluate(t)
            assert moved.validate().ok
            assert nilpotency_class(moved) == k + 1
    report(6, "free_k(m) deforms to class k+1 at t in {1,-1,2,1/2}; "
              "(2,2) rejected")


def test_criterion_07_heisenberg_nonrigidity():
    for m in (2, 3):
        res = scenario_heisenberg(m)
        assert res.witness.verdict == NONTRIVIAL
        for t in DEFAULT_SAMPLES:
            moved = res.deformation.evaluate(t)
            assert moved.validate().ok
            assert nilpotency_class(moved) == 3
    report(7, "h_m deforms to class 3 at every sample for m = 2, 3")


def test_criterion_08_graph_theorem():
    good = (GraphSpec(3, ()), GraphSpec(4, ()), GraphSpec(3, ((1, 2),)),
            GraphSpec(3, ((1, 2), (2, 3))),
            GraphSpec(3, ((1, 2), (1, 3), (2, 3))),
            GraphSpec(4, ((1, 2), (1, 3), (1, 4))))
    for g in good:
        res = scenario_graph(g)
        assert res.witness.verdict == NONTRIVIAL
        for t in DEFAULT_SAMPLES:
            moved = res.deformation.evaluate(t)
            assert moved.validate().ok
            c = nilpotency_class(moved)
            assert c is not None and c <= 3
    for g in (GraphSpec(2, ((1, 2),)), GraphSpec(1, ()), GraphSpec(2, ())):
        with pytest.raises(ScenarioRejectedError):
            scenario_graph(g)
    report(8, "pinned graphs deform to at most 3 steps; h1/a1/a2 rejected")


def test_criterion_09_abelian_factor_suite():
    # "2-dim solvable" is aff1 itself; it is exercised both in its
    # solvable variety and in the unconstrained one.
    suite = [
        (heisenberg(1), 1, nil(2), True),
        (heisenberg(1), 2, nil(2), False),
        (heisenberg(2), 1, nil(2), False),
        (heisenberg(2), 2, nil(2), False),
        (free_nilpotent(2, 3), 1, nil(3), False),
        (free_nilpotent(2, 3), 2, nil(3), False),
        (aff1(), 1, sol(2), False),
        (aff1(), 2, sol(2), False),
        (aff1(), 1, LIE, False),
        (aff1(), 2, LIE, False),
    ]
    for base, l, variety, expect_reject in suite:
        if expect_reject:
            with pytest.raises(ScenarioRejectedError):
                scenario_abelian_factor(base, l, variety)
            continue
        res = scenario_abelian_factor(base, l, variety)
        assert res.witness.verdict == NONTRIVIAL
        assert all(ok for _, ok in res.deformation.checks.variety_at_samples)
        for t in DEFAULT_SAMPLES:
            assert res.deformation.evaluate(t).validate().ok
    report(9, "abelian-factor dispatcher: all bases and l in {1,2} deform "
              "in-variety; (h1, l=1, nil:2) rejected")


def test_criterion_10_oracle_equivalence():
    rng = random.Random(SEED)
    checked = 0
    for label, L in suite_catalog() + [("free:2:3", free_nilpotent(2, 3))]:
        n = L.dim
        for variety in varieties_containing(L):
            for _ in range(25):
                omega = random_cochain(rng, n)
                direct = in_tangent_space(L, omega, variety)
                assert dual_number_oracle(L, omega, variety) == direct, \
                    f"oracle mismatch on {label} / {variety}"
                checked += 1
            for a in range(n):
                for b in range(n):
                    f = Matrix([[1 if (r, c) == (a, b) else 0
                                 for c in range(n)] for r in range(n)])
                    assert dual_number_oracle(L, coboundary(L, f), variety)
    report(10, f"dual-number oracle agrees with the linear systems on "
               f"{checked} random cochains plus every elementary coboundary")


def test_criterion_11_constraint_forms_agree():
    rng = random.Random(SEED + 1)
    for label, L in suite_catalog():
        n = L.dim
        for k in (1, 2, 3, 4):
            omega = random_cochain(rng, n)
            lhs = nilpotency_constraint(L, omega, k)
            rhs = nilpotency_constraint_composed(L, omega, k)
            assert lhs.equal_pointwise(rhs), f"forms differ on {label}, k={k}"
    report(11, "split-position and composition forms of the nilpotency "
               "constraint agree pointwise for k <= 4 across the catalog")


def test_criterion_12_hall_layers_and_grading():
    covered = []
    for m in (2, 3, 4):
        for k in (1, 2, 3, 4):
            sizes = necklace_layer_sizes(m, k)
            if sum(sizes) > 32:
                continue
            basis = hall_basis(m, k)
            assert basis.layer_sizes() == sizes
            for d, layer in enumerate(basis.layers, start=1):
                if m == 2 and d == 2:
                    assert len(layer) == 1
                else:
                    assert len(layer) >= 2
            if k >= 2:
                chains = {d: left_normed_word(basis, d) for d in range(2, k + 1)}
                x1 = basis.layers[0][0]
                for u in basis.words:
                    for v in basis.words:
                        if u.key == v.key or u.degree + v.degree > k:
                            continue
                        combo = normalize(basis, u, v)
                        target = u.degree + v.degree
                        want = tuple(a + b for a, b in
                                     zip(u.multidegree, v.multidegree))
                        for w, c in combo.items():
                            assert c != 0
                            assert w.multidegree == want
                        coeff = combo.get(chains[target], 0)
                        prev = (chains[target - 1] if target > 2
                                else basis.layers[0][1])
                        if (u, v) == (prev, x1):
                            assert coeff == 1
                        elif (u, v) == (x1, prev):
                            assert coeff == -1
                        else:
                            assert coeff == 0
            covered.append((m, k))
    assert (4, 3) in covered and (3, 4) in covered and (4, 4) not in covered
    report(12, f"Hall layer sizes match the necklace formula and the "
               f"bracket is multigraded with the chain-word coefficient "
               f"rule, on {len(covered)} (m,k) pairs up to dim 32")


def test_criterion_13_property_suites():
    rng = random.Random(SEED + 2)
    n = 4
    target = unit(n, 0)
    for _ in range(200):
        f, g, h = (vector([rng.randint(-3, 3) for _ in range(n)])
                   for _ in range(3))

        def wedge_times(a, b, c):
            m1 = functional_product([a, b, c], target)
            m2 = functional_product([b, a, c], target)
            values = {}
            for key in m1.values.keys() | m2.values.keys():
                v = tuple(x - y for x, y in zip(m1.get(key), m2.get(key)))
                if any(e != 0 for e in v):
                    values[key] = v
            return MultilinearMap(3, n, values)

        assert cyclic_sum(wedge_times(f, g, f)).is_zero()
        assert cyclic_sum(wedge_times(f, g, g)).is_zero()
        assert cyclic_sum(wedge_times(f, g, h)).equal_pointwise(
            cyclic_sum(wedge_times(h, f, g)))

    # trace decomposition across random nilpotent algebras/decompositions
    trace_checked = 0
    for L in (heisenberg(2), free_nilpotent(2, 3), free_nilpotent(3, 2),
              graph_algebra(GraphSpec(3, ((1, 2), (2, 3))))):
        comm = commutator(L)
        attempts = 0
        while trace_checked < 40 * 4 and attempts < 12:
            attempts += 1
            vectors = list(comm.basis.entries)
            for _ in range(4 * L.dim):
                cand = vector([rng.randint(-2, 2) for _ in range(L.dim)])
                trial = Subspace.from_vectors(L.dim, vectors + [cand])
                if trial.dim == len(vectors) + 1 and trial.dim <= L.dim - 2:
                    vectors.append(cand)
            if len(vectors) != L.dim - 2:
                continue
            try:
                dec = BasisDecomposition.build(
                    vector([rng.randint(-2, 2) for _ in range(L.dim)]),
                    vector([rng.randint(-2, 2) for _ in range(L.dim)]),
                    vectors)
            except SingularMatrixError:
                continue
            a1s, a2s = dec.a1_dual(), dec.a2_dual()
            h_space = Subspace.from_vectors(L.dim, vectors)
            for h in dec.h_basis():
                lhs = L.adjoint(h).trace()
                rhs = (sum(a * b for a, b in zip(a1s, L.bracket(h, dec.a1)))
                       + sum(a * b for a, b in zip(a2s, L.bracket(h, dec.a2)))
                       + adjoint_restricted(L, h, h_space).trace())
                assert lhs == rhs
                trace_checked += 1
    assert trace_checked >= 20

    # invariant stability under 20 random changes of basis per catalog entry
    for label, L in suite_catalog():
        inv = invariant_vector(L)
        for _ in range(20):
            while True:
                p = Matrix([[rng.randint(-2, 2) for _ in range(L.dim)]
                            for _ in range(L.dim)])
                try:
                    p.inverse()
                    break
                except SingularMatrixError:
                    continue
            assert invariant_vector(change_of_basis(L, p)) == inv
    report(13, "cyclic-functional identities (200 triples), trace "
               "decomposition, and invariant stability (20 basis changes "
               "per catalog algebra) all hold exactly")


def test_criterion_14_contraction_and_exceptional():
    L = contraction_example()
    dec = BasisDecomposition.build(unit(3, 0), unit(3, 1), [unit(3, 2)])
    defm = deform_codim2(L, dec, unit(3, 2), variety=LIE)
    at1 = defm.evaluate(1)
    assert at1.dim == 3
    assert killing_form(at1).rank() == 3  # nondegenerate
    assert center(at1).is_zero() and structure_predicates(at1).is_perfect

    gbar = direct_sum(named("sl2_sd_c2"), abelian(1))
    dec2 = BasisDecomposition.build(
        unit(6, 3), unit(6, 4),
        [unit(6, 0), unit(6, 1), unit(6, 2), unit(6, 5)])
    defm2 = deform_codim2(gbar, dec2, unit(6, 5), variety=LIE)
    wit = witness(defm2)
    assert not structure_predicates(gbar).is_perfect
    assert all(inv.is_perfect for _, inv in wit.sample_invariants)
    assert wit.verdict == NONTRIVIAL
    report(14, "contraction lands on a 3-dim algebra with nondegenerate "
               "Killing form at t = 1; the perfect 6-dim family flips "
               "perfection at every sample")


def test_open_question_h1_plus_line_2nil_dimension_reported():
    # Computed, not presumed: the 2-step tangent cohomology of h1 + line.
    L = direct_sum(heisenberg(1), abelian(1))
    space = cohomology(L, nil(2))
    assert space.H_dim >= 0
    assert space.Z_dim == space.B_dim + space.H_dim
    print(f"INFO: H^2_2-nil(h1 + a1) has Z={space.Z_dim} B={space.B_dim} "
          f"H={space.H_dim} (reported, not asserted)")
