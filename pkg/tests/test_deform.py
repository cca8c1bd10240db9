"""Deformation constructions, hypothesis checks, witnesses, scenarios."""

import random
from fractions import Fraction

import pytest

from lieforge.catalog import (
    GraphSpec,
    abelian,
    aff1,
    contraction_example,
    graph_algebra,
    heisenberg,
    named,
)
from lieforge.cohomology import (
    Cochain2,
    LIE,
    coboundary,
    dual_number_oracle,
    in_tangent_space,
    mu_cochain,
    nil,
    sol,
)
from lieforge.core import (
    BasisDecomposition,
    center,
    commutator,
    direct_sum,
    killing_form,
    nilpotency_class,
    structure_predicates,
    unit,
)
from lieforge.deform import (
    DEFAULT_SAMPLES,
    NONTRIVIAL,
    UNDETERMINED,
    WedgeCocycle,
    check_codim2_hypotheses,
    deform_codim2,
    deform_gh,
    dixmier_cocycle,
    make_deformation,
    scenario_abelian_factor,
    scenario_free_nilpotent,
    scenario_graph,
    scenario_heisenberg,
    witness,
)
from lieforge.errors import (
    HypothesisFailedError,
    InvalidDeformationError,
    LieforgeError,
    ScenarioRejectedError,
)
from lieforge.hall import free_nilpotent
from lieforge.linalg import Matrix, Subspace, vec_is_zero, vector


def unit_dec(n, a1, a2):
    rest = [unit(n, i) for i in range(n) if i not in (a1, a2)]
    return BasisDecomposition.build(unit(n, a1), unit(n, a2), rest)


def contraction_dec():
    return unit_dec(3, 0, 1)


# -- wedge cocycle and hypothesis checks -------------------------------------


def test_wedge_cocycle_support():
    L = heisenberg(2)
    dec = unit_dec(5, 0, 2)
    wedge = WedgeCocycle.build(dec, unit(5, 1))
    # phi(h, anything) = 0 for h in the complement subspace
    for h in dec.h_basis():
        for j in range(5):
            assert vec_is_zero(wedge.cochain.evaluate(h, unit(5, j)))
    assert wedge.cochain.evaluate(dec.a1, dec.a2) == unit(5, 1)


def test_wedge_cocycle_is_a_bracket():
    rng = random.Random(1)
    for L in (heisenberg(2), free_nilpotent(2, 3)):
        n = L.dim
        dec = unit_dec(n, 0, 1)
        y = vector([rng.randint(-2, 2) for _ in range(n)])
        wedge = WedgeCocycle.build(dec, y)
        defm = make_deformation(abelian(n), wedge.cochain, "test")
        assert defm.checks.direction_is_bracket


def test_check_codim2_contraction_example():
    L = contraction_example()
    report = check_codim2_hypotheses(L, contraction_dec(), unit(3, 2))
    assert report.ok


def test_check_codim2_detects_bad_y():
    L = contraction_example()
    # a1 does not centralize h = <y>
    report = check_codim2_hypotheses(L, contraction_dec(), unit(3, 0))
    assert not report.y_centralizes
    assert "y_centralizes" in report.failures()


def test_check_codim2_functional_identity_automatic_when_nilpotent():
    # any codimension-2 subalgebra of a nilpotent algebra passes clause (iii)
    rng = random.Random(9)
    for L in (heisenberg(2), free_nilpotent(2, 3), free_nilpotent(3, 2),
              graph_algebra(GraphSpec(3, ((1, 2), (2, 3))))):
        n = L.dim
        comm = commutator(L)
        for _ in range(6):
            vectors = list(comm.basis.entries)
            for _ in range(4 * n):
                cand = vector([rng.randint(-2, 2) for _ in range(n)])
                trial = Subspace.from_vectors(n, vectors + [cand])
                if trial.dim == len(vectors) + 1 and trial.dim <= n - 2:
                    vectors.append(cand)
            if len(vectors) != n - 2:
                continue
            h_space = Subspace.from_vectors(n, vectors)
            from lieforge.errors import SingularMatrixError
            try:
                dec = BasisDecomposition.build(
                    vector([rng.randint(-2, 2) for _ in range(n)]),
                    vector([rng.randint(-2, 2) for _ in range(n)]),
                    h_space.basis.entries)
            except SingularMatrixError:
                continue
            report = check_codim2_hypotheses(L, dec, unit(n, 0))
            assert report.functional_identity


def test_deform_codim2_rejects_failed_hypotheses():
    L = contraction_example()
    with pytest.raises(HypothesisFailedError) as err:
        deform_codim2(L, contraction_dec(), unit(3, 0))
    assert err.value.clause == "y_centralizes"


def test_deform_codim2_contraction_lands_on_sl2_proxy():
    L = contraction_example()
    defm = deform_codim2(L, contraction_dec(), unit(3, 2), variety=LIE)
    assert defm.checks.sc_mu_phi_zero and defm.checks.sc_phi_mu_zero
    at1 = defm.evaluate(1)
    assert at1.dim == 3
    assert at1.validate().ok
    assert killing_form(at1).rank() == 3
    preds = structure_predicates(at1)
    assert preds.is_perfect
    assert center(at1).is_zero()
    assert at1.bracket(unit(3, 0), unit(3, 1)) == unit(3, 2)


def test_deform_codim2_heisenberg_three_step():
    L = heisenberg(2)
    dec = unit_dec(5, 0, 2)
    defm = deform_codim2(L, dec, unit(5, 1), variety=nil(3))
    assert all(ok for _, ok in defm.checks.variety_at_samples)
    assert nilpotency_class(defm.evaluate(1)) == 3
    assert defm.evaluate(0).table == L.table


def test_deform_y_zero_gives_trivial_family():
    L = heisenberg(2)
    dec = unit_dec(5, 0, 2)
    defm = deform_codim2(L, dec, [0] * 5)
    assert defm.direction.is_zero()
    assert witness(defm).verdict == UNDETERMINED


def test_deformation_validates_at_random_t():
    rng = random.Random(17)
    res = scenario_heisenberg(2)
    for _ in range(5):
        t = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        assert res.deformation.evaluate(t).validate().ok


def test_make_deformation_rejects_non_cocycle():
    L = heisenberg(2)
    # phi(x1, z) = x1 is a bracket but sc(mu o phi)(x1, y1, z) = -z != 0
    bad = Cochain2(5, {(0, 4): unit(5, 0)})
    with pytest.raises(InvalidDeformationError):
        make_deformation(L, bad, "test")


def test_witness_of_rescaling_is_undetermined():
    # d1 of id/3 is mu/3; mu + t*mu/3 is isomorphic to mu at the samples
    L = named("sl2")
    f = Matrix.identity(3).scale(Fraction(1, 3))
    phi = coboundary(L, f)
    assert phi.values == mu_cochain(L).scale(Fraction(1, 3)).values
    defm = make_deformation(L, phi, "rescaling")
    assert witness(defm).verdict == UNDETERMINED


# -- Dixmier / Grunewald-O'Halloran -------------------------------------------


def test_dixmier_zero_derivation():
    L = abelian(3)
    ideal = Subspace.from_vectors(3, [unit(3, 1), unit(3, 2)])
    phi = dixmier_cocycle(L, ideal, unit(3, 0), Matrix.zero(3, 3))
    assert phi.is_zero()


def test_dixmier_on_abelian_any_matrix_is_cocycle():
    rng = random.Random(23)
    L = abelian(4)
    ideal = Subspace.from_vectors(4, [unit(4, i) for i in range(1, 4)])
    for _ in range(5):
        d_rows = [[0] * 4] + [[0] + [rng.randint(-2, 2) for _ in range(3)]
                              for _ in range(3)]
        d = Matrix(list(map(list, zip(*d_rows))))  # maps ideal into ideal
        defm = deform_gh(L, ideal, unit(4, 0), d)
        assert defm.checks.cocycle


def test_dixmier_rank_one_two_step():
    L = abelian(3)
    ideal = Subspace.from_vectors(3, [unit(3, 1), unit(3, 2)])
    d = Matrix([[0, 0, 0], [0, 0, 0], [0, 1, 0]])  # e2 -> e3
    defm = deform_gh(L, ideal, unit(3, 0), d, variety=nil(2))
    assert nilpotency_class(defm.evaluate(1)) == 2
    assert witness(defm).verdict == NONTRIVIAL


def test_dixmier_hypothesis_failures():
    L = heisenberg(1)
    good_ideal = Subspace.from_vectors(3, [unit(3, 1), unit(3, 2)])
    with pytest.raises(HypothesisFailedError):
        dixmier_cocycle(L, Subspace.from_vectors(3, [unit(3, 0)]),
                        unit(3, 1), Matrix.zero(3, 3))
    with pytest.raises(HypothesisFailedError):
        dixmier_cocycle(L, good_ideal, unit(3, 2), Matrix.zero(3, 3))  # x inside
    leaky = Matrix([[0, 1, 0], [0, 0, 0], [0, 0, 0]])  # e2 -> e1 outside ideal
    with pytest.raises(HypothesisFailedError):
        dixmier_cocycle(L, good_ideal, unit(3, 0), leaky)
    # non-abelian ideal: D(x) = x on aff1 + line breaks the Leibniz rule
    aff_line = direct_sum(aff1(), abelian(1))
    nonab_ideal = Subspace.from_vectors(3, [unit(3, 0), unit(3, 1)])
    bad_leibniz = Matrix([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    with pytest.raises(HypothesisFailedError) as err:
        dixmier_cocycle(aff_line, nonab_ideal, unit(3, 2), bad_leibniz)
    assert err.value.clause == "derivation"


# -- scenarios ----------------------------------------------------------------


def test_scenario_free_nilpotent_32():
    res = scenario_free_nilpotent(3, 2)
    assert res.witness.verdict == NONTRIVIAL
    for t in DEFAULT_SAMPLES:
        assert nilpotency_class(res.deformation.evaluate(t)) == 3
    assert res.detail("a1") == "x1"
    assert res.detail("a2") == "[x2,x1]"


def test_scenario_free_nilpotent_23():
    res = scenario_free_nilpotent(2, 3)
    base = res.deformation.base
    assert base.dim == 5
    assert nilpotency_class(base) == 3
    assert nilpotency_class(res.deformation.evaluate(1)) == 4
    assert res.witness.verdict == NONTRIVIAL


def test_scenario_free_nilpotent_rejects_22():
    with pytest.raises(ScenarioRejectedError):
        scenario_free_nilpotent(2, 2)


def test_scenario_heisenberg():
    for m in (2, 3):
        res = scenario_heisenberg(m)
        assert res.deformation.base.dim == 2 * m + 1
        assert nilpotency_class(res.deformation.evaluate(1)) == 3
        assert res.witness.verdict == NONTRIVIAL
        assert all(ok for _, ok in res.deformation.checks.variety_at_samples)
    with pytest.raises(ScenarioRejectedError):
        scenario_heisenberg(1)


def test_scenario_heisenberg_direction_in_tangent_space():
    res = scenario_heisenberg(2)
    L = res.deformation.base
    phi = res.deformation.direction
    assert in_tangent_space(L, phi, nil(3))
    assert dual_number_oracle(L, phi, nil(3))


def test_scenario_graph_path():
    res = scenario_graph(GraphSpec(3, ((1, 2), (2, 3))))
    assert res.detail("case") == "multi-edge"
    at1 = res.deformation.evaluate(1)
    assert nilpotency_class(at1) == 3
    assert res.witness.verdict == NONTRIVIAL
    # [v1, a12]_1 = a23
    assert at1.bracket(unit(5, 0), unit(5, 3)) == unit(5, 4)


def test_scenario_graph_single_edge():
    res = scenario_graph(GraphSpec(3, ((1, 2),)))
    assert res.detail("case") == "single-edge"
    assert res.detail("y") == "v3"
    assert nilpotency_class(res.deformation.evaluate(1)) == 3
    assert res.witness.verdict == NONTRIVIAL


def test_scenario_graph_edgeless():
    res = scenario_graph(GraphSpec(3, ()))
    assert res.detail("case") == "edgeless"
    assert nilpotency_class(res.deformation.evaluate(1)) == 2
    assert res.witness.verdict == NONTRIVIAL


def test_scenario_graph_rejections():
    with pytest.raises(ScenarioRejectedError):
        scenario_graph(GraphSpec(2, ((1, 2),)))  # Heisenberg
    with pytest.raises(ScenarioRejectedError):
        scenario_graph(GraphSpec(1, ()))
    with pytest.raises(ScenarioRejectedError):
        scenario_graph(GraphSpec(2, ()))


def test_scenario_graph_triangle_and_star():
    for g in (GraphSpec(3, ((1, 2), (1, 3), (2, 3))),
              GraphSpec(4, ((1, 2), (1, 3), (1, 4)))):
        res = scenario_graph(g)
        at1 = res.deformation.evaluate(1)
        assert nilpotency_class(at1) is not None and nilpotency_class(at1) <= 3
        assert res.witness.verdict == NONTRIVIAL


# -- abelian factor dispatcher ------------------------------------------------


def test_abelian_factor_rejects_h1_line_nilpotent():
    with pytest.raises(ScenarioRejectedError):
        scenario_abelian_factor(heisenberg(1), 1, nil(2))


def test_abelian_factor_h1_l2():
    res = scenario_abelian_factor(heisenberg(1), 2, nil(2))
    assert res.detail("branch") == "c:l2"
    defm = res.deformation
    assert all(ok for _, ok in defm.checks.variety_at_samples)
    assert res.witness.verdict == NONTRIVIAL
    # commutator grows by one, class stays 2
    assert commutator(defm.evaluate(1)).dim == commutator(defm.base).dim + 1
    assert nilpotency_class(defm.evaluate(1)) == 2


def test_abelian_factor_h2_l1_dependent_branch():
    res = scenario_abelian_factor(heisenberg(2), 1, nil(2))
    assert res.detail("branch") == "d:dependent-pair"
    assert res.witness.verdict == NONTRIVIAL
    assert all(ok for _, ok in res.deformation.checks.variety_at_samples)
    assert commutator(res.deformation.evaluate(1)).dim == 2


def test_abelian_factor_free_nilpotent_l1_free_branch():
    res = scenario_abelian_factor(free_nilpotent(2, 3), 1, nil(3))
    assert res.detail("branch") == "e:free-quotient-r2plus"
    assert res.witness.verdict == NONTRIVIAL
    assert all(ok for _, ok in res.deformation.checks.variety_at_samples)
    # the factor line is absorbed: no abelian factor after deformation
    base_preds = structure_predicates(res.deformation.base)
    moved_preds = structure_predicates(res.deformation.evaluate(1))
    assert base_preds.has_abelian_factor and not moved_preds.has_abelian_factor


def test_abelian_factor_free_branch_r1_case():
    # dim-4 filiform: x2 kills g^2 and has rank-one adjoint, so r0 = 1
    from lieforge.core import LieAlgebra
    filiform = LieAlgebra(4, {
        (0, 1): [0, 0, 1, 0],   # [x1, x2] = z
        (0, 2): [0, 0, 0, 1],   # [x1, z] = w
    }, names=("x1", "x2", "z", "w"))
    filiform.require_valid()
    res = scenario_abelian_factor(filiform, 1, nil(3))
    assert res.detail("branch") == "e:free-quotient-r1"
    assert res.witness.verdict == NONTRIVIAL
    assert all(ok for _, ok in res.deformation.checks.variety_at_samples)
    assert commutator(res.deformation.evaluate(1)).dim == 3


def test_abelian_factor_l3_nil_block():
    res = scenario_abelian_factor(heisenberg(1), 3, nil(2))
    assert res.detail("branch") == "a:factor-block"
    assert res.witness.verdict == NONTRIVIAL
    assert all(ok for _, ok in res.deformation.checks.variety_at_samples)


def test_abelian_factor_solvable():
    res = scenario_abelian_factor(aff1(), 1, sol(2))
    assert res.detail("branch") == "b:non-perfect"
    assert res.witness.verdict == NONTRIVIAL
    assert all(ok for _, ok in res.deformation.checks.variety_at_samples)
    assert commutator(res.deformation.evaluate(1)).dim == 2
    res2 = scenario_abelian_factor(aff1(), 2, sol(2))
    assert res2.detail("branch") == "a:factor-block"
    assert res2.witness.verdict == NONTRIVIAL


def test_abelian_factor_lie_variants():
    res = scenario_abelian_factor(aff1(), 1, LIE)
    assert res.detail("branch") == "b:non-perfect"
    assert res.witness.verdict == NONTRIVIAL
    res2 = scenario_abelian_factor(heisenberg(1), 2, LIE)
    assert res2.detail("branch") == "a:factor-block"
    assert res2.witness.verdict == NONTRIVIAL


def test_abelian_factor_perfect_l1_lie_has_no_uniform_branch():
    with pytest.raises(LieforgeError):
        scenario_abelian_factor(named("sl2"), 1, LIE)


def test_exceptional_perfect_deformation():
    # sl2 (x) C^2 plus a line: [d, e]_t = t f restores perfection
    g = named("sl2_sd_c2")
    gbar = direct_sum(g, abelian(1))
    dec = BasisDecomposition.build(
        unit(6, 3), unit(6, 4),
        [unit(6, 0), unit(6, 1), unit(6, 2), unit(6, 5)])
    defm = deform_codim2(gbar, dec, unit(6, 5), variety=LIE)
    wit = witness(defm)
    assert wit.verdict == NONTRIVIAL
    assert not structure_predicates(gbar).is_perfect
    assert structure_predicates(defm.evaluate(1)).is_perfect
    for _, inv in wit.sample_invariants:
        assert inv.is_perfect and not inv.has_abelian_factor


def test_scenario_directions_live_in_variety_tangent_space():
    cases = [
        (scenario_heisenberg(2), nil(3)),
        (scenario_free_nilpotent(3, 2), nil(3)),
        (scenario_graph(GraphSpec(3, ((1, 2), (2, 3)))), nil(3)),
        (scenario_abelian_factor(heisenberg(1), 2, nil(2)), nil(2)),
        (scenario_abelian_factor(aff1(), 1, sol(2)), sol(2)),
    ]
    for res, variety in cases:
        L = res.deformation.base
        phi = res.deformation.direction
        assert in_tangent_space(L, phi, variety)
        assert dual_number_oracle(L, phi, variety)


def test_scenario_heisenberg_bracket_value():
    res = scenario_heisenberg(2)
    at1 = res.deformation.evaluate(1)
    # [x1, x2]_1 = y1
    assert at1.bracket(unit(5, 0), unit(5, 2)) == unit(5, 1)


def test_scenario_free_nilpotent_32_picks_next_layer_word():
    res = scenario_free_nilpotent(3, 2)
    assert res.detail("y") == "[x3,x1]"  # first degree-2 word after the chain
    at1 = res.deformation.evaluate(1)
    base = res.deformation.base
    # [x1, [x2,x1]]_1 = t*y with t = 1
    names = list(base.names)
    a2_idx, y_idx = names.index("[x2,x1]"), names.index("[x3,x1]")
    assert at1.bracket(unit(6, 0), unit(6, a2_idx)) == unit(6, y_idx)
