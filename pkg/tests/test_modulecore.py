import random
from fractions import Fraction

import pytest

from mbrank.catalog import load_catalog
from mbrank.exact import QQ, Matrix, rank_and_kernel
from mbrank.modules import (
    FiniteModule,
    NotAModuleError,
    NotConciseError,
    direct_sum_concise,
    dual_module,
    end_dim,
    fingerprint,
    from_e_space,
    hom_basis,
    initial_module,
    isomorphic_modules,
    local_invariants,
    min_generators_global,
    module_flags,
    multiplication_tensor,
    nilpotency_bound,
    self_dual_verdict,
    submodules_of_degree,
    support_decomposition,
)
from mbrank.tensor import MatrixForm, e_space, matrix_form_to_tensor, permute_tensor

CAT = load_catalog()


def test_from_espace_regular_jet_chain():
    mod = CAT.module_of("T_{1,1}")
    x = mod.actions[0]
    # x acts as the full jet shift and its powers give the other variables
    power = x
    for k in range(1, 4):
        power = power * x
        assert mod.actions[k] == power or k == 0
    assert nilpotency_bound(mod) == 5


def test_from_espace_needs_commutation():
    a = Matrix(QQ, [[0, 1], [0, 0]])
    b = Matrix(QQ, [[0, 0], [1, 0]])
    from mbrank.tensor import ESpace

    with pytest.raises(NotAModuleError):
        from_e_space(ESpace((Matrix.identity(QQ, 2), a, b), (1, 0)))


def test_multiplication_tensor_round_trip():
    for name in ("T_{1,10}", "T_{2,7}", "T_{3,2}"):
        mod = CAT.module_of(name)
        assert multiplication_tensor(mod) == CAT.tensor_of(name)
        assert from_e_space(e_space(multiplication_tensor(mod))) == mod


def test_multiplication_tensor_of_example_module():
    # the 4-dim module with basis 1, x, y, y^2 over k[x,y]/(x^2, xy, y^3)
    form = MatrixForm.from_text(["x0 0 0 0", "x1 x0 0 0", "x2 0 x0 0", "x3 0 x2 x0"])
    t = matrix_form_to_tensor(form)
    mod = from_e_space(e_space(t))
    assert multiplication_tensor(mod) == t
    inv = local_invariants(mod)
    assert inv.cyclic and not inv.cocyclic


def test_dual_module_involution_and_transpose_relation():
    for name in ("T_{1,4}", "T_{2,7}", "T_{1,16}"):
        mod = CAT.module_of(name)
        assert dual_module(dual_module(mod)) == mod
        mu_dual = multiplication_tensor(dual_module(mod))
        assert mu_dual == permute_tensor(multiplication_tensor(mod), "ACB")


def test_dual_of_cyclic_is_cocyclic():
    mod = CAT.module_of("T_{1,4}")
    inv = local_invariants(mod)
    inv_dual = local_invariants(dual_module(mod))
    assert inv.cyclic and not inv.cocyclic
    assert inv_dual.cocyclic and not inv_dual.cyclic


def test_module_flags():
    m20 = CAT.module_of("M_{20}")
    assert module_flags(m20) == (True, False)
    for i in (1, 5, 9):
        assert module_flags(CAT.module_of(f"M_{{1,{i}}}")) == (True, True)
    degenerate = FiniteModule([Matrix.zero(QQ, 2, 2)], m=2)
    concise, _ = module_flags(degenerate)
    assert not concise


def test_support_decomposition_m21():
    dec = support_decomposition(CAT.module_of("M_{2,1}"))
    assert dec.degree_decomposition() == (3, 2)
    assert dec.pieces[0].point == (0, 0, 0, 0)
    assert dec.pieces[1].point[3] == 1


def test_support_decomposition_local_and_semisimple():
    assert support_decomposition(CAT.module_of("M_{1,7}")).cardinality == 1
    assert support_decomposition(CAT.module_of("M_{5,1}")).degree_decomposition() == (1, 1, 1, 1, 1)


def test_local_invariants_values():
    m11 = CAT.module_of("M_{1,11}")
    inv = local_invariants(m11)
    assert (inv.min_generators, inv.socle_dim, inv.hilbert) == (3, 2, (3, 2))
    m1 = CAT.module_of("M_{1,1}")
    inv1 = local_invariants(m1)
    assert (inv1.min_generators, inv1.socle_dim, inv1.hilbert) == (1, 1, (1, 1, 1, 1, 1))
    m20 = CAT.module_of("M_{20}")
    inv20 = local_invariants(m20)
    assert (inv20.min_generators, inv20.socle_dim, inv20.hilbert) == (2, 2, (2, 2, 1))


def test_hilbert_sums_to_dim():
    for name in ("M_{1,2}", "M_{1,11}", "M_{16}", "N_7"):
        inv = local_invariants(CAT.module_of(name))
        assert sum(inv.hilbert) == inv.dim
        assert inv.hilbert[0] == inv.min_generators


def test_end_dimensions():
    assert end_dim(CAT.module_of("N_7")) == 5
    assert end_dim(CAT.module_of("N_8")) == 5
    assert end_dim(CAT.module_of("M_{1,1}")) == 5


def test_hom_disjoint_supports_vanishes():
    m_a = FiniteModule([Matrix(QQ, [[0]])], m=1)
    m_b = FiniteModule([Matrix(QQ, [[1]])], m=1)
    assert hom_basis(m_a, m_b) == []


def test_isomorphic_modules_identity_witness():
    mod = CAT.module_of("M_{1,3}")
    res = isomorphic_modules(mod, mod)
    assert res.verdict == "yes" and res.witness == Matrix.identity(QQ, 5)


def test_m18_not_isomorphic_to_dual():
    m18 = CAT.module_of("M_{18}")
    assert isomorphic_modules(m18, dual_module(m18)).verdict == "probably-not"
    assert self_dual_verdict(m18)[0] == "probably-not"


def test_m16_self_dual_up_to_variables():
    m16 = CAT.module_of("M_{16}")
    assert self_dual_verdict(m16)[0] == "yes"


def test_submodules_m11_dual_all_cyclic():
    mod = dual_module(CAT.module_of("M_{1,11}")).reduce_mod_p(5)
    subs = submodules_of_degree(mod, 4)
    assert subs and all(s.cyclic for s in subs)


def test_submodules_m10_two_generators():
    mod = CAT.module_of("M_{1,10}").reduce_mod_p(5)
    subs = submodules_of_degree(mod, 4)
    assert subs and all(s.min_generators <= 2 for s in subs)


def test_submodules_m19_ann_bound():
    mod = CAT.module_of("M_{1,19}").reduce_mod_p(5)
    subs = submodules_of_degree(mod, 4)
    assert subs and all(s.ann_linear <= 1 for s in subs)


def test_submodules_m14_dual_degree_two_family():
    # the degree-two submodules form a projective line: p + 1 of them,
    # including the two coordinate ones
    for p, expected in ((5, 6), (7, 8)):
        mod = dual_module(CAT.module_of("M_{1,4}")).reduce_mod_p(p)
        subs = submodules_of_degree(mod, 2)
        assert len(subs) == expected
        bases = {s.basis for s in subs}
        assert ((1, 0, 0, 0, 0), (0, 1, 0, 0, 0)) in bases
        assert ((1, 0, 0, 0, 0), (0, 0, 0, 1, 0)) in bases


def test_initial_module_already_graded():
    # one-variable jet module: the presentation kernel is homogeneous
    shift = Matrix(QQ, [[1 if i == j + 1 else 0 for j in range(5)] for i in range(5)])
    mod = FiniteModule([shift], m=5)
    gr = initial_module([[1, 0, 0, 0, 0]], mod)
    assert gr.hilbert == (1, 1, 1, 1, 1)
    assert gr.module.actions == mod.actions


def test_initial_module_two_generator_presentation():
    # dual of the k[x,y]/(xy,x^3,y^3) module, generated by (x^2)* and (y^2)*.
    # Oracle for degree one: since the generators stay independent modulo the
    # radical, no kernel element mixes degree 0, so the degree-one piece of
    # the graded quotient equals the rank of the degree-one image map.
    mod = dual_module(CAT.module_of("M_{1,4}"))
    g1 = [0, 0, 1, 0, 0]
    g2 = [0, 0, 0, 0, 1]
    cols = []
    for g in (g1, g2):
        for v in range(4):
            cols.append(mod.actions[v].matvec([Fraction(x) for x in g]))
    rank_deg1 = rank_and_kernel(Matrix(QQ, cols).transpose())[0]
    assert rank_deg1 == 3
    gr = initial_module([g1, g2], mod)
    assert gr.hilbert == (2, rank_deg1)


def test_initial_module_three_generator_presentation_matches_block_class():
    mod = dual_module(CAT.module_of("M_{1,4}"))
    gens = [[0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]
    gr = initial_module(gens, mod)
    assert gr.hilbert == (3, 2)
    assert fingerprint(gr.module) == CAT.fingerprint_of("M_{1,15}")


def test_direct_sum_concise_examples():
    assert CAT.module_of("M_{2,1}") == CAT.module_of("T_{2,1}")
    assert CAT.module_of("M_{5,1}") == CAT.module_of("T_{5,1}")


def test_direct_sum_same_point_rejected():
    point = FiniteModule([], m=1)
    fat = CAT.module_of("M_{1,9}")  # needs four variables; use a small fat point instead
    from mbrank.catalog import _piece

    with pytest.raises(NotConciseError):
        direct_sum_concise(
            [_piece("fat2"), point, point],
            points=[(0, 0, 0, 0), (0, 0, 0, 0), (0, 0, 0, 1)],
        )


def test_fingerprints_separate_and_match():
    assert CAT.fingerprint_of("M_{16}") != CAT.fingerprint_of("M_{17}")
    assert CAT.fingerprint_of("M_{2,7}") != CAT.fingerprint_of("M_{2,8}")


def test_fingerprint_conjugation_invariance():
    rng = random.Random(1)
    mod = CAT.module_of("M_{1,13}")
    base = fingerprint(mod)
    from mbrank.exact import det, inverse

    for _ in range(3):
        while True:
            g = Matrix(QQ, [[rng.randint(-3, 3) for _ in range(5)] for _ in range(5)])
            if det(g) != 0:
                break
        gi = inverse(g)
        moved = FiniteModule([g * a * gi for a in mod.actions], m=5, check=False)
        assert fingerprint(moved) == base


def test_fingerprint_dual_relation():
    mod = CAT.module_of("M_{1,12}")
    fp = fingerprint(mod)
    fpd = fingerprint(dual_module(mod))
    assert fp.stabilizer_dim == fpd.stabilizer_dim
    assert fp.piece_records == fpd.piece_records
    g, gd = fp.genericity, fpd.genericity
    assert (g[0], g[3]) == (gd[0], gd[3])
    assert (g[1], g[2], g[4], g[5]) == (gd[2], gd[1], gd[5], gd[4])


def test_support_then_direct_sum_reproduces_fingerprint():
    from mbrank.modules import intrinsic_piece

    mod = CAT.module_of("M_{3,1}")
    dec = support_decomposition(mod)
    pieces = [intrinsic_piece(p.local_module) for p in dec.pieces]
    rebuilt = direct_sum_concise(pieces)
    assert fingerprint(rebuilt) == fingerprint(mod)


def test_min_generators_global():
    assert min_generators_global(CAT.module_of("M_{3,2}")) == 1
    assert min_generators_global(CAT.module_of("M_{1,11}")) == 3
    assert min_generators_global(CAT.module_of("M_{2,7}")) == 2
