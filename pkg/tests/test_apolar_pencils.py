import random
import pytest

from mbrank.apolar import (
    contract,
    contraction_closure,
    module_from_dual_generators,
    parse_dual,
)
from mbrank.catalog import load_catalog
from mbrank.exact import QQ, Matrix, det
from mbrank.modules import (
    dual_module,
    fingerprint,
    isomorphic_modules,
    local_invariants,
    module_flags,
)
from mbrank.pencils import (
    CANONICAL_PENCILS,
    InvalidPencilError,
    NotSubcaseError,
    Pencil,
    canonical_pencil,
    classify_pencil,
    n7_module,
    pencil_module,
    trace_complement,
)

CAT = load_catalog()


def test_contract_exponent_decrement():
    d = parse_dual(4, 1, {1: {"y1^2": 1}})
    assert contract(0, d) == parse_dual(4, 1, {1: {"y1": 1}})
    assert contract(1, parse_dual(4, 1, {1: {"y1": 1}})).is_zero()


def test_contract_twice():
    d = parse_dual(4, 2, {1: {"y1^2": 1, "y2": 1}, 2: {"y4": 1}})
    once = contract(0, d)
    twice = contract(0, once)
    assert twice == parse_dual(4, 2, {1: {"1": 1}})


def test_contractions_commute_on_closure():
    gens = [
        parse_dual(4, 2, {1: {"y1^2": 1, "y2": 1}, 2: {"y4": 1}}),
        parse_dual(4, 2, {1: {"y3": 1}}),
    ]
    for b in contraction_closure(gens):
        for i in range(4):
            for j in range(4):
                assert contract(i, contract(j, b)) == contract(j, contract(i, b))


def test_trivial_dual_generator():
    mod = module_from_dual_generators([parse_dual(1, 1, {1: {"1": 1}})], 1)
    assert mod.m == 1


def test_m16_and_m20_presentations():
    m16 = CAT.module_of("M_{16}")
    assert m16.m == 5
    assert module_flags(m16) == (True, True)
    m20 = CAT.module_of("M_{20}")
    assert m20.m == 5
    assert module_flags(m20) == (True, False)


def test_all_five_presentations_have_degree_five():
    for name in ("M_{16}", "M_{17}", "M_{18}", "M_{19}", "M_{20}"):
        assert CAT.module_of(name).m == 5


SWAPPED_GENS = {
    # interchanging the two off-diagonal linear forms gives the dual class
    "M_{16}": [{"1": {"y1^2": "1", "y2": "1"}, "2": {"y3": "1"}}, {"1": {"y4": "1"}}],
    "M_{17}": [{"1": {"y1^2": "1", "y2": "1"}, "2": {"y3": "1"}}, {"1": {"y4": "1"}, "2": {"y1": "1"}}],
    "M_{18}": [{"1": {"y1^2": "1", "y2": "1"}, "2": {"y3": "1"}}, {"2": {"y4": "1"}}],
    "M_{19}": [{"1": {"y1^2": "1", "y2": "1"}, "2": {"y3": "1"}}, {"1": {"y3": "1"}, "2": {"y4": "1"}}],
    "M_{20}": [{"1": {"y1^2": "1"}, "2": {"y3": "1"}}, {"1": {"y2": "1"}, "2": {"y4": "1"}}],
}


def test_generator_swap_gives_dual():
    for name, spec in SWAPPED_GENS.items():
        gens = [parse_dual(4, 2, g) for g in spec]
        swapped = module_from_dual_generators(gens, 4)
        dual = dual_module(CAT.module_of(name))
        assert isomorphic_modules(swapped, dual).verdict == "yes", name


def test_trace_complement_dimensions():
    ident = Matrix.identity(QQ, 2)
    comp = trace_complement([ident], 2, 2)
    assert len(comp) == 3
    flat = {tuple(x for row in m.data for x in row) for m in comp}
    assert (0, 1, 0, 0) in flat and (0, 0, 1, 0) in flat
    assert trace_complement(
        [Matrix(QQ, [[1 if (i, j) == divmod(k, 3) else 0 for j in range(3)] for i in range(2)]) for k in range(6)],
        2,
        3,
    ) == []


def test_trace_complement_involution():
    w15 = canonical_pencil("W15")
    comp = trace_complement(list(w15.basis), 2, 3)
    assert len(comp) == 4
    back = trace_complement(comp, 2, 3)
    from mbrank.exact import rank_and_kernel

    span = Matrix(QQ, [[m[i, j] for i in range(2) for j in range(3)] for m in list(w15.basis) + back])
    assert rank_and_kernel(span)[0] == 2


def test_classify_canonical_pencils():
    for label in CANONICAL_PENCILS:
        assert classify_pencil(canonical_pencil(label)).label == label


def test_classify_2x2_lines():
    assert classify_pencil(Pencil.line(Matrix(QQ, [[1, 0], [0, -1]]))).label == "Rank2Line"
    assert classify_pencil(Pencil.line(Matrix(QQ, [[0, 1], [0, 0]]))).label == "Rank1Line"


def test_classify_rejects_dependent_basis():
    w = Matrix(QQ, [[1, 0, 0], [0, 1, 0]])
    with pytest.raises(InvalidPencilError):
        classify_pencil(Pencil.of(w, w.scale(2)))


def test_classifier_stable_under_conjugation():
    rng = random.Random(0)
    for label in CANONICAL_PENCILS:
        pen = canonical_pencil(label)
        for _ in range(50):
            while True:
                g2 = Matrix(QQ, [[rng.randint(-4, 4) for _ in range(2)] for _ in range(2)])
                if det(g2) != 0:
                    break
            while True:
                g3 = Matrix(QQ, [[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)])
                if det(g3) != 0:
                    break
            a = rng.randint(-3, 3)
            b = rng.randint(-3, 3)
            c = rng.randint(-3, 3)
            d = rng.randint(-3, 3)
            if a * d - b * c == 0:
                a, d, b, c = 1, 1, 0, 0
            w1, w2 = pen.basis
            nb1 = g2 * (w1.scale(a) + w2.scale(b)) * g3
            nb2 = g2 * (w1.scale(c) + w2.scale(d)) * g3
            assert classify_pencil(Pencil.of(nb1, nb2)).label == label


def test_pencil_modules_give_five_distinct_classes():
    prints = set()
    for label in ("W11", "W12", "W13", "W14", "W15"):
        mod = pencil_module(label)
        concise, _ = module_flags(mod)
        assert concise
        fp = fingerprint(mod)
        prints.add(fp)
        assert fp == CAT.fingerprint_of(f"M_{{1,{label[1:]}}}")
    assert len(prints) == 5


def test_w10_block_construction_rejected():
    with pytest.raises(NotSubcaseError):
        pencil_module("W10")


def test_n7_local_invariants():
    inv = local_invariants(n7_module())
    assert (inv.min_generators, inv.socle_dim) == (2, 2)
