import pytest

from mbrank.catalog import load_catalog
from mbrank.certify import _class_of
from mbrank.exact import QQ, Matrix, det
from mbrank.modules import fingerprint
from mbrank.tensor import Tensor3, transform_tensor
from mbrank.triplealg import (
    NotSharpError,
    bilinear_map_diagnostics,
    coordinate_modules,
    one_one_one_algebra,
)

CAT = load_catalog()


def unit_tensor(m):
    return Tensor3(m, [[[1 if i == j == k else 0 for j in range(m)] for i in range(m)] for k in range(m)])


def test_unit_tensor_algebra_is_diagonal():
    alg = one_one_one_algebra(unit_tensor(5))
    assert alg.dim == 5
    assert alg.contains_unit
    for x, y, z in alg.basis:
        for mat in (x, y, z):
            assert all(mat[i, j] == 0 for i in range(5) for j in range(5) if i != j)


def test_catalog_entries_are_sharp():
    for name in ("T_{5,1}", "T_{1,8}", "T_{O54}", "T_{2,7}"):
        alg = one_one_one_algebra(CAT.tensor_of(name))
        assert alg.dim == 5
        assert alg.contains_unit
        assert alg.is_closed()


def test_non_minimal_entries_dimension_reported():
    for name in ("T_{1,20}", "T_{2,9}"):
        alg = one_one_one_algebra(CAT.tensor_of(name))
        assert alg.dim != 5 or not CAT.get_entry(name).minimal_border_rank


def test_not_sharp_error():
    # a rank-one tensor is far from sharp in the other direction: dim > m
    t = Tensor3(2, [[[1, 0], [0, 0]], [[0, 0], [0, 0]]])
    alg = one_one_one_algebra(t)
    assert alg.dim != 2
    with pytest.raises(NotSharpError):
        coordinate_modules(t)


def test_coordinate_modules_table_rows():
    expected = {
        "T_{O58}": ("M_{1,11}", "M_{1,11}", "M_{1,11}"),
        "T_{O57}": ("M_{1,15}", "M_{1,12}", "M_{1,12}"),
        "T_{~O56}": ("M_{1,15}", "M_{1,13}", "M_{1,15}"),
        "T_{O55}": ("M_{1,15}", "M_{1,15}", "M_{1,15}"),
        "T_{O54}": ("M_{1,15}", "M_{1,15}", "M_{1,15}"),
    }
    for name, row in expected.items():
        mods = coordinate_modules(CAT.tensor_of(name))
        got = tuple(_class_of(CAT, fingerprint(m)) for m in mods)
        assert got == row, f"{name}: {got} != {row}"


def test_coordinate_module_of_generic_tensor_matches_algebra():
    # the first factor of an algebra entry carries the algebra itself
    mods = coordinate_modules(CAT.tensor_of("T_{2,6}"))
    assert _class_of(CAT, fingerprint(mods[0])) == "M_{2,6}"


def test_one11_dimension_invariant_under_transform():
    import random

    rng = random.Random(3)
    t = CAT.tensor_of("T_{2,8}")
    base = one_one_one_algebra(t).dim
    for _ in range(2):
        mats = []
        for _ in range(3):
            while True:
                g = Matrix(QQ, [[rng.randint(-3, 3) for _ in range(5)] for _ in range(5)])
                if det(g) != 0:
                    mats.append(g)
                    break
        moved = transform_tensor(t, *mats, rng.choice(["ABC", "BCA", "CBA"]))
        assert one_one_one_algebra(moved).dim == base


def test_bilinear_diagnostics_t51():
    d = bilinear_map_diagnostics(CAT.tensor_of("T_{5,1}"))
    assert d.surjective and d.left_nondegenerate and d.right_nondegenerate
    assert d.cyclic_M and d.cyclic_N and d.cyclic_P_dual
    assert d.flags_match_genericity


def test_bilinear_diagnostics_o54():
    d = bilinear_map_diagnostics(CAT.tensor_of("T_{O54}"))
    assert d.surjective and d.left_nondegenerate and d.right_nondegenerate
    assert not (d.cyclic_M or d.cyclic_N or d.cyclic_P_dual)
    assert d.flags_match_genericity


def test_bilinear_diagnostics_t11_consistent():
    d = bilinear_map_diagnostics(CAT.tensor_of("T_{1,1}"))
    assert d.flags_match_genericity


def test_projections_injective_for_concise():
    alg = one_one_one_algebra(CAT.tensor_of("T_{1,13}"))
    from mbrank.exact import rank_and_kernel

    for comp in range(3):
        flat = Matrix(
            QQ,
            [[tr[comp][i, j] for i in range(5) for j in range(5)] for tr in alg.basis],
        )
        assert rank_and_kernel(flat)[0] == alg.dim


def test_non_concise_input_flagged():
    t = Tensor3(2, [[[1, 0], [0, 0]], [[0, 0], [0, 0]]])
    alg = one_one_one_algebra(t)
    assert not alg.concise_input
