import random
from fractions import Fraction

import pytest

from mbrank.catalog import load_catalog
from mbrank.exact import QQ, Matrix
from mbrank.tensor import (
    MatrixForm,
    NoAlphaError,
    Tensor3,
    choose_alpha,
    e_space,
    genericity_pattern,
    matrix_form_to_tensor,
    permute_tensor,
    slices,
    stabilizer_dimension,
    strassen_and_end_closed,
    transform_tensor,
)

CAT = load_catalog()


def terms_set(t):
    return {(k + 1, i + 1, j + 1, c) for k, i, j, c in t.terms()}


def test_matrix_form_round_trip_o56():
    # the ten printed terms of the worked round-trip example
    t = CAT.tensor_of("T_{~O56}")
    expected = {
        (1, 1, 1), (1, 2, 2), (2, 1, 3), (1, 3, 3), (3, 1, 4),
        (4, 2, 4), (1, 4, 4), (5, 5, 4), (5, 1, 5), (5, 2, 5),
    }
    assert {(k, i, j) for (k, i, j, c) in terms_set(t)} == expected
    assert all(c == 1 for (_, _, _, c) in terms_set(t))


def test_o56_form_entries():
    form = CAT.get_entry("T_{~O56}").form
    # x4 sits at positions (1,5), (2,5) and (5,4)
    assert form.entries[0][4] == {4: 1}
    assert form.entries[1][4] == {4: 1}
    assert form.entries[4][3] == {4: 1}


def test_matrix_form_of_cyclic_example_tensor():
    # the degree-4 module example written out as a tensor:
    # a1(b1c1+..+b4c4) + a2 b1c2 + a3 (b1c3 + b3c4) + a4 b1c4
    form = MatrixForm.from_json(
        {
            "m": 4,
            "entries": [
                [{"x0": "1"}, {"x1": "1"}, {"x2": "1"}, {"x3": "1"}],
                [{}, {"x0": "1"}, {}, {}],
                [{}, {}, {"x0": "1"}, {"x2": "1"}],
                [{}, {}, {}, {"x0": "1"}],
            ],
        }
    )
    t = matrix_form_to_tensor(form)
    expected = {
        (1, 1, 1), (1, 2, 2), (1, 3, 3), (1, 4, 4),
        (2, 1, 2), (3, 1, 3), (3, 3, 4), (4, 1, 4),
    }
    assert {(k, i, j) for (k, i, j, c) in terms_set(t)} == expected


def test_zero_form_gives_zero_tensor():
    form = MatrixForm(2, [[{}, {}], [{}, {}]])
    assert matrix_form_to_tensor(form) == Tensor3.zero(2)


def test_slices_unit_tensor():
    t = Tensor3(3, [[[1 if i == j == k else 0 for j in range(3)] for i in range(3)] for k in range(3)])
    sl = slices(t, "A")
    for i, s in enumerate(sl):
        assert s[i, i] == 1
        assert sum(1 for a in range(3) for b in range(3) if s[a, b] != 0) == 1


def test_slices_single_term_direction_b():
    t = Tensor3.zero(3)
    coeffs = [[[Fraction(0)] * 3 for _ in range(3)] for _ in range(3)]
    coeffs[0][1][2] = Fraction(1)  # a1 (x) b2 (x) c3
    t = Tensor3(3, coeffs)
    sl = slices(t, "B")
    assert sl[1][0, 2] == 1
    assert sl[0].is_zero() and sl[2].is_zero()


def test_t11_slice_is_identity():
    sl = slices(CAT.tensor_of("T_{1,1}"), "A")
    assert sl[0] == Matrix.identity(QQ, 5)


def test_genericity_t27():
    pat = genericity_pattern(CAT.tensor_of("T_{2,7}"))
    assert pat.concise
    assert pat.generic_flags() == (True, False, False)


def test_genericity_o54_one_degenerate():
    pat = genericity_pattern(CAT.tensor_of("T_{O54}"))
    assert pat.concise
    assert pat.one_degenerate


def test_genericity_unit_tensor():
    t = Tensor3(3, [[[1 if i == j == k else 0 for j in range(3)] for i in range(3)] for k in range(3)])
    pat = genericity_pattern(t)
    assert pat.generic_flags() == (True, True, True) and pat.concise


def test_choose_alpha_catalog():
    for name in ("T_{1,1}", "T_{2,7}", "T_{5,1}"):
        alpha = choose_alpha(CAT.tensor_of(name))
        assert alpha == [1, 0, 0, 0, 0]


def test_choose_alpha_fails_for_one_degenerate():
    with pytest.raises(NoAlphaError):
        choose_alpha(CAT.tensor_of("T_{O54}"))


def test_espace_of_worked_example():
    form = MatrixForm.from_text(["x0 0 0 0", "x1 x0 0 0", "x2 0 x0 0", "x3 0 x2 x0"])
    es = e_space(matrix_form_to_tensor(form))
    e21 = Matrix(QQ, [[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    e31_43 = Matrix(QQ, [[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0]])
    e41 = Matrix(QQ, [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]])
    assert list(es.basis) == [Matrix.identity(QQ, 4), e21, e31_43, e41]


def test_espace_t19_rank_one_matrices():
    es = e_space(CAT.tensor_of("T_{1,9}"))
    assert es.basis[0] == Matrix.identity(QQ, 5)
    for k, b in enumerate(es.basis[1:], start=2):
        assert b[k - 1, 0] == 1
        assert sum(1 for i in range(5) for j in range(5) if b[i, j] != 0) == 1


def test_espace_span_independent_of_alpha():
    t = CAT.tensor_of("T_{5,1}")
    alpha2 = [1, 1, 0, 0, 0]
    es1 = e_space(t)
    es2 = e_space(t, alpha2)
    span1 = Matrix(QQ, [[b[i, j] for i in range(5) for j in range(5)] for b in es1.basis])
    span2 = Matrix(QQ, [[b[i, j] for i in range(5) for j in range(5)] for b in es2.basis])
    from mbrank.exact import rank_and_kernel, vstack

    assert rank_and_kernel(vstack([span1, span2]))[0] == rank_and_kernel(span1)[0]


def test_strassen_end_closed_cases():
    assert strassen_and_end_closed(e_space(CAT.tensor_of("T_{1,8}"))) == (True, True)
    assert strassen_and_end_closed(e_space(CAT.tensor_of("T_{1,20}"))) == (True, False)


def test_stabilizer_anchor_values():
    assert stabilizer_dimension(CAT.tensor_of("T_{5,1}")) == 10
    assert stabilizer_dimension(CAT.tensor_of("T_{4,1}")) == 11


def test_stabilizer_unit_tensor_m2():
    t = Tensor3(2, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]])
    assert stabilizer_dimension(t) == 4


def test_transform_identity_noop():
    t = CAT.tensor_of("T_{1,3}")
    ident = Matrix.identity(QQ, 5)
    assert transform_tensor(t, ident, ident, ident, "ABC") == t


def test_sigma_group_law():
    t = CAT.tensor_of("T_{2,7}")
    once = permute_tensor(t, "BCA")
    twice = permute_tensor(once, "BCA")
    assert twice == permute_tensor(t, "CAB")
    assert permute_tensor(permute_tensor(t, "ACB"), "ACB") == t


def test_bc_swap_preserves_fingerprint_for_self_dual():
    # swapping the last two factors of a symmetric entry leaves invariants alone
    t = CAT.tensor_of("T_{1,1}")
    swapped = permute_tensor(t, "ACB")
    assert stabilizer_dimension(swapped) == stabilizer_dimension(t)
    assert genericity_pattern(swapped).generic_flags() == genericity_pattern(t).generic_flags()


def test_stabilizer_invariance_under_transform():
    rng = random.Random(0)
    t = CAT.tensor_of("T_{2,4}")
    base = stabilizer_dimension(t)
    for _ in range(3):
        mats = []
        for _ in range(3):
            while True:
                g = Matrix(QQ, [[rng.randint(-3, 3) for _ in range(5)] for _ in range(5)])
                from mbrank.exact import det

                if det(g) != 0:
                    mats.append(g)
                    break
        sigma = rng.choice(["ABC", "ACB", "BAC", "CAB", "BCA", "CBA"])
        moved = transform_tensor(t, *mats, sigma)
        assert stabilizer_dimension(moved) == base


def test_tensor_json_roundtrip():
    t = CAT.tensor_of("T_{2,7}")
    assert Tensor3.from_json(t.to_json()) == t
    form = CAT.get_entry("T_{2,7}").form
    assert MatrixForm.from_json(form.to_json()).entries == form.entries
