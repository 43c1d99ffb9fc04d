from __future__ import annotations

import random
from itertools import product

import pytest

from ybinv.coxeter import all_signed_permutations, reduced_word
from ybinv.errors import SizeGuardError
from ybinv.exact import CyclotomicScalar, ScalarDomain
from ybinv.rep import (
    Letter,
    TensorVector,
    apply_letter,
    apply_letters,
    check_rep_size,
    dump_vector,
    evaluate_letters,
    from_u_basis,
    predicted_action,
    start_vector,
    to_u_basis,
)


def unit(n, d, index, basis="v"):
    return TensorVector(n, d, basis, {index: ScalarDomain(d).one})


def test_g_on_equal_factors_scales_by_u():
    d = 3
    dom = ScalarDomain(d)
    for label, r in ((1, 0), (-2, 2)):
        x = unit(2, d, ((label, r), (label, r)))
        assert apply_letter(x, Letter("G", 1)).entries == {((label, r), (label, r)): dom.u}


def test_b1_flips_sign_of_frame_zero_first_slot():
    x = unit(2, 2, ((2, 0), (1, 1)))
    assert apply_letter(x, Letter("B", 1)).entries == {((-2, 0), (1, 1)): ScalarDomain(2).one}


def test_e_kills_different_frames():
    x = unit(2, 3, ((1, 0), (2, 1)))
    assert apply_letter(x, Letter("E", 1)).entries == {}
    y = unit(2, 3, ((1, 2), (-2, 2)))
    assert apply_letter(y, Letter("E", 1)) == y


def test_f_keeps_only_frame_zero():
    assert apply_letter(unit(1, 3, ((1, 1),)), Letter("F", 1)).entries == {}
    x = unit(1, 3, ((-1, 0),))
    assert apply_letter(x, Letter("F", 1)) == x


def test_inverse_letters_invert():
    rng = random.Random(3)
    n, d = 2, 3
    labels = [a for a in range(-n, n + 1) if a]
    for _ in range(20):
        idx = tuple((rng.choice(labels), rng.randrange(d)) for _ in range(n))
        x = unit(n, d, idx)
        for a, b in (("G", "G_inv"), ("B", "B_inv"), ("T", "T_inv")):
            assert apply_letters(x, [Letter(a, 1), Letter(b, 1)]) == x
            assert apply_letters(x, [Letter(b, 1), Letter(a, 1)]) == x


def test_u_basis_requires_v_input_for_operators():
    with pytest.raises(ValueError):
        apply_letter(unit(1, 2, ((1, 0),), "u"), Letter("T", 1))


def test_index_out_of_range():
    with pytest.raises(ValueError):
        apply_letter(unit(2, 2, ((1, 0), (2, 0))), Letter("G", 2))


def test_d1_transform_is_identity():
    x = TensorVector(2, 1, "v", {((1, 0), (-2, 0)): ScalarDomain(1).const(5)})
    assert to_u_basis(x).entries == x.entries


@pytest.mark.parametrize("d", [2, 3, 4])
def test_t_shifts_u_frames(d):
    for r in range(d):
        u_vec = unit(2, d, ((1, r), (2, 0)), "u")
        image = to_u_basis(apply_letter(from_u_basis(u_vec), Letter("T", 1)))
        assert image.entries == {((1, (r + 1) % d), (2, 0)): ScalarDomain(d).one}


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_u_v_round_trip(d):
    rng = random.Random(d)
    n = 2
    labels = [a for a in range(-n, n + 1) if a]
    entries = {}
    for _ in range(6):
        idx = tuple((rng.choice(labels), rng.randrange(d)) for _ in range(n))
        entries[idx] = CyclotomicScalar(d, [rng.randint(-5, 5) for _ in range(d)]) or CyclotomicScalar.one(d)
    dom = ScalarDomain(d)
    x = TensorVector(n, d, "v", {k: dom.const(v) for k, v in entries.items()})
    assert from_u_basis(to_u_basis(x)) == x


def test_evaluate_letters_examples():
    one = ScalarDomain(3).one
    assert evaluate_letters([], 3, 2).entries == {((1, 0), (2, 0), (3, 0)): ScalarDomain(2).one}
    assert evaluate_letters([Letter("G", 1)], 2, 3).entries == {((2, 0), (1, 0)): one}
    assert evaluate_letters([Letter("T", 1)] * 2, 2, 3).entries == {((1, 2), (2, 0)): one}
    assert start_vector(1, 2).basis == "v"


def test_predicted_action_examples():
    from ybinv.coxeter import SignedPermutation as SP

    assert predicted_action(SP.identity(3), (1, 0, 2), 3) == ((1, 1), (2, 0), (3, 2))
    assert predicted_action(SP.s(1, 2), (1, 2), 3) == ((2, 2), (1, 1))
    assert predicted_action(SP.r(1, 2), (1, 0), 2) == ((-1, 1), (2, 0))


@pytest.mark.parametrize("n, d", [(1, 3), (2, 2), (2, 3), (3, 2)])
def test_reduced_words_act_as_predicted(n, d):
    one = ScalarDomain(d).one
    for w in all_signed_permutations(n):
        letters = [Letter("B", 1) if g == "r" else Letter("G", i) for g, i in reduced_word(w)]
        for frames in product(range(d), repeat=n):
            x = unit(n, d, tuple((k + 1, frames[k]) for k in range(n)))
            assert apply_letters(x, letters).entries == {predicted_action(w, frames, d): one}


def test_size_guard():
    check_rep_size(4, 2)
    with pytest.raises(SizeGuardError):
        check_rep_size(6, 3)


def test_dump_format():
    x = TensorVector(2, 2, "v", {((2, 1), (-1, 0)): ScalarDomain(2).u})
    assert dump_vector(x) == "(2 1 -1 0) : (1)*u"


def test_basis_flag_checked():
    with pytest.raises(ValueError):
        TensorVector(1, 2, "w")
