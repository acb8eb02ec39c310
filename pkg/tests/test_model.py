import random

import numpy as np
import pytest

from equisat.bdd import Bdd
from equisat.formulas import constraint_bdd, interleaved_order
from equisat.literals import FALSE, TRUE, Unifier, build_unifier, lit, neg
from equisat.model import (Constraint, Model, ShiftedView, UnaryInt,
                           const_unary, domain_of, shift_view, value_of)
from equisat.parser import ModelParseError, parse_model, print_model
from equisat.semantics import eval_constraint
from helpers import (assignments_over, bdd_truth_table,
                     constraint_truth_table, random_low_constraint)


def _u(name, *vars_):
    return UnaryInt(name, tuple(lit(v) for v in vars_))


# -- accessors and views -------------------------------------------------

def test_accessor_sentinels():
    x = _u("X", 1, 2, 3)
    assert x.bit(0) == TRUE
    assert x.bit(4) == FALSE
    assert x.bit(2) == lit(2)


def test_shift_view_positive_prefixes_ones():
    x = _u("X", 1, 2, 3, 4)
    v = shift_view(x, 2)
    assert v.width == 6
    assert [v.bit(i) for i in range(1, 7)] == [TRUE, TRUE] + list(x.bits)


def test_shift_zero_is_identity():
    x = _u("X", 1, 2)
    assert shift_view(x, 0) is x


def test_negative_shift_drops_leading_bits():
    x = _u("X", 1, 2, 3)
    theta = Unifier({1: TRUE, 2: TRUE, 3: TRUE})  # X = 3
    v = shift_view(x, -1)
    assert v.width == 2
    # value 2: bit(1), bit(2) true under theta, bit(3) is sentinel false
    assert [theta(v.bit(i)) for i in (1, 2)] == [TRUE, TRUE]
    assert v.bit(3) == FALSE


def test_shift_views_compose():
    x = _u("X", 1, 2, 3, 4)
    v = shift_view(shift_view(x, 2), 1)
    w = shift_view(x, 3)
    assert v.width == w.width
    for i in range(-1, 9):
        assert v.bit(i) == w.bit(i)


def test_const_unary_accessor():
    c = const_unary(3)
    assert [c.bit(i) for i in range(0, 5)] == [TRUE, TRUE, TRUE, TRUE, FALSE]


# -- domain extraction -----------------------------------------------------

def test_domain_bounds_example():
    x = _u("X", *range(1, 10))
    theta = Unifier({3: TRUE, 6: FALSE})
    assert domain_of(x, theta) == [3, 4, 5]


def test_domain_holes_example():
    x = _u("X", *range(1, 10))
    theta = Unifier({3: lit(2), 6: lit(5), 8: lit(7)})
    assert domain_of(x, theta) == [0, 1, 3, 4, 6, 8, 9]


def test_domain_fresh_variable_full():
    x = _u("X", 1, 2, 3, 4)
    assert domain_of(x, Unifier()) == [0, 1, 2, 3, 4]


def test_domain_negated_sharing_collapses():
    x = _u("X", 1, 2)
    theta = Unifier({2: neg(lit(1))})
    # monotone <a, -a> forces a=1: only value 1 remains
    assert domain_of(x, theta) == [1]


def test_domain_empty_signals_unsat_variable():
    x = _u("X", 1, 2)
    theta = Unifier({1: FALSE, 2: TRUE})
    assert domain_of(x, theta) == []


def test_domain_matches_enumeration():
    from equisat.literals import CONTRADICTION
    from equisat.semantics import ev, int_monotone

    rng = random.Random(3)
    for _ in range(120):
        n = rng.randint(1, 6)
        x = _u("X", *range(1, n + 1))
        eqs = []
        for _ in range(rng.randint(0, 4)):
            a = lit(rng.randint(1, n), rng.random() < 0.5)
            b = (TRUE if rng.random() < 0.5 else FALSE) if rng.random() < 0.4 \
                else lit(rng.randint(1, n), rng.random() < 0.5)
            eqs.append((a, b))
        theta = build_unifier(eqs)
        if theta is CONTRADICTION:
            continue
        sub = x.with_bits([theta(l) for l in x.bits])
        want = set()
        for a in assignments_over(range(1, n + 1)):
            if int_monotone(sub, a):
                want.add(value_of(sub, a))
        assert set(domain_of(x, theta)) == want


# -- eval oracle -----------------------------------------------------------

def test_eval_diff_example():
    x, y = _u("X", 1, 2, 3), _u("Y", 4, 5, 6)
    a = {1: 1, 2: 1, 3: 0, 4: 1, 5: 0, 6: 0}
    assert eval_constraint(Constraint("diff", (x, y)), a)  # 2 != 1


def test_eval_uadder_example():
    u1, u2 = _u("A", 1, 2, 3), _u("B", 4, 5, 6)
    u3 = _u("C", 7, 8, 9, 10, 11, 12)
    a = {v: 0 for v in range(1, 13)}
    for v in (1, 2): a[v] = 1          # A = 2
    for v in (4, 5, 6): a[v] = 1       # B = 3
    for v in range(7, 12): a[v] = 1    # C = 5
    assert eval_constraint(Constraint("uadder", (u1, u2, u3)), a)
    a[12] = 1                          # C = 6 now
    assert not eval_constraint(Constraint("uadder", (u1, u2, u3)), a)


def test_eval_block_window():
    u1, u2 = const_unary(2), const_unary(4)
    vec = tuple(lit(v) for v in range(1, 6))
    good = {1: 0, 2: 0, 3: 1, 4: 1, 5: 0}
    bad = {1: 0, 2: 0, 3: 1, 4: 0, 5: 0}
    c = Constraint("block", (u1, u2), (vec,))
    assert eval_constraint(c, good)
    assert not eval_constraint(c, bad)  # index 4 inside (2,4] must be set


def test_eval_matches_bdd_on_every_tag():
    rng = random.Random(9)
    tags = ["diff", "leq", "block", "uadder", "unary", "pairwise_and",
            "pairwise_xor", "lexleq"]
    for tag in tags:
        for _ in range(12):
            m = Model()
            c = random_low_constraint(rng, m, tag)
            man = Bdd(interleaved_order(c))
            f = constraint_bdd(man, c, with_integrity=False)
            variables = sorted(
                {l >> 1 for u in c.ints for l in u.bits}
                | {l >> 1 for vec in c.vecs for l in vec},
                key=lambda v: man.level_of[v])
            if not variables:
                continue
            got = bdd_truth_table(man, f, variables)
            want = constraint_truth_table(c, variables)
            assert np.array_equal(got, want), (tag, c)


def test_eval_matches_bdd_large_instance():
    # one bigger instance: 18 bits of support
    u1 = _u("A", *range(1, 7))
    u2 = _u("B", *range(7, 13))
    u3 = _u("C", *range(13, 19))
    c = Constraint("uadder", (u1, u2, u3))
    man = Bdd(interleaved_order(c))
    f = constraint_bdd(man, c)
    variables = sorted(range(1, 19), key=lambda v: man.level_of[v])
    assert np.array_equal(
        bdd_truth_table(man, f, variables), constraint_truth_table(c, variables)
    )


def test_eval_sumbits_semantics():
    vec = tuple(lit(v) for v in (1, 2, 3))
    u = _u("U", 4, 5)
    c = Constraint("sumbits", (u,), (vec,))
    for a in assignments_over(range(1, 6)):
        count = sum(a[v] for v in (1, 2, 3))
        want = (a[4] == (count >= 1)) and (a[5] == (count >= 2)) and count <= 2
        assert eval_constraint(c, a) == want


# -- parser and text format --------------------------------------------------

def test_parse_basic_model():
    m = parse_model("int X 4\nint Y 4\ndiff X Y\n")
    assert set(m.ints) == {"X", "Y"}
    assert len(m.store) == 1 and m.store[0].tag == "diff"


def test_parse_range_folds_to_equality_store():
    m = parse_model("int X 9\nrange X 3 5\n")
    x = m.ints["X"]
    assert set(m.equations) == {
        (TRUE, x.bit(3)), (TRUE, neg(x.bit(6))),
    }


def test_parse_undeclared_name_rejected():
    with pytest.raises(ModelParseError) as err:
        parse_model("int X 4\ndiff X Z\n")
    assert "line 2" in str(err.value)


def test_parse_width_mismatch_rejected():
    with pytest.raises(ModelParseError):
        parse_model("bits A 3\nbits B 4\nlexleq A B\n")


def test_parse_bad_index_rejected():
    with pytest.raises(ModelParseError):
        parse_model("int X 3\nset X[4] 1\n")


def test_parse_comments_and_shifted_refs():
    m = parse_model(
        "# header\nint U 5  # five bits\nint W 5\nleq U+2 W\nblock U-1 U+2 V\nbits V 5\nblock 0 3 V\n"
        .replace("block U-1 U+2 V\nbits V 5\n", "bits V 5\nblock U-1 U+2 V\n")
    )
    leq = m.store[0]
    assert isinstance(leq.ints[0], ShiftedView) and leq.ints[0].offset == 2
    blk = m.store[1]
    assert blk.ints[0].offset == -1
    const = m.store[2]
    assert const.ints[0].width == 0 and const.ints[1].width == 3


def test_roundtrip_structural_equality():
    text = (
        "int X 4\nint Y 4\nbits V 3\nrange X 1 3\nset V[2] 1\n"
        "eqbits V[1] -X[2]\ndiff X Y\nleq X+1 Y\nblock 0 X V\n"
        "alldiff X Y\nlexleq V V\n"
    )
    m = parse_model(text)
    again = parse_model(print_model(m))
    assert m.struct_eq(again)
    assert print_model(m) == print_model(again)
