import random

import numpy as np
import pytest

from equisat.bdd import Bdd, BddCapacityError, F, T
from equisat.formulas import constraint_bdd, integrity_bdd, interleaved_order
from equisat.literals import TRUE, Unifier, lit, neg
from equisat.model import Constraint, UnaryInt
from helpers import bdd_truth_table, constraint_truth_table


def _ints(*widths):
    out = []
    v = 1
    for i, w in enumerate(widths):
        out.append(UnaryInt("u%d" % i, tuple(lit(v + k) for k in range(w))))
        v += w
    return out


def _man_for(c):
    return Bdd(interleaved_order(c))


def test_constant_true_is_terminal():
    x, = _ints(2)
    c = Constraint("unary", (x,), params=(0, 2))
    man = _man_for(c)
    # plain unary [0,n] is just integrity, not TRUE; a trivial tautology:
    f = man.apply_or(man.lit(x.bits[0]), man.apply_not(man.lit(x.bits[0])))
    assert f == T


def test_diff_model_count_matches_enumeration():
    x, y = _ints(3, 3)
    c = Constraint("diff", (x, y))
    man = _man_for(c)
    f = constraint_bdd(man, c, with_integrity=True)
    sup = man.support(f)
    assert man.count(f, sup) == 12  # pairs (a,b) in [0,3]^2 with a != b
    # against the scalar oracle
    table = constraint_truth_table(c, sup)
    # oracle table lacks integrity; recheck full agreement on plain diff
    g = constraint_bdd(man, c, with_integrity=False)
    assert np.array_equal(bdd_truth_table(man, g, sup), table)


def test_unary_with_bounds_counts_values():
    x, = _ints(3)
    c = Constraint("unary", (x,), params=(1, 2))
    man = _man_for(c)
    f = constraint_bdd(man, c)
    # x2 is free between the bounds, so count over all three bits
    assert man.count(f, [1, 2, 3]) == 2  # X = 1 and X = 2


@pytest.mark.parametrize("tag,widths", [
    ("diff", (3, 3)), ("leq", (3, 2)), ("uadder", (2, 2, 4)),
])
def test_bdd_agrees_with_scalar_oracle(tag, widths):
    us = _ints(*widths)
    c = Constraint(tag, tuple(us))
    man = _man_for(c)
    f = constraint_bdd(man, c, with_integrity=False)
    variables = [l >> 1 for u in us for l in u.bits]
    got = bdd_truth_table(man, f, sorted(variables, key=lambda v: man.level_of[v]))
    want = constraint_truth_table(c, sorted(variables, key=lambda v: man.level_of[v]))
    assert np.array_equal(got, want)


def test_entails_reflexive_and_by_countermodel():
    x, y = _ints(2, 2)
    c = Constraint("diff", (x, y))
    man = _man_for(c)
    f = constraint_bdd(man, c, with_integrity=True)
    assert man.entails(f, f)
    # g: X = 2 exactly
    g = man.apply_and(man.lit(x.bit(1)), man.lit(x.bit(2)))
    assert not man.entails(f, g)  # countermodel: X=0, Y=1


def test_entails_example_from_redundant_diff():
    # diff(A, B) with B fixed to 2 and A2 = A3 follows from A's integrity
    a, b = _ints(3, 3)
    c = Constraint("diff", (a, b))
    man = _man_for(c)
    theta = Unifier({
        b.bits[0] >> 1: TRUE, b.bits[1] >> 1: TRUE, b.bits[2] >> 1: neg(TRUE),
        a.bits[2] >> 1: a.bits[1],
    })
    f = constraint_bdd(man, c.map_lits(theta), with_integrity=False)
    ctx = integrity_bdd(man, a.with_bits(tuple(theta(l) for l in a.bits)))
    assert man.entails(ctx, f)


def test_substitute_constant_binding_matches_direct_build():
    a, b = _ints(3, 3)
    c = Constraint("diff", (a, b))
    man = _man_for(c)
    f = constraint_bdd(man, c, with_integrity=True)
    theta = Unifier({b.bits[0] >> 1: TRUE, b.bits[1] >> 1: TRUE,
                     b.bits[2] >> 1: neg(TRUE)})
    sub = man.substitute(f, theta)
    direct = constraint_bdd(man, c.map_lits(theta), with_integrity=True)
    # same manager, same function: canonicity makes the handles equal
    assert sub == direct


def test_substitute_identity_returns_same_handle():
    x, y = _ints(2, 2)
    c = Constraint("leq", (x, y))
    man = _man_for(c)
    f = constraint_bdd(man, c)
    assert man.substitute(f, Unifier()) == f


def test_substitute_xor_collapses():
    man = Bdd([1, 2])
    f = man.apply_xor(man.var(1), man.var(2))
    assert man.substitute(f, Unifier({2: lit(1)})) == F


def test_exists_basics():
    man = Bdd([1, 2, 3])
    b, c = man.var(2), man.var(3)
    f = man.apply_and(b, c)
    assert man.exists(f, 1) == f  # independent variable
    assert man.exists(f, 2) == c


def test_exists_against_enumeration():
    x, y = _ints(2, 2)
    c = Constraint("diff", (x, y))
    man = _man_for(c)
    f = constraint_bdd(man, c, with_integrity=True)
    v = y.bits[0] >> 1
    g = man.exists(f, v)
    sup = [w for w in man.support(f) if w != v]
    table_g = bdd_truth_table(man, g, sup)
    # oracle: exists means some value of v satisfies f
    t1 = bdd_truth_table(man, man.restrict(f, v, True), sup)
    t0 = bdd_truth_table(man, man.restrict(f, v, False), sup)
    assert np.array_equal(table_g, t1 | t0)


def test_canonicity_equivalent_builds_share_root():
    man = Bdd([1, 2, 3])
    a, b = man.var(1), man.var(2)
    f1 = man.apply_or(man.apply_and(a, b), man.apply_and(man.apply_not(a), b))
    f2 = man.var(2)
    assert f1 == f2


def test_node_budget_capacity_error():
    man = Bdd(list(range(1, 40)), node_budget=16)
    with pytest.raises(BddCapacityError):
        f = T
        for v in range(1, 40, 2):
            f = man.apply_and(f, man.apply_xor(man.var(v), man.var(v + 1)))


def test_quadratic_node_bound_for_diff():
    # internal node count for diff over two n-bit ints stays within 4(n+1)^2
    for n in (4, 8, 16, 32, 64):
        x, y = _ints(n, n)
        c = Constraint("diff", (x, y))
        man = _man_for(c)
        f = constraint_bdd(man, c, with_integrity=True)
        assert man.internal_node_count(f) <= 4 * (n + 1) ** 2


def test_dot_dump_mentions_style_convention():
    man = Bdd([1, 2])
    f = man.apply_and(man.var(1), man.var(2))
    dot = man.to_dot(f, name=lambda v: "x%d" % v)
    assert "style=solid" in dot and "style=dashed" in dot
    assert dot.startswith("digraph")


def test_iter_models_low_branch_first():
    man = Bdd([1, 2])
    f = man.apply_or(man.var(1), man.var(2))
    models = list(man.iter_models(f, [1, 2]))
    assert models == [
        {1: False, 2: True}, {1: True, 2: False}, {1: True, 2: True},
    ]
