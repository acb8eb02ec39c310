import copy
import random

import pytest

from equisat.bdd import T
from equisat.formulas import constraint_bdd
from equisat.literals import FALSE, TRUE, lit, neg
from equisat.model import Constraint, Model, const_unary
from equisat.pipeline import compile_model
from equisat.propagate import fixpoint
from equisat.semantics import count_model_solutions
from equisat.simplify import eliminate_redundant, restrict_dont_cares, simplify
from helpers import random_mixed_model
import equisat.solver as sat


def _alive(state, tag=None):
    return [it for it in state.items
            if it.alive and (tag is None or it.c.tag == tag)]


def test_eliminate_redundant_diff_after_fix_and_equation():
    # B = 2 and A2 = A3: the diff follows from A's own order encoding
    m = Model()
    a = m.new_int("A", 3)
    b = m.new_int("B", 3)
    m.fix_value(b, 2)
    m.add_eq(a.bit(2), a.bit(3))
    m.add(Constraint("diff", (a, b)))
    state = fixpoint(m)
    dropped = eliminate_redundant(state)
    assert not _alive(state, "diff")


def test_eliminate_tautology_after_substitution():
    m = Model()
    x = m.new_int("X", 3)
    y = m.new_int("Y", 3)
    m.fix_value(x, 2)
    m.fix_value(y, 3)
    m.add(Constraint("diff", (x, y)))
    state = fixpoint(m)
    eliminate_redundant(state)
    assert not _alive(state, "diff")


def test_diff_with_empty_store_kept():
    m = Model()
    x = m.new_int("X", 3)
    y = m.new_int("Y", 3)
    m.add(Constraint("diff", (x, y)))
    state = fixpoint(m)
    eliminate_redundant(state)
    assert _alive(state, "diff")


def test_restriction_drops_dont_care_bit():
    # x1 = x2 = 1: y1 becomes a don't care in diff(X, Y)
    m = Model()
    x = m.new_int("X", 4)
    y = m.new_int("Y", 4)
    m.add_eq(x.bit(1), TRUE)
    m.add_eq(x.bit(2), TRUE)
    m.add(Constraint("diff", (x, y)))
    state = fixpoint(m)
    item = _alive(state, "diff")[0]
    assert restrict_dont_cares(state, item)
    assert item.c.tag == "bdd"
    f = item.c.params[0]
    support = set(state.man.support(f))
    assert (y.bits[0] >> 1) not in support
    # equivalent to diff over the 3-bit tails: same models under integrity
    from equisat.formulas import integrity_bdd
    man = state.man
    tail = Constraint(
        "diff",
        (x.with_bits(x.bits[1:]), y.with_bits(y.bits[1:])),
    )
    g = constraint_bdd(man, state.canon_constraint(tail))
    sub = state.canon_constraint(Constraint("diff", (x, y)))
    ctx = man.apply_and(
        integrity_bdd(man, sub.ints[0]), integrity_bdd(man, sub.ints[1])
    )
    assert man.apply_and(ctx, man.apply_xor(f, g)) == 0


def test_restriction_noop_without_equalities():
    m = Model()
    x = m.new_int("X", 3)
    y = m.new_int("Y", 3)
    m.add(Constraint("diff", (x, y)))
    state = fixpoint(m)
    item = _alive(state, "diff")[0]
    assert not restrict_dont_cares(state, item)
    assert item.c.tag == "diff"


def test_restriction_block_fully_collapses():
    # block(0, U, Vec) with dom(U) = {0}: the whole window is empty
    m = Model()
    u = m.new_int("U", 3)
    vec = m.new_vec("V", 3)
    m.fix_value(u, 0)
    m.add(Constraint("block", (const_unary(0), u), (vec,)))
    state = fixpoint(m)
    items = _alive(state, "block")
    if items:  # elimination may already have dropped it as a tautology
        restrict_dont_cares(state, items[0])
    assert not _alive(state, "block") and not _alive(state, "bdd")


def test_restriction_idempotent():
    m = Model()
    x = m.new_int("X", 4)
    y = m.new_int("Y", 4)
    m.add_eq(x.bit(1), TRUE)
    m.add_eq(x.bit(2), TRUE)
    m.add(Constraint("diff", (x, y)))
    state = fixpoint(m)
    item = _alive(state, "diff")[0]
    restrict_dont_cares(state, item)
    root = item.c.params[0]
    assert not restrict_dont_cares(state, item)
    assert item.c.params[0] == root


def test_simplification_preserves_projected_counts():
    checked = 0
    seed = 0
    while checked < 60:
        seed += 1
        m = random_mixed_model(seed, max_bits=11)
        want = count_model_solutions(m)
        res = compile_model(copy.deepcopy(m))
        if res.state.model.status == "unsat":
            got = 0
        else:
            got = sat.count_upto(res.cnf, res.varmap.project_vars(), want + 3)
        assert got == want, seed
        checked += 1


def test_no_simplify_flag_agrees_on_counts():
    for seed in (3, 14, 15, 92, 65):
        m1 = random_mixed_model(seed, max_bits=10)
        m2 = copy.deepcopy(m1)
        want = count_model_solutions(m1)
        r1 = compile_model(m1, simplify_store=True)
        r2 = compile_model(m2, simplify_store=False)
        for r in (r1, r2):
            got = (0 if r.state.model.status == "unsat"
                   else sat.count_upto(r.cnf, r.varmap.project_vars(), want + 3))
            assert got == want
