import random

import pytest

from equisat.literals import (CHANGED, CONTRADICTION, UNCHANGED, EquiFormula,
                              FALSE, LitUnionFind, TRUE, Unifier,
                              apply_unifier, build_unifier, lit, neg,
                              norm_eq)
from helpers import assignments_over, formula_holds


def B(i, negated=False):
    return lit(i, negated)


def test_negation_involution():
    for v in range(1, 20):
        for s in (False, True):
            l = lit(v, s)
            assert neg(neg(l)) == l
    assert neg(TRUE) == FALSE and neg(FALSE) == TRUE


def test_unifier_worked_example():
    # b1=-b2, -b3=-b4, b5=b6, b6=b4, b7=1, b8=-b7
    e = EquiFormula([
        (B(1), neg(B(2))), (neg(B(3)), neg(B(4))), (B(5), B(6)),
        (B(6), B(4)), (B(7), TRUE), (B(8), neg(B(7))),
    ])
    theta = build_unifier(e)
    assert theta.bindings == {
        2: neg(B(1)), 4: B(3), 5: B(3), 6: B(3), 7: TRUE, 8: FALSE,
    }
    assert apply_unifier(theta, B(2)) == neg(B(1))
    # applying the unifier makes every equation trivially true
    for a, b in e:
        assert theta(a) == theta(b)


def test_empty_formula_gives_identity():
    theta = build_unifier(EquiFormula())
    assert theta.is_identity()
    for l in (B(1), neg(B(5)), TRUE):
        assert apply_unifier(theta, l) == l


def test_direct_contradiction():
    e = EquiFormula([(B(1), B(2)), (B(2), neg(B(1)))])
    assert build_unifier(e) is CONTRADICTION


def test_apply_handles_double_negation():
    theta = Unifier({2: neg(B(3))})
    assert apply_unifier(theta, neg(B(2))) == B(3)


def test_unifier_idempotent_and_never_binds_own_negation():
    rng = random.Random(11)
    for _ in range(200):
        nv = rng.randint(1, 8)
        eqs = []
        for _ in range(rng.randint(0, 10)):
            a = lit(rng.randint(1, nv), rng.random() < 0.5)
            b = lit(rng.randint(1, nv), rng.random() < 0.5)
            if rng.random() < 0.2:
                b = TRUE if rng.random() < 0.5 else FALSE
            eqs.append((a, b))
        theta = build_unifier(EquiFormula(eqs))
        if theta is CONTRADICTION:
            continue
        for v, t in theta.bindings.items():
            assert t != neg(lit(v))
            assert theta(t) == t  # idempotent: targets are fixed points


def test_merge_incremental_matches_build():
    uf = LitUnionFind()
    res, changed = uf.merge(B(1), B(2))
    assert res is CHANGED and changed
    assert uf.canon(B(2)) == B(1)
    assert uf.merge(B(2), B(1))[0] is UNCHANGED
    assert uf.merge(B(1), neg(B(2)))[0] is CONTRADICTION


def test_merge_agrees_with_build_unifier_on_random_sequences():
    rng = random.Random(5)
    for _ in range(150):
        nv = rng.randint(2, 7)
        eqs = []
        uf = LitUnionFind()
        dead = False
        for _ in range(rng.randint(1, 9)):
            a = lit(rng.randint(1, nv), rng.random() < 0.5)
            b = lit(rng.randint(1, nv), rng.random() < 0.5)
            eqs.append((a, b))
            if not dead and uf.merge(a, b)[0] is CONTRADICTION:
                dead = True
        built = build_unifier(EquiFormula(eqs))
        if dead:
            assert built is CONTRADICTION
        else:
            assert built == uf.snapshot()


def test_canonicity_is_order_independent():
    rng = random.Random(17)
    base = [(B(1), neg(B(2))), (B(3), B(4)), (B(2), B(4)), (B(5), TRUE)]
    ref = build_unifier(EquiFormula(base))
    for _ in range(20):
        shuffled = base[:]
        rng.shuffle(shuffled)
        assert build_unifier(EquiFormula(shuffled)) == ref


def _formula_vars(e):
    vs = set()
    for a, b in e:
        for l in (a, b):
            if l > 1:
                vs.add(l >> 1)
    return sorted(vs)


def test_contradiction_iff_unsatisfiable_by_enumeration():
    rng = random.Random(23)
    for _ in range(300):
        nv = rng.randint(1, 6)
        eqs = []
        for _ in range(rng.randint(0, 8)):
            a = lit(rng.randint(1, nv), rng.random() < 0.5)
            b = (TRUE if rng.random() < 0.5 else FALSE) if rng.random() < 0.3 \
                else lit(rng.randint(1, nv), rng.random() < 0.5)
            eqs.append((a, b))
        e = EquiFormula(eqs)
        theta = build_unifier(e)
        satisfiable = any(
            formula_holds(e, a) for a in assignments_over(range(1, nv + 1))
        )
        assert (theta is CONTRADICTION) == (not satisfiable)


def test_most_generality_every_solution_factors_through():
    rng = random.Random(29)
    for _ in range(120):
        nv = rng.randint(1, 6)
        eqs = [
            (lit(rng.randint(1, nv), rng.random() < 0.5),
             lit(rng.randint(1, nv), rng.random() < 0.5))
            for _ in range(rng.randint(0, 6))
        ]
        e = EquiFormula(eqs)
        theta = build_unifier(e)
        if theta is CONTRADICTION:
            continue
        for a in assignments_over(range(1, nv + 1)):
            if not formula_holds(e, a):
                continue
            # a solution agrees with the unifier on every bound variable
            for v, t in theta.bindings.items():
                want = (t == TRUE) if t <= 1 else a[t >> 1] ^ bool(t & 1)
                assert a[v] == want


def test_norm_eq_symmetry():
    assert norm_eq(B(3), neg(B(1))) == norm_eq(neg(B(3)), B(1))
    assert norm_eq(B(2), B(2)) == (B(2), B(2))
    assert norm_eq(FALSE, B(4)) == (TRUE, neg(B(4)))
