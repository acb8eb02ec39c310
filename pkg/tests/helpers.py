"""Shared test oracles: enumeration, truth tables, random instances.

Everything here is deliberately independent of the compilation pipeline:
truth tables come from the scalar reference semantics or from direct BDD
evaluation, and expected values are computed by exhaustive enumeration.
"""

from __future__ import annotations

import random
from itertools import product

import numpy as np

from equisat.literals import (EquiFormula, FALSE, TRUE, lit, neg, norm_eq)
from equisat.model import Constraint, Model, UnaryInt
from equisat.semantics import eval_constraint, ev, int_monotone


def iter_bits(n):
    return product((False, True), repeat=n)


def assignments_over(variables):
    variables = list(variables)
    for values in iter_bits(len(variables)):
        yield dict(zip(variables, values))


def constraint_models(c: Constraint, variables, with_integrity=False):
    """Assignments satisfying c (and optionally its integer integrity)."""
    out = []
    for a in assignments_over(variables):
        if with_integrity and not all(int_monotone(u, a) for u in c.ints):
            continue
        if eval_constraint(c, a):
            out.append(a)
    return out


def bdd_truth_table(man, f, variables) -> np.ndarray:
    """Vectorized truth table of a BDD over the given variables."""
    variables = list(variables)
    n = len(variables)
    size = 1 << n
    cols = {}
    for i, v in enumerate(variables):
        # variable i toggles with period 2^(n-1-i), matching iter_bits order
        pattern = np.arange(size) >> (n - 1 - i) & 1
        cols[v] = pattern.astype(bool)
    memo = {0: np.zeros(size, dtype=bool), 1: np.ones(size, dtype=bool)}

    def walk(node):
        got = memo.get(node)
        if got is not None:
            return got
        v = man.var_at[man.lev[node]]
        res = np.where(cols[v], walk(man.hi[node]), walk(man.lo[node]))
        memo[node] = res
        return res

    return walk(f)


def constraint_truth_table(c: Constraint, variables) -> np.ndarray:
    """Scalar-oracle truth table (slow path, the ground truth)."""
    variables = list(variables)
    out = np.zeros(1 << len(variables), dtype=bool)
    for i, a in enumerate(assignments_over(variables)):
        out[i] = eval_constraint(c, a)
    return out


def formula_holds(e: EquiFormula, a) -> bool:
    return all(ev(x, a) == ev(y, a) for x, y in e)


def entailed_set_bruteforce(c: Constraint, variables):
    """All equations entailed by c_u over the given variables and constants.

    Enumerates the models of c conjoined with integrity and reads the
    equation set off the full model list; None when unsatisfiable.
    """
    models = constraint_models(c, variables, with_integrity=True)
    if not models:
        return None
    eqs = set()
    for i, v in enumerate(variables):
        col_v = [m[v] for m in models]
        if all(col_v):
            eqs.add(norm_eq(lit(v), TRUE))
        elif not any(col_v):
            eqs.add(norm_eq(lit(v), FALSE))
        for w in variables[i + 1:]:
            col_w = [m[w] for m in models]
            if col_v == col_w:
                eqs.add(norm_eq(lit(v), lit(w)))
            elif all(x != y for x, y in zip(col_v, col_w)):
                eqs.add(norm_eq(lit(v), neg(lit(w))))
    return eqs


# ---------------------------------------------------------------------------
# random instance generators (deterministic given the seed)


def fresh_ints(m: Model, widths, prefix="u"):
    return [m.new_int("%s%d" % (prefix, i), w) for i, w in enumerate(widths)]


def random_low_constraint(rng: random.Random, m: Model, tag=None) -> Constraint:
    tag = tag or rng.choice(
        ["diff", "leq", "block", "uadder", "unary", "pairwise_and",
         "pairwise_xor", "lexleq"]
    )
    if tag == "unary":
        (x,) = fresh_ints(m, [rng.randint(1, 5)])
        a = rng.randint(0, x.width)
        b = rng.randint(a, x.width)
        return Constraint("unary", (x,), params=(a, b))
    if tag in ("diff", "leq"):
        w = rng.randint(1, 4)
        x, y = fresh_ints(m, [w, rng.randint(1, 4)])
        return Constraint(tag, (x, y))
    if tag == "block":
        x, y = fresh_ints(m, [rng.randint(1, 3), rng.randint(1, 3)])
        vec = m.new_vec("v0", rng.randint(1, 3))
        return Constraint("block", (x, y), (vec,))
    if tag == "uadder":
        wa, wb = rng.randint(1, 3), rng.randint(1, 3)
        x, y, z = fresh_ints(m, [wa, wb, rng.randint(1, wa + wb)])
        return Constraint("uadder", (x, y, z))
    if tag in ("pairwise_and", "pairwise_xor"):
        w = rng.randint(1, 4)
        vecs = tuple(m.new_vec("v%d" % k, w) for k in range(3))
        return Constraint(tag, vecs=vecs)
    if tag == "lexleq":
        w = rng.randint(1, 5)
        return Constraint(
            "lexleq", vecs=(m.new_vec("v0", w), m.new_vec("v1", w))
        )
    raise ValueError(tag)


def random_equi_formula(rng: random.Random, variables, max_eqs=3) -> EquiFormula:
    """A satisfiable random equality store over the given variables."""
    eqs = []
    # satisfiability by construction: equalities follow a fixed assignment
    hidden = {v: rng.random() < 0.5 for v in variables}
    for _ in range(rng.randint(0, max_eqs)):
        if not variables:
            break
        v = rng.choice(variables)
        if rng.random() < 0.5:
            eqs.append((lit(v), TRUE if hidden[v] else FALSE))
        else:
            w = rng.choice(variables)
            if v == w:
                continue
            same = hidden[v] == hidden[w]
            eqs.append((lit(v), lit(w) if same else neg(lit(w))))
    return EquiFormula(eqs)


def random_mixed_model(seed: int, max_bits: int = 13) -> Model:
    """Small random model mixing tags, equalities and shared vectors."""
    rng = random.Random(seed)
    m = Model()
    ints = [m.new_int("i%d" % k, rng.randint(1, 3))
            for k in range(rng.randint(0, 3))]
    vecs = [m.new_vec("v%d" % k, rng.randint(1, 3))
            for k in range(rng.randint(0, 3))]
    if m.nvars == 0 or m.nvars > max_bits:
        return random_mixed_model(seed + 7919, max_bits)
    allbits = [l for u in ints for l in u.bits] + [l for v in vecs for l in v]
    for _ in range(rng.randint(0, 3)):
        a = rng.choice(allbits)
        if rng.random() < 0.4:
            m.add_eq(a, TRUE if rng.random() < 0.5 else FALSE)
        else:
            b = rng.choice(allbits)
            if (a >> 1) != (b >> 1):
                m.add_eq(a, b if rng.random() < 0.5 else neg(b))
    for _ in range(rng.randint(1, 3)):
        kind = rng.choice(
            ["diff", "leq", "uadder", "pairwise_xor", "pairwise_and",
             "sumbits", "lexleq", "block", "alldiff", "biteq"]
        )
        if kind in ("diff", "leq") and len(ints) >= 2:
            m.add(Constraint(kind, tuple(rng.sample(ints, 2))))
        elif kind == "uadder" and len(ints) >= 3:
            m.add(Constraint("uadder", tuple(rng.sample(ints, 3))))
        elif kind in ("pairwise_xor", "pairwise_and") and vecs:
            w = min(len(v) for v in vecs)
            vs = tuple(tuple(rng.choice(vecs)[:w]) for _ in range(3))
            m.add(Constraint(kind, vecs=vs))
        elif kind == "sumbits" and ints and vecs:
            m.add(Constraint("sumbits", (rng.choice(ints),), (rng.choice(vecs),)))
        elif kind == "lexleq" and vecs:
            w = min(len(v) for v in vecs)
            m.add(Constraint("lexleq", vecs=(
                tuple(rng.choice(vecs)[:w]), tuple(rng.choice(vecs)[:w]))))
        elif kind == "block" and len(ints) >= 2 and vecs:
            m.add(Constraint("block", tuple(rng.sample(ints, 2)),
                             (rng.choice(vecs),)))
        elif kind == "alldiff" and len(ints) >= 2:
            m.add(Constraint("alldiff",
                             tuple(rng.sample(ints, min(len(ints), 3)))))
        elif kind == "biteq":
            a, b = rng.choice(allbits), rng.choice(allbits)
            if (a >> 1) != (b >> 1):
                m.add(Constraint("biteq", vecs=((a, b),)))
    if not m.store:
        return random_mixed_model(seed + 104729, max_bits)
    return m
