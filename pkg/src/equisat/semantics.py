"""Reference Boolean semantics of constraints: the brute-force oracle.

``eval_constraint`` evaluates one constraint under a total assignment of
its bits, straight from the defining formulas.  It is deliberately naive
and independent of the BDD engine and the CNF encoder; tests use it as the
ground truth both are checked against.
"""

from __future__ import annotations

from itertools import product

from .literals import TRUE, is_const
from .model import Constraint, ShiftedView


def ev(l: int, assignment) -> bool:
    if is_const(l):
        return l == TRUE
    return bool(assignment[l >> 1]) ^ bool(l & 1)


def _ibit(u, i: int, a) -> bool:
    return ev(u.bit(i), a)


def int_monotone(u, a) -> bool:
    """Order-encoding integrity: the bit sequence never increases."""
    prev = True
    for i in range(1, u.width + 1):
        cur = _ibit(u, i, a)
        if cur and not prev:
            return False
        prev = cur
    return True


def eval_constraint(c: Constraint, a) -> bool:
    """Truth value of c's Boolean function under assignment var -> bool."""
    tag = c.tag
    if tag == "unary":
        (x,) = c.ints
        lo, hi = c.params
        return int_monotone(x, a) and _ibit(x, lo, a) and not _ibit(x, hi + 1, a)
    if tag == "diff":
        x, y = c.ints
        return any(
            _ibit(x, i, a) != _ibit(y, i, a)
            for i in range(1, max(x.width, y.width) + 1)
        )
    if tag == "alldiff":
        us = c.ints
        return all(
            eval_constraint(Constraint("diff", (us[i], us[j])), a)
            for i in range(len(us))
            for j in range(i + 1, len(us))
        )
    if tag == "leq":
        x, y = c.ints
        return all(
            not _ibit(x, i, a) or _ibit(y, i, a)
            for i in range(1, max(x.width, y.width) + 1)
        )
    if tag == "block":
        u1, u2 = c.ints
        (vec,) = c.vecs
        for i in range(1, len(vec) + 1):
            if not _ibit(u1, i, a) and _ibit(u2, i, a) and not ev(vec[i - 1], a):
                return False
        return True
    if tag == "uadder":
        u1, u2, u3 = c.ints
        for i in range(u1.width + 1):
            for j in range(u2.width + 1):
                if _ibit(u1, i, a) and _ibit(u2, j, a) and not _ibit(u3, i + j, a):
                    return False
                if (
                    not _ibit(u1, i + 1, a)
                    and not _ibit(u2, j + 1, a)
                    and _ibit(u3, i + j + 1, a)
                ):
                    return False
        return True
    if tag == "sumbits":
        (u,) = c.ints
        (vec,) = c.vecs
        count = sum(1 for l in vec if ev(l, a))
        return all(
            _ibit(u, i, a) == (count >= i)
            for i in range(1, max(u.width, len(vec)) + 1)
        )
    if tag == "pairwise_and":
        va, vb, vc = c.vecs
        return all(
            ev(z, a) == (ev(x, a) and ev(y, a)) for x, y, z in zip(va, vb, vc)
        )
    if tag == "pairwise_xor":
        va, vb, vc = c.vecs
        return all(ev(z, a) == (ev(x, a) != ev(y, a)) for x, y, z in zip(va, vb, vc))
    if tag == "lexleq":
        v1, v2 = c.vecs
        t1 = tuple(ev(l, a) for l in v1)
        t2 = tuple(ev(l, a) for l in v2)
        return t1 <= t2
    if tag == "lexleqlist":
        vs = c.vecs
        return all(
            eval_constraint(Constraint("lexleq", vecs=(vs[i], vs[i + 1])), a)
            for i in range(len(vs) - 1)
        )
    if tag == "biteq":
        ((l1, l2),) = c.vecs
        return ev(l1, a) == ev(l2, a)
    if tag == "permutation":
        return True  # redundant by construction
    raise ValueError("no reference semantics for tag %r" % tag)


def iter_assignments(variables):
    """All total assignments over the given variables, as dicts."""
    variables = list(variables)
    for values in product((False, True), repeat=len(variables)):
        yield dict(zip(variables, values))


def model_ok(model, a) -> bool:
    """Does the assignment satisfy the whole model (store + E + integrity)?"""
    for x in model.ints.values():
        if not int_monotone(x, a):
            return False
    for l, r in model.equations:
        if ev(l, a) != ev(r, a):
            return False
    return all(eval_constraint(c, a) for c in model.store)


def model_solutions(model, variables=None):
    """Enumerate satisfying assignments over the given (default: all) bits."""
    if variables is None:
        variables = list(range(1, model.nvars + 1))
    for a in iter_assignments(variables):
        if model_ok(model, a):
            yield a


def count_model_solutions(model, variables=None) -> int:
    return sum(1 for _ in model_solutions(model, variables))
