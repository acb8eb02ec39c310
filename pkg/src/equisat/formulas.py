"""Constraint to BDD construction.

Builds the Boolean function of a constraint inside a ``Bdd`` manager,
optionally conjoined with the order-encoding integrity of its integer
arguments (the "_u" form used by propagation and redundancy tests).
"""

from __future__ import annotations

from .bdd import Bdd, F, T
from .literals import is_const
from .model import Constraint, ShiftedView


def interleaved_order(c: Constraint) -> list[int]:
    """Per-constraint variable order: argument vectors interleaved by index.

    Keeps pairwise constraints (diff, leq, adders) linear to quadratic.
    """
    columns = []
    for u in c.ints:
        base = u.base if isinstance(u, ShiftedView) else u
        columns.append(list(base.bits))
    for vec in c.vecs:
        columns.append(list(vec))
    order: list[int] = []
    seen = set()
    for i in range(max((len(col) for col in columns), default=0)):
        for col in columns:
            if i < len(col) and not is_const(col[i]):
                v = col[i] >> 1
                if v not in seen:
                    seen.add(v)
                    order.append(v)
    return order


def integrity_bdd(man: Bdd, u) -> int:
    """Monotonicity of an integer argument: X(i) -> X(i-1) for every i."""
    f = T
    for i in range(2, u.width + 1):
        f = man.apply_and(f, man.apply_imp(man.lit(u.bit(i)), man.lit(u.bit(i - 1))))
    return f


def constraint_bdd(man: Bdd, c: Constraint, with_integrity: bool = False) -> int:
    f = _plain_bdd(man, c)
    if with_integrity:
        for u in c.ints:
            f = man.apply_and(f, integrity_bdd(man, u))
            if f == F:
                break
    return f


def _plain_bdd(man: Bdd, c: Constraint) -> int:
    tag = c.tag
    if tag == "unary":
        (x,) = c.ints
        lo, hi = c.params
        f = integrity_bdd(man, x)
        f = man.apply_and(f, man.lit(x.bit(lo)))
        return man.apply_and(f, man.apply_not(man.lit(x.bit(hi + 1))))
    if tag == "diff":
        x, y = c.ints
        return man.disj(
            man.apply_xor(man.lit(x.bit(i)), man.lit(y.bit(i)))
            for i in range(1, max(x.width, y.width) + 1)
        )
    if tag == "alldiff":
        us = c.ints
        return man.conj(
            _plain_bdd(man, Constraint("diff", (us[i], us[j])))
            for i in range(len(us))
            for j in range(i + 1, len(us))
        )
    if tag == "leq":
        x, y = c.ints
        return man.conj(
            man.apply_imp(man.lit(x.bit(i)), man.lit(y.bit(i)))
            for i in range(1, max(x.width, y.width) + 1)
        )
    if tag == "block":
        u1, u2 = c.ints
        (vec,) = c.vecs
        return man.conj(
            man.disj(
                [man.lit(u1.bit(i)),
                 man.apply_not(man.lit(u2.bit(i))),
                 man.lit(vec[i - 1])]
            )
            for i in range(1, len(vec) + 1)
        )
    if tag == "uadder":
        u1, u2, u3 = c.ints
        f = T
        for i in range(u1.width + 1):
            a = man.lit(u1.bit(i))
            a1 = man.lit(u1.bit(i + 1))
            for j in range(u2.width + 1):
                b = man.lit(u2.bit(j))
                b1 = man.lit(u2.bit(j + 1))
                f = man.apply_and(
                    f,
                    man.disj(
                        [man.apply_not(a), man.apply_not(b), man.lit(u3.bit(i + j))]
                    ),
                )
                f = man.apply_and(
                    f,
                    man.disj([a1, b1, man.apply_not(man.lit(u3.bit(i + j + 1)))]),
                )
                if f == F:
                    return F
        return f
    if tag == "sumbits":
        (u,) = c.ints
        (vec,) = c.vecs
        memo: dict[tuple[int, int], int] = {}

        def at_least(idx: int, k: int) -> int:
            if k <= 0:
                return T
            if k > len(vec) - idx:
                return F
            key = (idx, k)
            got = memo.get(key)
            if got is None:
                b = man.lit(vec[idx])
                got = man.ite(b, at_least(idx + 1, k - 1), at_least(idx + 1, k))
                memo[key] = got
            return got

        return man.conj(
            man.apply_iff(man.lit(u.bit(i)), at_least(0, i))
            for i in range(1, max(u.width, len(vec)) + 1)
        )
    if tag in ("pairwise_and", "pairwise_xor"):
        va, vb, vc = c.vecs
        op = man.apply_and if tag == "pairwise_and" else man.apply_xor
        return man.conj(
            man.apply_iff(man.lit(z), op(man.lit(x), man.lit(y)))
            for x, y, z in zip(va, vb, vc)
        )
    if tag == "lexleq":
        v1, v2 = c.vecs
        f = T  # suffix comparison, built back to front
        for x, y in zip(reversed(v1), reversed(v2)):
            bx, by = man.lit(x), man.lit(y)
            less = man.apply_and(man.apply_not(bx), by)
            f = man.apply_or(less, man.apply_and(man.apply_iff(bx, by), f))
        return f
    if tag == "lexleqlist":
        vs = c.vecs
        return man.conj(
            _plain_bdd(man, Constraint("lexleq", vecs=(vs[i], vs[i + 1])))
            for i in range(len(vs) - 1)
        )
    if tag == "biteq":
        ((l1, l2),) = c.vecs
        return man.apply_iff(man.lit(l1), man.lit(l2))
    if tag == "permutation":
        return T  # redundant by construction
    if tag == "bdd":
        return c.params[0]
    raise ValueError("cannot build BDD for tag %r" % tag)
