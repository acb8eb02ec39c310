"""Redundant-constraint elimination and don't-care restriction.

Both run after the propagation fixpoint.  A constraint goes away when its
substituted form is a tautology, or when the order-encoding integrity of
its residual integer arguments alone entails it.  Restriction projects
out bits whose value no longer matters given that integrity context,
leaving a BDD-backed residue that the encoder handles via Tseitin.
"""

from __future__ import annotations

from .bdd import F, T
from .formulas import constraint_bdd, integrity_bdd
from .literals import is_const
from .model import Constraint, ShiftedView


def _integrity_ctx(state, c: Constraint) -> int:
    ctx = T
    for u in c.ints:
        ctx = state.man.apply_and(ctx, integrity_bdd(state.man, u))
    return ctx


def eliminate_redundant(state) -> int:
    """Drop store items that are tautologies or follow from integrity alone.

    Returns the number of dropped constraints.  Pairwise subsumption
    between distinct constraints is out: quadratic cost for little gain on
    these models.
    """
    dropped = 0
    for item in state.items:
        if not item.alive or item.c.tag in ("permutation", "alldiff"):
            continue
        if item.c.tag == "unary":
            # integrity carriers: always implied by the integrity clauses
            # the encoder emits for every declared int
            item.alive = False
            dropped += 1
            continue
        c = state.canon_constraint(item.c)
        f = constraint_bdd(state.man, c, with_integrity=False)
        if f == T:
            item.alive = False
            dropped += 1
            continue
        ctx = _integrity_ctx(state, c)
        if ctx != T and state.man.entails(ctx, f):
            item.alive = False
            dropped += 1
    return dropped


def _candidate_bits(c: Constraint) -> list[int]:
    """Bits worth a projection test: next to a constant in an integer
    argument, or aligned with a constant position of a sibling operand."""
    out: list[int] = []
    seen = set()

    def add(l: int):
        if not is_const(l):
            v = l >> 1
            if v not in seen:
                seen.add(v)
                out.append(v)

    for u in c.ints:
        w = u.width
        for i in range(1, w + 1):
            if is_const(u.bit(i - 1)) or is_const(u.bit(i + 1)):
                add(u.bit(i))
    for vec in c.vecs:
        for i in range(1, len(vec) + 1):
            if any(is_const(u.bit(i)) for u in c.ints):
                add(vec[i - 1])
    return out


def restrict_dont_cares(state, item) -> bool:
    """Project don't-care bits out of one constraint.

    Replaces the item's constraint by a BDD-backed residue when at least
    one bit projects; repeats until no candidate projects.  Returns True
    if the constraint changed (it may also be dropped entirely when the
    residue is the TRUE terminal).
    """
    man = state.man
    c = state.canon_constraint(item.c)
    if c.tag in ("permutation", "unary"):
        return False
    f = constraint_bdd(man, c, with_integrity=False)
    if f == T:
        item.alive = False
        return True
    ctx = _integrity_ctx(state, c)
    changed = False
    remaining = [v for v in _candidate_bits(c) if v in man.level_of]
    progress = True
    while progress:
        progress = False
        for v in list(remaining):
            support = man.support(f)
            if v not in support:
                remaining.remove(v)
                continue
            # candidate replacement: v projected out of the constraint
            # under its integrity context; sound to swap in when the
            # context also forces it back onto f
            g = man.exists(man.apply_and(ctx, f), v)
            if man.apply_and(man.apply_and(ctx, g), man.apply_not(f)) == F:
                f = g
                remaining.remove(v)
                changed = progress = True
    if not changed:
        return False
    if f == T:
        item.alive = False
    else:
        item.c = Constraint("bdd", params=(f,))
        item.last_root = f
    return True


def simplify(state) -> dict:
    """Elimination then restriction, as the post-fixpoint pass."""
    dropped = eliminate_redundant(state)
    restricted = 0
    for item in state.items:
        if item.alive and item.c.tag not in ("permutation", "alldiff"):
            if restrict_dont_cares(state, item):
                restricted += 1
    return {"eliminated": dropped, "restricted": restricted}
