"""Reduced ordered binary decision diagrams with structural sharing.

A ``Bdd`` manager owns a fixed variable order and a unique-node table, so
structurally equal functions always share the same handle; equality of
handles is equality of functions.  Handles 0 and 1 are the FALSE and TRUE
terminals, internal nodes start at 2.  There are no complement edges.

The manager enforces a node budget: exceeding it raises
``BddCapacityError`` rather than grinding on.
"""

from __future__ import annotations

from . import literals

F = 0
T = 1

_AND = 0
_OR = 1
_XOR = 2


class BddCapacityError(Exception):
    pass


class Bdd:
    def __init__(self, var_order, node_budget: int = 1 << 22):
        """var_order: variable ids from first (top) to last (bottom)."""
        self.var_at = list(var_order)
        self.level_of = {v: i for i, v in enumerate(self.var_at)}
        if len(self.level_of) != len(self.var_at):
            raise ValueError("duplicate variable in order")
        self.node_budget = node_budget
        nlev = len(self.var_at)
        # terminals live at a pseudo-level below all variables
        self.lev = [nlev, nlev]
        self.lo = [0, 1]
        self.hi = [0, 1]
        self.unique: dict[tuple[int, int, int], int] = {}
        self.cache: dict[tuple, int] = {}

    # -- construction --------------------------------------------------

    def mk(self, level: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (level, lo, hi)
        n = self.unique.get(key)
        if n is not None:
            return n
        n = len(self.lev)
        if n >= self.node_budget:
            raise BddCapacityError("node budget %d exceeded" % self.node_budget)
        self.lev.append(level)
        self.lo.append(lo)
        self.hi.append(hi)
        self.unique[key] = n
        return n

    def var(self, v: int, negated: bool = False) -> int:
        level = self.level_of[v]
        return self.mk(level, T, F) if negated else self.mk(level, F, T)

    def lit(self, l: int) -> int:
        """BDD of a literal code from the literals module."""
        if literals.is_const(l):
            return T if l == literals.TRUE else F
        return self.var(l >> 1, bool(l & 1))

    def const(self, value: bool) -> int:
        return T if value else F

    @property
    def num_nodes(self) -> int:
        return len(self.lev)

    def internal_node_count(self, f: int) -> int:
        seen = set()
        stack = [f]
        while stack:
            n = stack.pop()
            if n <= 1 or n in seen:
                continue
            seen.add(n)
            stack.append(self.lo[n])
            stack.append(self.hi[n])
        return len(seen)

    # -- boolean operations --------------------------------------------

    def _apply(self, op: int, f: int, g: int) -> int:
        if op == _AND:
            if f == F or g == F:
                return F
            if f == T:
                return g
            if g == T:
                return f
            if f == g:
                return f
        elif op == _OR:
            if f == T or g == T:
                return T
            if f == F:
                return g
            if g == F:
                return f
            if f == g:
                return f
        else:  # XOR
            if f == F:
                return g
            if g == F:
                return f
            if f == g:
                return F
            if f == T and g == T:
                return F
        if f > g:
            f, g = g, f  # all three ops are commutative: canonical key order
        key = (op, f, g)
        r = self.cache.get(key)
        if r is not None:
            return r
        lf, lg = self.lev[f], self.lev[g]
        if lf == lg:
            lo = self._apply(op, self.lo[f], self.lo[g])
            hi = self._apply(op, self.hi[f], self.hi[g])
            r = self.mk(lf, lo, hi)
        elif lf < lg:
            lo = self._apply(op, self.lo[f], g)
            hi = self._apply(op, self.hi[f], g)
            r = self.mk(lf, lo, hi)
        else:
            lo = self._apply(op, f, self.lo[g])
            hi = self._apply(op, f, self.hi[g])
            r = self.mk(lg, lo, hi)
        self.cache[key] = r
        return r

    def apply_and(self, f: int, g: int) -> int:
        return self._apply(_AND, f, g)

    def apply_or(self, f: int, g: int) -> int:
        return self._apply(_OR, f, g)

    def apply_xor(self, f: int, g: int) -> int:
        return self._apply(_XOR, f, g)

    def apply_not(self, f: int) -> int:
        return self._apply(_XOR, f, T)

    def apply_iff(self, f: int, g: int) -> int:
        return self.apply_not(self.apply_xor(f, g))

    def apply_imp(self, f: int, g: int) -> int:
        return self.apply_or(self.apply_not(f), g)

    def ite(self, c: int, t: int, e: int) -> int:
        return self.apply_or(self.apply_and(c, t), self.apply_and(self.apply_not(c), e))

    def conj(self, fs) -> int:
        r = T
        for f in fs:
            r = self.apply_and(r, f)
            if r == F:
                return F
        return r

    def disj(self, fs) -> int:
        r = F
        for f in fs:
            r = self.apply_or(r, f)
            if r == T:
                return T
        return r

    # -- cofactor / substitution / projection ---------------------------

    def restrict(self, f: int, v: int, value: bool) -> int:
        level = self.level_of[v]
        key = ("r", f, level, value)
        cached = self.cache.get(key)
        if cached is not None:
            return cached
        r = self._restrict(f, level, value, {})
        self.cache[key] = r
        return r

    def _restrict(self, f: int, level: int, value: bool, memo: dict) -> int:
        if self.lev[f] > level:
            return f
        got = memo.get(f)
        if got is not None:
            return got
        if self.lev[f] == level:
            r = self.hi[f] if value else self.lo[f]
        else:
            lo = self._restrict(self.lo[f], level, value, memo)
            hi = self._restrict(self.hi[f], level, value, memo)
            r = self.mk(self.lev[f], lo, hi)
        memo[f] = r
        return r

    def exists(self, f: int, v: int) -> int:
        return self.apply_or(self.restrict(f, v, True), self.restrict(f, v, False))

    def exists_many(self, f: int, vs) -> int:
        for v in sorted(vs, key=lambda v: self.level_of[v], reverse=True):
            f = self.exists(f, v)
        return f

    def compose(self, f: int, v: int, g: int) -> int:
        """f with variable v replaced by the function g."""
        return self.ite(g, self.restrict(f, v, True), self.restrict(f, v, False))

    def substitute(self, f: int, theta) -> int:
        """Apply a unifier (variable -> literal code) to f."""
        for v in self.support(f):
            target = theta.bindings.get(v) if hasattr(theta, "bindings") else theta.get(v)
            if target is None:
                continue
            f = self.compose(f, v, self.lit(target))
        return f

    # -- queries ---------------------------------------------------------

    def entails(self, f: int, g: int) -> bool:
        """True iff every satisfying assignment of f satisfies g."""
        return self._leq(f, g, {})

    def _leq(self, f: int, g: int, memo: dict) -> bool:
        if f == F or g == T or f == g:
            return True
        if g == F:
            return False
        if f == T:
            return False  # g != T here
        key = (f, g)
        got = memo.get(key)
        if got is not None:
            return got
        lf, lg = self.lev[f], self.lev[g]
        if lf == lg:
            r = self._leq(self.lo[f], self.lo[g], memo) and self._leq(
                self.hi[f], self.hi[g], memo
            )
        elif lf < lg:
            r = self._leq(self.lo[f], g, memo) and self._leq(self.hi[f], g, memo)
        else:
            r = self._leq(f, self.lo[g], memo) and self._leq(f, self.hi[g], memo)
        memo[key] = r
        return r

    def support(self, f: int) -> list[int]:
        """Variables f depends on, in order position."""
        levels = set()
        seen = set()
        stack = [f]
        while stack:
            n = stack.pop()
            if n <= 1 or n in seen:
                continue
            seen.add(n)
            levels.add(self.lev[n])
            stack.append(self.lo[n])
            stack.append(self.hi[n])
        return [self.var_at[l] for l in sorted(levels)]

    def eval(self, f: int, assignment) -> bool:
        """assignment: mapping variable id -> bool."""
        while f > 1:
            v = self.var_at[self.lev[f]]
            f = self.hi[f] if assignment[v] else self.lo[f]
        return f == T

    def count(self, f: int, over=None) -> int:
        """Number of satisfying assignments over `over` (default: support)."""
        if over is None:
            over = self.support(f)
        levels = sorted(self.level_of[v] for v in over)
        pos = {l: i for i, l in enumerate(levels)}
        nsup = len(levels)
        for v in self.support(f):
            if self.level_of[v] not in pos:
                raise ValueError("count range must cover the support")
        memo: dict[int, int] = {}

        def walk(n: int) -> tuple[int, int]:
            # returns (count over variables strictly below position, position)
            if n == T:
                return 1, nsup
            if n == F:
                return 0, nsup
            got = memo.get(n)
            if got is None:
                clo, plo = walk(self.lo[n])
                chi, phi = walk(self.hi[n])
                p = pos[self.lev[n]]
                got = (clo << (plo - p - 1)) + (chi << (phi - p - 1)), p
                memo[n] = got
            return got

        c, p = walk(f)
        return c << p

    def iter_models(self, f: int, over, limit=None):
        """Yield satisfying assignments as dicts over the given variables.

        Deterministic: variables in order, low branch first.
        """
        levels = [self.level_of[v] for v in over]
        if levels != sorted(levels):
            raise ValueError("model variables must respect the order")
        n = len(over)
        emitted = 0
        stack = [(f, 0, {})]
        while stack:
            node, i, part = stack.pop()
            if node == F:
                continue
            if i == n:
                if node == T:
                    yield part
                    emitted += 1
                    if limit is not None and emitted >= limit:
                        return
                continue
            v = over[i]
            if node > 1 and self.lev[node] == levels[i]:
                lo, hi = self.lo[node], self.hi[node]
            else:
                lo = hi = node
            # push high first so low is explored first
            stack.append((hi, i + 1, {**part, v: True}))
            stack.append((lo, i + 1, {**part, v: False}))

    # -- debug ------------------------------------------------------------

    def to_dot(self, f: int, name=None) -> str:
        """DOT dump: solid edge = true child, dashed = false child."""
        name = name or (lambda v: "x%d" % v)
        lines = ["digraph bdd {"]
        lines.append('  nT [label="T", shape=box];')
        lines.append('  nF [label="F", shape=box];')
        seen = set()
        stack = [f]
        while stack:
            n = stack.pop()
            if n <= 1 or n in seen:
                continue
            seen.add(n)
            lines.append('  n%d [label="%s"];' % (n, name(self.var_at[self.lev[n]])))
            for child, style in ((self.hi[n], "solid"), (self.lo[n], "dashed")):
                tgt = "nT" if child == T else "nF" if child == F else "n%d" % child
                lines.append("  n%d -> %s [style=%s];" % (n, tgt, style))
                stack.append(child)
        if f == T:
            lines.append("  root -> nT;")
        elif f == F:
            lines.append("  root -> nF;")
        else:
            lines.append("  root -> n%d;" % f)
        lines.append('  root [shape=none, label=""];')
        lines.append("}")
        return "\n".join(lines)
