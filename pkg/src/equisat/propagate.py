"""The propagation engine.

Complete propagators extract every equality between literals (and
constants) entailed by a constraint conjoined with the current equality
store: the substituted constraint is built as a BDD, sampled models
narrow the candidate equations, and cofactor tests verify them.  allDiff
gets an ad-hoc propagator built on bipartite matching over the value
graph, with Hall sets read off the strongly connected components of the
residual orientation.  A wake-up queue drives everything to quiescence,
interleaving decomposition of high-level constraints when nothing fires.
"""

from __future__ import annotations

from collections import deque

from .bdd import Bdd, F, T
from .formulas import constraint_bdd, interleaved_order
from .literals import (CHANGED, CONTRADICTION, EquiFormula, FALSE,
                       LitUnionFind, TRUE, is_const, lit, norm_eq)
from .model import (Constraint, Model, UNSAT, UnaryInt, domain_of)

SAMPLE_LIMIT = 64


# ---------------------------------------------------------------------------
# complete equi-propagation over a BDD

def _const_holds(man: Bdd, f: int, v: int, value: bool) -> bool:
    """f entails v = value."""
    return man.restrict(f, v, not value) == F


def _pair_holds(man: Bdd, f: int, v1: int, v2: int, same: bool) -> bool:
    """f entails v1 = v2 (same) or v1 = ~v2 (not same)."""
    if same:
        return (man.restrict(man.restrict(f, v1, True), v2, False) == F
                and man.restrict(man.restrict(f, v1, False), v2, True) == F)
    return (man.restrict(man.restrict(f, v1, True), v2, True) == F
            and man.restrict(man.restrict(f, v1, False), v2, False) == F)


def _spread_models(man: Bdd, f: int, support, count: int):
    """Deterministic pseudo-random walks through f, avoiding FALSE.

    Lexicographic enumeration only wiggles the deepest variables, which
    leaves the shallow columns constant and floods the verifier with
    false candidates; hashed branch choices spread the samples over the
    whole support.
    """
    levels = [man.level_of[v] for v in support]
    out = []
    for s in range(1, count + 1):
        h = (s * 0x9E3779B1) & 0xFFFFFFFF
        node = f
        mdl = {}
        for i, v in enumerate(support):
            want = (h >> (i % 29)) & 1
            h = (h * 0x2545F491 + s) & 0xFFFFFFFF
            if node > 1 and man.lev[node] == levels[i]:
                hi, lo = man.hi[node], man.lo[node]
                child = hi if want else lo
                if child == F:
                    child = lo if want else hi
                    want ^= 1
                node = child
            mdl[v] = bool(want)
        out.append(mdl)
    return out


def entailed_equations(man: Bdd, f: int):
    """A spanning set of the equations entailed by f.

    Sound and complete over f's support plus constants: sampled models
    prune the candidates, cofactor tests confirm them (skipped when the
    sample already covers every model).  Returns CONTRADICTION for the
    FALSE terminal.
    """
    if f == F:
        return CONTRADICTION
    support = man.support(f)
    if f == T or not support:
        return []
    models = list(man.iter_models(f, support, limit=SAMPLE_LIMIT))
    exhaustive = len(models) < SAMPLE_LIMIT
    if not exhaustive:
        models.extend(_spread_models(man, f, support, SAMPLE_LIMIT))
    eqs = []
    groups: dict[tuple, list[tuple[int, int]]] = {}
    for v in support:
        sig = tuple(mdl[v] for mdl in models)
        if all(sig) or not any(sig):
            value = sig[0]
            if exhaustive or _const_holds(man, f, v, value):
                eqs.append(norm_eq(lit(v), TRUE if value else FALSE))
                continue
        pol = 1 if sig[0] else 0
        key = tuple(b != sig[0] for b in sig)
        groups.setdefault(key, []).append((v, pol))
    for key in sorted(groups):
        members = groups[key]
        if len(members) < 2:
            continue
        subclasses: list[tuple[int, int]] = []  # verified leaders
        for v, pol in members:
            placed = False
            for leader, lpol in subclasses:
                same = pol == lpol
                if exhaustive or _pair_holds(man, f, leader, v, same):
                    eqs.append(norm_eq(lit(leader), lit(v, not same)))
                    placed = True
                    break
            if not placed:
                subclasses.append((v, pol))
    return eqs


def entailed_closure(man: Bdd, f: int):
    """All entailed equations over support literals and constants."""
    eqs = entailed_equations(man, f)
    if eqs is CONTRADICTION:
        return CONTRADICTION
    uf = LitUnionFind()
    for a, b in eqs:
        uf.merge(a, b)
    support = man.support(f)
    out = set()
    for i, v in enumerate(support):
        cv = uf.canon(lit(v))
        if is_const(cv):
            out.add(norm_eq(lit(v), cv))
        for w in support[i + 1:]:
            cw = uf.canon(lit(w))
            if (cv >> 1) == (cw >> 1):
                out.add(norm_eq(lit(v), lit(w, bool((cv ^ cw) & 1))))
    return sorted(out)


def complete_ep(c: Constraint, e: EquiFormula):
    """mu_hat for one constraint: E plus everything c_u & E entails.

    Standalone form over a private manager; returns an EquiFormula or
    CONTRADICTION when the substituted constraint is unsatisfiable.
    """
    uf = LitUnionFind()
    for a, b in e:
        res, _ = uf.merge(a, b)
        if res is CONTRADICTION:
            return CONTRADICTION
    sub = c.map_lits(uf.canon)
    man = Bdd(interleaved_order(sub))
    f = constraint_bdd(man, sub, with_integrity=True)
    eqs = entailed_closure(man, f)
    if eqs is CONTRADICTION:
        return CONTRADICTION
    return e.union(eqs)


# ---------------------------------------------------------------------------
# ad-hoc allDiff propagation (matching + Hall sets)

def _max_matching(doms: list[list[int]]):
    """Left-perfect bipartite matching var -> value via augmenting paths."""
    match_var: list = [None] * len(doms)
    match_val: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for v in doms[i]:
            if v in seen:
                continue
            seen.add(v)
            j = match_val.get(v)
            if j is None or augment(j, seen):
                match_var[i] = v
                match_val[v] = i
                return True
        return False

    for i in range(len(doms)):
        if not augment(i, set()):
            return None
        # match_var[i] set by augment
    return match_var, match_val


def _sccs(nnodes: int, adj: list[list[int]]) -> list[int]:
    """Tarjan (iterative); returns component id per node."""
    index = [0] * nnodes
    low = [0] * nnodes
    on = [False] * nnodes
    comp = [-1] * nnodes
    stack: list[int] = []
    counter = [1]
    ncomp = [0]

    for root in range(nnodes):
        if index[root]:
            continue
        work = [(root, 0)]
        while work:
            node, pi = work[-1]
            if pi == 0:
                index[node] = low[node] = counter[0]
                counter[0] += 1
                stack.append(node)
                on[node] = True
            advanced = False
            while pi < len(adj[node]):
                nxt = adj[node][pi]
                pi += 1
                if not index[nxt]:
                    work[-1] = (node, pi)
                    work.append((nxt, 0))
                    advanced = True
                    break
                if on[nxt]:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                while True:
                    top = stack.pop()
                    on[top] = False
                    comp[top] = ncomp[0]
                    if top == node:
                        break
                ncomp[0] += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return comp


def alldiff_filter(doms: list[list[int]]):
    """Domain-consistent filtering plus maximal Hall sets.

    Returns (filtered domains, hall sets) where a hall set is
    (variable indices, value set); or CONTRADICTION when no left-perfect
    matching exists.
    """
    m = len(doms)
    matching = _max_matching(doms)
    if matching is None:
        return CONTRADICTION
    match_var, match_val = matching
    values = sorted({v for dom in doms for v in dom})
    vid = {v: m + k for k, v in enumerate(values)}
    nnodes = m + len(values)
    # orientation: matched edges var -> value, unmatched value -> var
    adj: list[list[int]] = [[] for _ in range(nnodes)]
    for i, dom in enumerate(doms):
        for v in dom:
            if match_var[i] == v:
                adj[i].append(vid[v])
            else:
                adj[vid[v]].append(i)
    comp = _sccs(nnodes, adj)
    # even alternating paths from matching-free values
    reach = [False] * nnodes
    frontier = [vid[v] for v in values if v not in match_val]
    for n in frontier:
        reach[n] = True
    while frontier:
        n = frontier.pop()
        for nxt in adj[n]:
            if not reach[nxt]:
                reach[nxt] = True
                frontier.append(nxt)
    filtered = []
    for i, dom in enumerate(doms):
        keep = [
            v for v in dom
            if v == match_var[i] or comp[vid[v]] == comp[i] or reach[vid[v]]
        ]
        filtered.append(keep)
    by_comp: dict[int, list[int]] = {}
    for i in range(m):
        by_comp.setdefault(comp[i], []).append(i)
    halls = []
    for _, vars_in in sorted(by_comp.items(), key=lambda kv: min(kv[1])):
        union = set()
        for i in vars_in:
            union.update(doms[i])
        if len(union) == len(vars_in):
            halls.append((sorted(vars_in), sorted(union)))
    return filtered, halls


def _domain_equations(u, new_dom) -> list[tuple[int, int]]:
    """Equations pinning u to the given domain, sentinel bits folding to
    constants: X(v) = X(v+1) for every excluded v.  Complete for a single
    integer under the order encoding."""
    eqs = []
    new = set(new_dom)
    for v in range(u.width + 1):
        if v in new:
            continue
        a, b = u.bit(v), u.bit(v + 1)
        if a == b:
            continue
        eqs.append(norm_eq(a, b))
    return eqs


def _dropped_equations(u, old_dom, new_dom) -> list[tuple[int, int]]:
    """The adapter rule: X(v) = X(v+1) for each value dropped from u's
    domain, plus the bound constants when the domain shrinks to one value
    (the order encoding then has no free bits left)."""
    eqs = []
    new = set(new_dom)
    for v in old_dom:
        if v in new:
            continue
        a, b = u.bit(v), u.bit(v + 1)
        if a != b:
            eqs.append(norm_eq(a, b))
    if len(new) == 1:
        (w,) = new
        for j in range(1, u.width + 1):
            a = u.bit(j)
            want = TRUE if j <= w else FALSE
            if a != want:
                eqs.append(norm_eq(a, want))
    return eqs


def alldiff_ep(us, e: EquiFormula):
    """Ad-hoc allDiff propagator, standalone form.

    Returns (EquiFormula, hall_sets) with hall_sets a list of
    (1-based int indices, value list); or CONTRADICTION.
    """
    uf = LitUnionFind()
    for a, b in e:
        res, _ = uf.merge(a, b)
        if res is CONTRADICTION:
            return CONTRADICTION
    subs = [u.with_bits(tuple(uf.canon(l) for l in u.bits)) for u in us]
    doms = [domain_of(u) for u in subs]
    if any(not d for d in doms):
        return CONTRADICTION
    res = alldiff_filter(doms)
    if res is CONTRADICTION:
        return CONTRADICTION
    filtered, halls = res
    eqs = []
    for u, old, new in zip(subs, doms, filtered):
        eqs.extend(_dropped_equations(u, old, new))
    hall_sets = [([i + 1 for i in vars_in], vals) for vars_in, vals in halls]
    return e.union(eqs), hall_sets


def fd_adapter(dom_propagator, c: Constraint, e: EquiFormula):
    """Turn a finite-domain propagator into an equality propagator.

    ``dom_propagator`` maps a list of per-argument domains to narrowed
    domains; dropped values become X(v) = X(v+1) equations.
    """
    uf = LitUnionFind()
    for a, b in e:
        res, _ = uf.merge(a, b)
        if res is CONTRADICTION:
            return CONTRADICTION
    subs = [u.with_bits(tuple(uf.canon(l) for l in u.bits)) for u in c.ints]
    doms = [domain_of(u) for u in subs]
    if any(not d for d in doms):
        return CONTRADICTION
    narrowed = dom_propagator([list(d) for d in doms])
    if narrowed is CONTRADICTION or any(not d for d in narrowed):
        return CONTRADICTION
    eqs = []
    for u, old, new in zip(subs, doms, narrowed):
        dropped = set(old) - set(new)
        for v in sorted(dropped):
            a, b = u.bit(v), u.bit(v + 1)
            if a != b:
                eqs.append(norm_eq(a, b))
    return e.union(eqs)


# ---------------------------------------------------------------------------
# decomposition

def decompose(c: Constraint, model: Model | None = None) -> list[Constraint]:
    """High-level constraint to low-level constraints.

    allDiff becomes pairwise diffs plus a redundant permutation marker;
    lexleqlist becomes a chain; sumBits needs a model to allocate the
    adder tree (see decompose_sumbits).
    """
    if c.tag == "alldiff":
        us = c.ints
        out = [
            Constraint("diff", (us[i], us[j]))
            for i in range(len(us))
            for j in range(i + 1, len(us))
        ]
        out.append(Constraint("permutation", us))
        return out
    if c.tag == "lexleqlist":
        vs = c.vecs
        return [
            Constraint("lexleq", vecs=(vs[i], vs[i + 1])) for i in range(len(vs) - 1)
        ]
    if c.tag == "sumbits":
        if model is None:
            raise ValueError("sumbits decomposition allocates fresh ints")
        return decompose_sumbits(model, c)
    raise ValueError("not a decomposable tag: %r" % c.tag)


def decompose_sumbits(model: Model, c: Constraint) -> list[Constraint]:
    """Balanced adder tree summing the bits into the target integer.

    Intermediate widths are clamped to the target's width: a sum already
    known to stay below some bound never needs wider counters, and the
    adder's overflow clauses make the clamp sound.
    """
    (target,) = c.ints
    (bits,) = c.vecs
    cap = target.width
    out: list[Constraint] = []
    layer = [UnaryInt("", (b,)) for b in bits]
    if not layer:
        for i in range(1, target.width + 1):
            model.add_eq(target.bit(i), FALSE)
        return out
    while len(layer) > 1:
        nxt = []
        for k in range(0, len(layer) - 1, 2):
            a, b = layer[k], layer[k + 1]
            w = min(a.width + b.width, cap)
            if len(layer) == 2 and w == target.width:
                s = target
            else:
                s = model.new_int("_s%d" % _next_aux(model), w, aux=True)
            out.append(Constraint("uadder", (a, b, s)))
            nxt.append(s)
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    root = layer[0]
    if root is not target:
        for i in range(1, max(root.width, target.width) + 1):
            a, b = root.bit(i), target.bit(i)
            if a != b:
                model.add_eq(a, b)
    return out


def _next_aux(model: Model) -> int:
    n = getattr(model, "_aux_counter", 0) + 1
    model._aux_counter = n
    return n


def decompose_model(model: Model) -> None:
    """Eager decomposition at load: sumBits and lexleqlist disappear.

    allDiff stays high-level so Hall-set propagation can fire before the
    pairwise split.
    """
    store = list(model.store)
    model.store = []
    for c in store:
        if c.tag == "sumbits":
            model.store.extend(decompose_sumbits(model, c))
        elif c.tag == "lexleqlist":
            model.store.extend(decompose(c))
        else:
            model.store.append(c)


# ---------------------------------------------------------------------------
# the fixpoint engine

class StoreItem:
    __slots__ = ("cid", "c", "alive", "last_root")

    def __init__(self, cid: int, c: Constraint):
        self.cid = cid
        self.c = c
        self.alive = True
        self.last_root = None

    def __repr__(self):
        return "#%d %s" % (self.cid, self.c.pretty())


class EPState:
    """Shared state of one compilation: equality store, manager, queue."""

    def __init__(self, model: Model, node_budget: int = 1 << 22, trace=None):
        self.model = model
        self.uf = LitUnionFind(model.nvars)
        order = sorted(range(1, model.nvars + 1),
                       key=lambda v: (model.bit_owner[v][1], v))
        self.man = Bdd(order, node_budget=node_budget)
        self.items: list[StoreItem] = []
        self.queue: deque[int] = deque()
        self.inq: set[int] = set()
        self.watchers: dict[int, set[int]] = {}
        self.trace = trace
        self.ep_steps = 0          # E-changing propagator invocations
        self.invocations = 0
        self.contradiction = False

    # -- store management ------------------------------------------------

    def add_item(self, c: Constraint, enqueue: bool = True) -> StoreItem:
        item = StoreItem(len(self.items), c)
        self.items.append(item)
        if enqueue and c.tag != "permutation":
            self._enqueue(item.cid)
        return item

    def _enqueue(self, cid: int) -> None:
        if cid not in self.inq and self.items[cid].alive:
            self.inq.add(cid)
            self.queue.append(cid)

    def canon_constraint(self, c: Constraint) -> Constraint:
        return c.map_lits(self.uf.canon)

    def alive_items(self):
        return [it for it in self.items if it.alive]

    # -- equality store ----------------------------------------------------

    def merge(self, a: int, b: int) -> bool:
        """Record a = b; wakes watchers.  Returns True if E changed."""
        res, changed = self.uf.merge(a, b)
        if res is CONTRADICTION:
            self.contradiction = True
            return False
        if res is not CHANGED:
            return False
        for v in changed:
            for cid in self.watchers.pop(v, ()):
                self._enqueue(cid)
        return True

    def _watch(self, cid: int, c: Constraint) -> None:
        for v in c.support_vars():
            cl = self.uf.canon(lit(v))
            if not is_const(cl):
                self.watchers.setdefault(cl >> 1, set()).add(cid)

    # -- propagator dispatch -------------------------------------------------

    def run_item(self, item: StoreItem) -> None:
        if not item.alive or self.contradiction:
            return
        self.invocations += 1
        c = self.canon_constraint(item.c)
        tag = c.tag
        if tag == "unary":
            eqs = self._run_unary(c)
        elif tag == "alldiff":
            eqs = self._run_alldiff(item, c)
        elif tag == "permutation":
            return
        else:
            eqs = self._run_bdd(item, c)
        if eqs is CONTRADICTION:
            self.contradiction = True
            return
        if eqs is None:
            self._watch(item.cid, c)
            return
        changed_any = False
        for a, b in eqs:
            if self.merge(a, b):
                changed_any = True
            if self.contradiction:
                return
        if changed_any:
            self.ep_steps += 1
            if self.trace:
                self.trace(item.cid, item.c, eqs)
        self._watch(item.cid, c)

    def _run_unary(self, c: Constraint):
        (x,) = c.ints
        dom = domain_of(x)
        if not dom:
            return CONTRADICTION
        return _domain_equations(x, dom)

    def _run_bdd(self, item: StoreItem, c: Constraint):
        f = constraint_bdd(self.man, c, with_integrity=True)
        if f == item.last_root:
            return None
        item.last_root = f
        return entailed_equations(self.man, f)

    def _run_alldiff(self, item: StoreItem, c: Constraint):
        us = c.ints
        doms = [domain_of(u) for u in us]
        if any(not d for d in doms):
            return CONTRADICTION
        res = alldiff_filter(doms)
        if res is CONTRADICTION:
            return CONTRADICTION
        filtered, halls = res
        eqs = []
        for u, old, new in zip(us, doms, filtered):
            eqs.extend(_dropped_equations(u, old, new))
        proper = [vars_in for vars_in, _ in halls if 0 < len(vars_in) < len(us)]
        if proper:
            self._split_alldiff(item, proper)
        return eqs

    def _split_alldiff(self, item: StoreItem, hall_parts: list[list[int]]) -> None:
        """allDiff(Us) -> allDiff(hall part) & ... & allDiff(rest)."""
        us = item.c.ints  # original (unsubstituted) operands
        taken: set[int] = set()
        parts: list[list[int]] = []
        for vars_in in hall_parts:
            fresh = [i for i in vars_in if i not in taken]
            taken.update(fresh)
            if fresh:
                parts.append(fresh)
        rest = [i for i in range(len(us)) if i not in taken]
        if rest:
            parts.append(rest)
        item.alive = False
        for part in parts:
            sub = tuple(us[i] for i in part)
            if len(sub) >= 2:
                self.add_item(Constraint("alldiff", sub))

    # -- driver ---------------------------------------------------------------

    def propagate(self) -> None:
        while not self.contradiction:
            while self.queue:
                cid = self.queue.popleft()
                self.inq.discard(cid)
                self.run_item(self.items[cid])
                if self.contradiction:
                    return
            # quiescent: decompose one high-level constraint, if any
            pending = next(
                (it for it in self.items if it.alive and it.c.tag == "alldiff"), None
            )
            if pending is None:
                return
            pending.alive = False
            for sub in decompose(pending.c):
                self.add_item(sub)

    def low_level_count(self) -> int:
        return sum(
            1 for it in self.items if it.c.tag not in ("alldiff", "permutation")
        )


def fixpoint(model: Model, node_budget: int = 1 << 22, trace=None) -> EPState:
    """Decompose eagerly, then run all propagators to quiescence."""
    decompose_model(model)
    state = EPState(model, node_budget=node_budget, trace=trace)
    for a, b in model.equations:
        state.merge(a, b)
        if state.contradiction:
            break
    for name in [n for k, n in model.decl_order if k == "int"]:
        state.add_item(Constraint("unary", (model.ints[name],),
                                  params=(0, model.ints[name].width)))
    for c in model.store:
        state.add_item(c)
    if not state.contradiction:
        state.propagate()
    if state.contradiction:
        model.status = UNSAT
    return state
