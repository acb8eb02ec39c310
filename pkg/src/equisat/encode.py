"""CNF encoding of the simplified store.

Every residual constraint either has a direct clause template or, for
BDD-backed residues, a Tseitin read-off with one auxiliary per internal
node.  Bits already bound to constants or other literals never reach the
solver: the ``VarMap`` sends every model bit to the solver literal of its
class representative (or T/F).  Tautological and duplicate clauses are
dropped; a compile-time-unsatisfiable model encodes as the single empty
clause.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bdd import F as BDD_F, T as BDD_T
from .literals import FALSE, TRUE, is_const, lit, neg
from .model import Constraint, UNSAT, domain_of

T_CODE = "T"
F_CODE = "F"


@dataclass
class Cnf:
    num_vars: int = 0
    clauses: list = field(default_factory=list)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


class VarMap:
    """Model bit -> solver literal (or constant T/F)."""

    def __init__(self):
        self.entries: list[tuple[str, int, object]] = []
        self.solver_lit: dict[int, int] = {}  # rep var -> positive solver id
        self.num_model_vars = 0

    def code_of(self, name: str, index: int):
        for n, i, code in self.entries:
            if n == name and i == index:
                return code
        raise KeyError((name, index))

    def decode_bit(self, name: str, index: int, assignment) -> bool:
        code = self.code_of(name, index)
        if code == T_CODE:
            return True
        if code == F_CODE:
            return False
        value = assignment.get(abs(code), False)
        return value if code > 0 else not value

    def project_vars(self, names=None) -> list[int]:
        """Solver variables backing the given (default: all) declared names."""
        out = []
        seen = set()
        for n, _, code in self.entries:
            if names is not None and n not in names:
                continue
            if isinstance(code, int) and abs(code) not in seen:
                seen.add(abs(code))
                out.append(abs(code))
        return out


class _Emitter:
    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        self.clauses: list[list[int]] = []
        self.seen: set[tuple[int, ...]] = set()
        self.has_empty = False

    def fresh(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def clause(self, lits) -> None:
        """Add a clause of solver codes, folding constants.

        A literal may be the string constant T/F; T satisfies the clause,
        F drops out.  Tautologies and duplicates are discarded; an empty
        folded clause marks the CNF unsatisfiable.
        """
        out = []
        mark = set()
        for l in lits:
            if l == T_CODE:
                return
            if l == F_CODE:
                continue
            if -l in mark:
                return  # tautology
            if l not in mark:
                mark.add(l)
                out.append(l)
        if not out:
            self.has_empty = True
            return
        key = tuple(sorted(out))
        if key in self.seen:
            return
        self.seen.add(key)
        self.clauses.append(out)


def _build_varmap(state) -> VarMap:
    vm = VarMap()
    model = state.model
    uf = state.uf
    # dense ids for class representatives, in variable-creation order
    for v in range(1, model.nvars + 1):
        c = uf.canon(lit(v))
        if is_const(c):
            continue
        rep = c >> 1
        if rep == v and rep not in vm.solver_lit:
            vm.solver_lit[rep] = len(vm.solver_lit) + 1
    for name, index, l in model.declared_bits():
        c = uf.canon(l)
        if c == TRUE:
            code = T_CODE
        elif c == FALSE:
            code = F_CODE
        else:
            sid = vm.solver_lit[c >> 1]
            code = -sid if c & 1 else sid
        vm.entries.append((name, index, code))
    vm.num_model_vars = len(vm.solver_lit)
    return vm


def _solver_code(state, vm: VarMap, l: int):
    c = state.uf.canon(l)
    if c == TRUE:
        return T_CODE
    if c == FALSE:
        return F_CODE
    sid = vm.solver_lit[c >> 1]
    return -sid if c & 1 else sid


def encode_model(state):
    """(Cnf, VarMap) for a propagated and simplified compile state."""
    model = state.model
    if model.status == UNSAT or state.contradiction:
        vm = VarMap()
        for name, index, l in model.declared_bits():
            c = state.uf.canon(l)
            if is_const(c):
                vm.entries.append((name, index, T_CODE if c == TRUE else F_CODE))
        return Cnf(0, [[]]), vm
    vm = _build_varmap(state)
    em = _Emitter(vm.num_model_vars)
    code = lambda l: _solver_code(state, vm, l)
    # order-encoding integrity over residual adjacent bit pairs
    for kind, name in model.decl_order:
        if kind != "int":
            continue
        u = model.ints[name]
        for i in range(2, u.width + 1):
            lo, hi = code(u.bit(i - 1)), code(u.bit(i))
            if lo == T_CODE or hi == F_CODE or lo == hi:
                continue
            em.clause([_neg_code(hi), lo])
    for item in state.items:
        if not item.alive:
            continue
        _encode_constraint(state, em, vm, item.c)
    if em.has_empty:
        return Cnf(0, [[]]), vm
    return Cnf(em.num_vars, em.clauses), vm


def _neg_code(c):
    if c == T_CODE:
        return F_CODE
    if c == F_CODE:
        return T_CODE
    return -c


def _encode_constraint(state, em: _Emitter, vm: VarMap, raw: Constraint) -> None:
    c = state.canon_constraint(raw)
    code = lambda l: _solver_code(state, vm, l)
    tag = c.tag
    if tag == "unary":
        return  # integrity clauses are emitted per declared int
    if tag == "diff":
        _encode_diff(em, vm, c, code)
    elif tag == "leq":
        x, y = c.ints
        for i in range(1, max(x.width, y.width) + 1):
            em.clause([_neg_code(code(x.bit(i))), code(y.bit(i))])
    elif tag == "block":
        u1, u2 = c.ints
        (vec,) = c.vecs
        for i in range(1, len(vec) + 1):
            em.clause(
                [code(u1.bit(i)), _neg_code(code(u2.bit(i))), code(vec[i - 1])]
            )
    elif tag == "uadder":
        u1, u2, u3 = c.ints
        for i in range(u1.width + 1):
            for j in range(u2.width + 1):
                em.clause(
                    [
                        _neg_code(code(u1.bit(i))),
                        _neg_code(code(u2.bit(j))),
                        code(u3.bit(i + j)),
                    ]
                )
                em.clause(
                    [
                        code(u1.bit(i + 1)),
                        code(u2.bit(j + 1)),
                        _neg_code(code(u3.bit(i + j + 1))),
                    ]
                )
    elif tag == "pairwise_and":
        va, vb, vc = c.vecs
        for x, y, z in zip(va, vb, vc):
            cx, cy, cz = code(x), code(y), code(z)
            em.clause([_neg_code(cz), cx])
            em.clause([_neg_code(cz), cy])
            em.clause([_neg_code(cx), _neg_code(cy), cz])
    elif tag == "pairwise_xor":
        va, vb, vc = c.vecs
        for x, y, z in zip(va, vb, vc):
            cx, cy, cz = code(x), code(y), code(z)
            em.clause([_neg_code(cz), cx, cy])
            em.clause([_neg_code(cz), _neg_code(cx), _neg_code(cy)])
            em.clause([cz, _neg_code(cx), cy])
            em.clause([cz, cx, _neg_code(cy)])
    elif tag == "lexleq":
        _encode_lexleq(em, c, code)
    elif tag == "biteq":
        ((l1, l2),) = c.vecs
        c1, c2 = code(l1), code(l2)
        em.clause([_neg_code(c1), c2])
        em.clause([c1, _neg_code(c2)])
    elif tag == "permutation":
        encode_permutation(state, em, vm, c)
    elif tag == "bdd":
        encode_bdd(state.man, em, c.params[0], code)
    elif tag == "alldiff":
        # only reachable with simplification disabled before decomposition
        us = c.ints
        for i in range(len(us)):
            for j in range(i + 1, len(us)):
                _encode_diff(em, vm, Constraint("diff", (us[i], us[j])), code)
    else:
        raise ValueError("cannot encode tag %r" % tag)


def _encode_diff(em: _Emitter, vm: VarMap, c: Constraint, code) -> None:
    """Per-index difference auxiliaries d_i -> (x_i xor y_i), plus cover."""
    x, y = c.ints
    cover = []
    for i in range(1, max(x.width, y.width) + 1):
        cx, cy = code(x.bit(i)), code(y.bit(i))
        if cx in (T_CODE, F_CODE) and cy in (T_CODE, F_CODE):
            if cx != cy:
                return  # constraint already true
            continue
        if cx in (T_CODE, F_CODE):
            cx, cy = cy, cx
        if cy == T_CODE:
            cover.append(_neg_code(cx))
        elif cy == F_CODE:
            cover.append(cx)
        elif cx == cy:
            continue
        elif cx == -cy:
            return  # xor is constantly true
        else:
            d = em.fresh()
            em.clause([-d, cx, cy])
            em.clause([-d, -cx, -cy])
            cover.append(d)
    em.clause(cover)


def _encode_lexleq(em: _Emitter, c: Constraint, code) -> None:
    """Prefix-equality auxiliaries; constant prefixes fold away."""
    v1, v2 = c.vecs
    e = T_CODE  # "prefix equal so far"
    for x, y in zip(v1, v2):
        cx, cy = code(x), code(y)
        em.clause([_neg_code(e), _neg_code(cx), cy])
        # e' <- e & (x <-> y)
        if cx in (T_CODE, F_CODE) and cy in (T_CODE, F_CODE):
            if cx != cy:
                return  # prefixes differ from here on: nothing more to say
            continue  # e' = e
        if cx == cy:
            continue
        if cx == _neg_code(cy):
            return
        e2 = em.fresh()
        em.clause([e2, _neg_code(e), _neg_code(cx), _neg_code(cy)])
        em.clause([e2, _neg_code(e), cx, cy])
        e = e2


def encode_permutation(state, em: _Emitter, vm: VarMap, c: Constraint) -> None:
    """Redundant value-cover clauses when the ints form a permutation.

    With S the union of current domains and |S| = m, defines b_iv for
    "U_i takes value v" against the unary bits and adds one cover clause
    per value; definitions collapsing against constants reuse literals
    instead of fresh variables.  If |S| != m nothing is added.
    """
    us = c.ints  # already substituted by the caller
    code = lambda l: _solver_code(state, vm, l)
    doms = [domain_of(u) for u in us]
    s = sorted(set().union(*doms)) if doms else []
    if len(s) != len(us):
        return
    for v in s:
        cover = []
        for u in us:
            hi, lo = code(u.bit(v)), code(u.bit(v + 1))
            # d <-> hi & ~lo
            d = _and_not(em, hi, lo)
            if d == T_CODE:
                cover = [T_CODE]
                break
            if d != F_CODE:
                cover.append(d)
        em.clause(cover)


def _and_not(em: _Emitter, a, b):
    """Literal or fresh aux equivalent to a & ~b (solver codes)."""
    if a == F_CODE or b == T_CODE:
        return F_CODE
    if b == F_CODE:
        return a
    if a == T_CODE:
        return _neg_code(b)
    if a == b:
        return F_CODE
    if a == -b:
        return a
    d = em.fresh()
    em.clause([-d, a])
    em.clause([-d, _neg_code(b)])
    em.clause([d, _neg_code(a), b])
    return d


def encode_bdd(man, em: _Emitter, f: int, code) -> None:
    """Tseitin read-off: one aux per internal node, root asserted.

    ``code`` maps a literal code to its solver code.  Nodes whose children
    are both terminals collapse to the branch literal itself, so a
    single-variable BDD encodes as one unit clause.
    """
    if f == BDD_T:
        return
    if f == BDD_F:
        em.clause([])
        return
    node_code: dict[int, object] = {BDD_T: T_CODE, BDD_F: F_CODE}
    seen = set()
    stack = [f]
    while stack:
        n = stack.pop()
        if n <= 1 or n in seen:
            continue
        seen.add(n)
        stack.append(man.lo[n])
        stack.append(man.hi[n])
    # the unique table hands out handles bottom-up, so ascending handle
    # order is a valid children-first order
    for n in sorted(seen):
        lo, hi = man.lo[n], man.hi[n]
        v = code(lit(man.var_at[man.lev[n]]))
        if lo == BDD_F and hi == BDD_T:
            node_code[n] = v
            continue
        if lo == BDD_T and hi == BDD_F:
            node_code[n] = _neg_code(v)
            continue
        a = em.fresh()
        hic, loc = node_code[hi], node_code[lo]
        em.clause([-a, _neg_code(v), hic])
        em.clause([-a, v, loc])
        em.clause([a, _neg_code(v), _neg_code(hic)])
        em.clause([a, v, _neg_code(loc)])
        node_code[n] = a
    em.clause([node_code[f]])


def write_dimacs(cnf: Cnf, varmap: VarMap, cnf_path, map_path=None) -> None:
    lines = ["p cnf %d %d" % (cnf.num_vars, cnf.num_clauses)]
    for clause in cnf.clauses:
        lines.append(" ".join(str(l) for l in clause + [0]).strip() or "0")
    text = "\n".join(lines) + "\n"
    _write(cnf_path, text)
    if map_path is not None:
        map_lines = [
            "%s %d %s" % (name, index, code) for name, index, code in varmap.entries
        ]
        _write(map_path, "\n".join(map_lines) + ("\n" if map_lines else ""))


def _write(path, text: str) -> None:
    import sys

    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
