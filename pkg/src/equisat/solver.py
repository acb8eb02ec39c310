"""Minimal internal SAT solver and external-solver escape hatch.

Conflict-driven search over two-watched literals: first-UIP clause
learning, phase saving, Luby restarts and activity-ordered decisions with
lowest-index tie-breaking.  Everything is deterministic: no randomness,
no timing dependence, and the initial phase is false-first, which under
the order encoding means trying the smallest value first.  Unit
propagation is exposed separately for the propagation-strength tests.
"""

from __future__ import annotations

import shlex
import subprocess
from dataclasses import dataclass
from heapq import heapify, heappop, heappush


class Conflict:
    def __repr__(self):
        return "Conflict"


CONFLICT = Conflict()


@dataclass
class Sat:
    assignment: dict[int, bool]

    def __bool__(self):
        return True


class Unsat:
    def __repr__(self):
        return "Unsat"

    def __bool__(self):
        return False


UNSAT = Unsat()


def _idx(l: int) -> int:
    return 2 * l if l > 0 else -2 * l + 1


class Solver:
    """One instance may be solved repeatedly with clauses added in between
    (solution blocking); solving resets to decision level zero first."""

    def __init__(self, num_vars: int, clauses=()):
        self.nvars = num_vars
        n = num_vars + 1
        self.assigns = bytearray(n)            # 0 free, 1 true, 2 false
        self.level = [0] * n
        self.reason: list = [None] * n
        self.saved = bytearray(n)              # phase saving; 0 = false
        self.activity = [0.0] * n
        self.var_inc = 1.0
        self.order: list[tuple[float, int]] = []  # lazy max-heap
        self.watches: list[list] = [[] for _ in range(2 * n)]
        self.trail: list[int] = []
        self.lim: list[int] = []               # trail length per level
        self.qhead = 0
        self.units: list[int] = []
        self.learned: list[list[int]] = []
        self.conflicts = 0
        self.ok = True
        for cl in clauses:
            self.add_clause(cl)
        for v in range(1, n):
            heappush(self.order, (0.0, v))

    # -- clauses -------------------------------------------------------------

    def add_clause(self, lits) -> None:
        """Add a clause; only safe between solves (decision level zero)."""
        cl = []
        seen = set()
        for l in lits:
            if -l in seen:
                return  # tautology
            if l in seen:
                continue
            v = l if l > 0 else -l
            a = self.assigns[v]
            if a and self.level[v] == 0:
                if (a == 1) == (l > 0):
                    return  # satisfied at top level
                continue  # permanently false literal drops out
            seen.add(l)
            cl.append(l)
        if not cl:
            self.ok = False
            return
        if len(cl) == 1:
            self.units.append(cl[0])
            return
        self.watches[_idx(cl[0])].append(cl)
        self.watches[_idx(cl[1])].append(cl)

    def _attach_learned(self, cl: list[int]) -> None:
        self.learned.append(cl)
        self.watches[_idx(cl[0])].append(cl)
        self.watches[_idx(cl[1])].append(cl)

    # -- assignment ------------------------------------------------------------

    def _assign(self, l: int, reason=None) -> bool:
        v = l if l > 0 else -l
        a = self.assigns[v]
        if a:
            return (a == 1) == (l > 0)
        self.assigns[v] = 1 if l > 0 else 2
        self.level[v] = len(self.lim)
        self.reason[v] = reason
        self.trail.append(l)
        return True

    def propagate(self):
        trail, assigns, watches = self.trail, self.assigns, self.watches
        level, reason = self.level, self.reason
        dl = len(self.lim)
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            wl = watches[_idx(-p)]
            i = j = 0
            n = len(wl)
            while i < n:
                cl = wl[i]
                i += 1
                if cl[0] == -p:
                    cl[0] = cl[1]
                    cl[1] = -p
                first = cl[0]
                a = assigns[first if first > 0 else -first]
                if a and (a == 1) == (first > 0):
                    wl[j] = cl
                    j += 1
                    continue
                for k in range(2, len(cl)):
                    lk = cl[k]
                    ak = assigns[lk if lk > 0 else -lk]
                    if not ak or (ak == 1) == (lk > 0):
                        cl[1] = lk
                        cl[k] = -p
                        watches[_idx(lk)].append(cl)
                        break
                else:
                    wl[j] = cl
                    j += 1
                    if a:  # conflict
                        while i < n:
                            wl[j] = wl[i]
                            j += 1
                            i += 1
                        del wl[j:]
                        return cl
                    v = first if first > 0 else -first
                    assigns[v] = 1 if first > 0 else 2
                    level[v] = dl
                    reason[v] = cl
                    trail.append(first)
            del wl[j:]
        return None

    # -- conflict analysis ----------------------------------------------------

    def _bump(self, v: int) -> None:
        a = self.activity[v] + self.var_inc
        self.activity[v] = a
        if a > 1e100:
            scale = 1e-100
            for i in range(1, self.nvars + 1):
                self.activity[i] *= scale
            self.var_inc *= scale
            # every queued entry just went stale: rebuild
            self.order = [(-self.activity[i], i) for i in range(1, self.nvars + 1)]
            heapify(self.order)
            return
        heappush(self.order, (-a, v))

    def _analyze(self, confl: list[int]):
        """First UIP; returns (learned clause, backjump level)."""
        seen = bytearray(self.nvars + 1)
        learned = [0]  # placeholder for the asserting literal
        path = 0
        p = None
        index = len(self.trail)
        dl = len(self.lim)
        reason_cl = confl
        while True:
            for q in reason_cl:
                if p is not None and q == p:
                    continue
                v = q if q > 0 else -q
                if not seen[v] and self.level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if self.level[v] >= dl:
                        path += 1
                    else:
                        learned.append(q)
            while True:
                index -= 1
                p = self.trail[index]
                pv = p if p > 0 else -p
                if seen[pv]:
                    break
            seen[pv] = 0
            path -= 1
            if path == 0:
                learned[0] = -p
                break
            reason_cl = self.reason[pv]  # contains p; the skip above drops it
        # minimal backjump level
        if len(learned) == 1:
            bj = 0
        else:
            maxi = max(range(1, len(learned)),
                       key=lambda i: self.level[abs(learned[i])])
            bj = self.level[abs(learned[maxi])]
            learned[1], learned[maxi] = learned[maxi], learned[1]
        return learned, bj

    def _cancel_until(self, lvl: int) -> None:
        if len(self.lim) <= lvl:
            return
        pos = self.lim[lvl]
        saved, assigns = self.saved, self.assigns
        for l in self.trail[pos:]:
            v = l if l > 0 else -l
            saved[v] = 1 if l > 0 else 0
            assigns[v] = 0
            self.reason[v] = None
            heappush(self.order, (-self.activity[v], v))
        del self.trail[pos:]
        del self.lim[lvl:]
        self.qhead = pos

    def _reduce_db(self) -> None:
        keep = set()
        for l in self.trail:
            r = self.reason[l if l > 0 else -l]
            if r is not None:
                keep.add(id(r))
        scored = sorted(
            (cl for cl in self.learned if len(cl) > 2 and id(cl) not in keep),
            key=len,
        )
        drop = set(id(cl) for cl in scored[len(scored) // 2:])
        if not drop:
            return
        self.learned = [cl for cl in self.learned if id(cl) not in drop]
        for wl in self.watches:
            wl[:] = [cl for cl in wl if id(cl) not in drop]

    # -- search ------------------------------------------------------------------

    def solve(self, assumptions=()):
        if not self.ok:
            return UNSAT
        self._cancel_until(0)
        for l in self.units:
            if not self._assign(l):
                return UNSAT
        self.units = []
        if self.propagate() is not None:
            self.ok = False
            return UNSAT
        for l in assumptions:
            # assumptions are decisions: learned clauses then never depend
            # on them except through their own literals
            self.lim.append(len(self.trail))
            if not self._assign(l) or self.propagate() is not None:
                self._cancel_until(0)
                return UNSAT
        root = len(self.lim)  # assumption level (0 without assumptions)
        max_learned = 4000
        luby_k = 1
        restart_lim = self.conflicts + 100 * _luby(luby_k)
        while True:
            confl = self.propagate()
            if confl is not None:
                self.conflicts += 1
                if len(self.lim) == root:
                    self._cancel_until(0)
                    if root == 0:
                        self.ok = False
                    return UNSAT
                learned, bj = self._analyze(confl)
                self._cancel_until(max(bj, root))
                if len(learned) == 1:
                    if not self._assign(learned[0]):
                        if root == 0:
                            self.ok = False
                        else:
                            self._cancel_until(0)
                        return UNSAT
                else:
                    self._attach_learned(learned)
                    self._assign(learned[0], learned)
                self.var_inc /= 0.95
                continue
            if self.conflicts >= restart_lim:
                luby_k += 1
                restart_lim = self.conflicts + 100 * _luby(luby_k)
                self._cancel_until(root)
                continue
            if len(self.learned) > max_learned:
                self._reduce_db()
                max_learned += 300
            v = self._decide()
            if v == 0:
                model = self._model()
                self._cancel_until(root)
                return Sat(model)
            self.lim.append(len(self.trail))
            self._assign(v if self.saved[v] else -v)

    def _decide(self) -> int:
        order, assigns, activity = self.order, self.assigns, self.activity
        while order:
            a, v = heappop(order)
            if not assigns[v] and -a == activity[v]:
                heappush(order, (a, v))  # keep for later re-decisions
                return v
        # the heap can only run dry when everything is assigned; scan to
        # guard the model-completeness invariant
        for v in range(1, self.nvars + 1):
            if not assigns[v]:
                heappush(order, (-activity[v], v))
                return v
        return 0

    def _model(self) -> dict[int, bool]:
        return {v: self.assigns[v] == 1 for v in range(1, self.nvars + 1)}


def _luby(k: int) -> int:
    # Luby sequence: 1 1 2 1 1 2 4 ...
    size, seq = 1, 0
    while size < k + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != k:
        size = (size - 1) // 2
        seq -= 1
        k = k % size
    return 2 ** seq


def solve(cnf) -> Sat | Unsat:
    """Complete decision for a Cnf value."""
    return Solver(cnf.num_vars, cnf.clauses).solve()


def unit_propagate(cnf, assumptions=()):
    """Least fixpoint of the unit rule from the assumptions.

    Returns the fixpoint as a dict var -> bool over the assigned
    variables, or CONFLICT when a clause is falsified.
    """
    s = Solver(cnf.num_vars, cnf.clauses)
    if not s.ok:
        return CONFLICT
    for l in s.units + list(assumptions):
        if not s._assign(l):
            return CONFLICT
    if s.propagate() is not None:
        return CONFLICT
    return {(l if l > 0 else -l): l > 0 for l in s.trail}


def count_upto(cnf, project, k: int) -> int:
    """min(k, number of solutions projected onto the given variables)."""
    if k < 1:
        raise ValueError("cutoff must be at least 1")
    project = list(project)
    s = Solver(cnf.num_vars, cnf.clauses)
    count = 0
    while count < k:
        res = s.solve()
        if not res:
            return count
        count += 1
        if not project:
            return count  # single (empty) projection
        s.add_clause([(-v if res.assignment[v] else v) for v in project])
    return count


class ExternalSolverError(Exception):
    """The solver process could not be spawned."""


@dataclass
class ExternalResult:
    kind: str  # "sat" | "unsat" | "unknown"
    assignment: dict[int, bool] | None = None
    raw: str = ""


def run_external(cnf_path: str, solver_command: str) -> ExternalResult:
    """Run a DIMACS solver with SAT-competition output conventions.

    Accepts "s SATISFIABLE"/"s UNSATISFIABLE" lines with "v ..." value
    lines, or exit codes 10/20.  Nonconforming output comes back as
    ``unknown`` with the raw output attached.
    """
    argv = shlex.split(solver_command) + [str(cnf_path)]
    try:
        proc = subprocess.run(argv, capture_output=True, text=True)
    except OSError as exc:
        raise ExternalSolverError(str(exc)) from exc
    out = proc.stdout + ("\n" + proc.stderr if proc.stderr else "")
    status = None
    values: dict[int, bool] = {}
    for line in proc.stdout.splitlines():
        line = line.strip()
        if line.startswith("s "):
            word = line[2:].strip().upper()
            if word == "SATISFIABLE":
                status = "sat"
            elif word == "UNSATISFIABLE":
                status = "unsat"
        elif line.startswith("v "):
            for tok in line[2:].split():
                l = int(tok)
                if l:
                    values[abs(l)] = l > 0
    if status is None:
        if proc.returncode == 10:
            status = "sat"
        elif proc.returncode == 20:
            status = "unsat"
    if status == "sat":
        return ExternalResult("sat", values, out)
    if status == "unsat":
        return ExternalResult("unsat", None, out)
    return ExternalResult("unknown", None, out)
