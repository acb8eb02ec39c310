"""Signed Boolean literals, equality stores, and a parity union-find.

Literals are plain ints.  Variable ids are positive; variable 0 is reserved
for the constant.  A literal packs (variable, sign) as ``2*var + sign``, so
negation is ``lit ^ 1``:

    TRUE  = 0      (constant, positive)
    FALSE = 1      (constant, negated)
    var v = 2*v    (positive occurrence)
    ~v    = 2*v+1  (negated occurrence)

Equality between literals is tracked incrementally by ``LitUnionFind``,
which stores a sign on every union-find edge so a class can contain both
polarities.  Each class exposes one canonical literal: the constant if the
class is grounded, otherwise the lowest-numbered variable (signed as
needed).  Freezing the structure yields a ``Unifier``.
"""

from __future__ import annotations

TRUE = 0
FALSE = 1


def lit(var: int, negated: bool = False) -> int:
    return var * 2 + (1 if negated else 0)


def neg(l: int) -> int:
    return l ^ 1


def lit_var(l: int) -> int:
    return l >> 1


def lit_sign(l: int) -> int:
    return l & 1


def is_const(l: int) -> bool:
    return l < 2


def const_lit(value: bool) -> int:
    return TRUE if value else FALSE


def lit_str(l: int, name=None) -> str:
    if l == TRUE:
        return "1"
    if l == FALSE:
        return "0"
    base = name(lit_var(l)) if name else "b%d" % lit_var(l)
    return "-" + base if l & 1 else base


def norm_eq(a: int, b: int) -> tuple[int, int]:
    """Normal form of the equation a = b.

    Unordered and invariant under negating both sides: the smaller literal
    comes first and is made positive.
    """
    if a > b:
        a, b = b, a
    if a & 1:
        a, b = a ^ 1, b ^ 1
    return (a, b)


class EquiFormula:
    """A conjunction of equalities between literals and constants."""

    __slots__ = ("equations",)

    def __init__(self, equations=()):
        self.equations = frozenset(norm_eq(a, b) for (a, b) in equations)

    def union(self, other) -> "EquiFormula":
        extra = other.equations if isinstance(other, EquiFormula) else other
        return EquiFormula(self.equations | {norm_eq(a, b) for (a, b) in extra})

    def __iter__(self):
        return iter(sorted(self.equations))

    def __len__(self):
        return len(self.equations)

    def __eq__(self, other):
        return isinstance(other, EquiFormula) and self.equations == other.equations

    def __hash__(self):
        return hash(self.equations)

    def __repr__(self):
        eqs = ", ".join("%s=%s" % (lit_str(a), lit_str(b)) for a, b in self)
        return "{" + eqs + "}"


class Contradiction:
    """Compile-time inconsistency marker; a value, not an exception."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Contradiction"


CONTRADICTION = Contradiction()

# merge() outcomes
CHANGED = "changed"
UNCHANGED = "unchanged"


class LitUnionFind:
    """Union-find over variables with edge signs (parity union-find).

    Element 0 is the constant anchor: a class containing it is grounded and
    its members are fixed to 1 or 0 according to their parity.  The
    canonical literal of a class is the constant when grounded, else the
    lowest variable id in the class (0 < 1 < b1 < b2 < ...).
    """

    def __init__(self, nvars: int = 0):
        self.parent = list(range(nvars + 1))
        self.par = [0] * (nvars + 1)      # sign relative to parent
        self.size = [1] * (nvars + 1)
        self.members = [[i] for i in range(nvars + 1)]
        self.min_elem = list(range(nvars + 1))
        self.merges = 0                   # counts class-joining merges

    def ensure(self, var: int) -> None:
        while len(self.parent) <= var:
            i = len(self.parent)
            self.parent.append(i)
            self.par.append(0)
            self.size.append(1)
            self.members.append([i])
            self.min_elem.append(i)

    @property
    def nvars(self) -> int:
        return len(self.parent) - 1

    def find(self, v: int) -> tuple[int, int]:
        """Root and parity of v relative to it, with path compression."""
        parent, par = self.parent, self.par
        p = 0
        r = v
        while parent[r] != r:
            p ^= par[r]
            r = parent[r]
        # second pass: compress
        q = p
        while parent[v] != r:
            nxt = parent[v]
            np = q ^ par[v]
            parent[v] = r
            par[v] = q
            v = nxt
            q = np
        return r, p

    def canon(self, l: int) -> int:
        """Canonical literal of l under the accumulated equalities."""
        v = l >> 1
        if v == 0 or v >= len(self.parent):
            return l
        r, p = self.find(v)
        m = self.min_elem[r]
        if m == v and p == 0 and self.parent[m] == m and m == r:
            # fast path: v is its own representative
            return l
        _, pm = self.find(m)
        return m * 2 + (p ^ pm ^ (l & 1))

    def merge(self, a: int, b: int):
        """Record the equality a = b.

        Returns CHANGED with the list of variables whose canonical literal
        changed, UNCHANGED, or CONTRADICTION.
        """
        va, vb = a >> 1, b >> 1
        self.ensure(max(va, vb))
        ra, pa = self.find(va)
        rb, pb = self.find(vb)
        want = (a & 1) ^ (b & 1)          # required parity between va and vb
        if ra == rb:
            if pa ^ pb != want:
                return CONTRADICTION, ()
            return UNCHANGED, ()
        # parity of rb relative to ra if rb hangs under ra
        link = pa ^ pb ^ want
        ma, mb = self.min_elem[ra], self.min_elem[rb]
        losers = self.members[rb] if ma < mb else self.members[ra]
        changed = list(losers)
        # union by size; link parity is symmetric in ra/rb
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.par[rb] = link
        self.size[ra] += self.size[rb]
        self.members[ra].extend(self.members[rb])
        self.members[rb] = []
        self.min_elem[ra] = min(ma, mb)
        self.merges += 1
        return CHANGED, changed

    def assert_lit(self, l: int):
        """Record that literal l is true (l = 1)."""
        return self.merge(l, TRUE)

    def is_grounded(self, var: int) -> bool:
        r, _ = self.find(var)
        return self.min_elem[r] == 0

    def snapshot(self) -> "Unifier":
        bindings = {}
        for v in range(1, len(self.parent)):
            c = self.canon(v * 2)
            if c != v * 2:
                bindings[v] = c
        return Unifier(bindings)


class Unifier:
    """Frozen most-general unifier: variable -> canonical literal."""

    __slots__ = ("bindings",)

    def __init__(self, bindings: dict[int, int] | None = None):
        self.bindings = dict(bindings or {})

    def __call__(self, l: int) -> int:
        t = self.bindings.get(l >> 1)
        if t is None:
            return l
        return t ^ (l & 1)

    def domain(self):
        return set(self.bindings)

    def is_identity(self) -> bool:
        return not self.bindings

    def __eq__(self, other):
        return isinstance(other, Unifier) and self.bindings == other.bindings

    def __repr__(self):
        items = ", ".join(
            "b%d->%s" % (v, lit_str(t)) for v, t in sorted(self.bindings.items())
        )
        return "{" + items + "}"


IDENTITY = Unifier()


def build_unifier(e) -> Unifier | Contradiction:
    """Canonical most-general unifier of an equi-formula, or CONTRADICTION."""
    uf = LitUnionFind()
    for a, b in e:
        res, _ = uf.merge(a, b)
        if res is CONTRADICTION:
            return CONTRADICTION
    return uf.snapshot()


def apply_unifier(theta: Unifier, l: int) -> int:
    return theta(l)


def apply_unifier_formula(theta: Unifier, e: EquiFormula) -> EquiFormula:
    return EquiFormula((theta(a), theta(b)) for a, b in e)
