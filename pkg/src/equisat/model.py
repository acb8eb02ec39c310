"""Constraint data model over order-encoded integers and bit vectors.

An n-bit ``UnaryInt`` X encodes an integer in [0, n]: bit i means X >= i,
so any consistent assignment of its bits is a monotonically non-increasing
sequence.  Accessors extend the vector with the implicit sentinel bits
X(0) = 1 and X(i) = 0 for i > n, which keeps window and adder arithmetic
uniform at the edges.

Constraints are tagged records over integer operands (``UnaryInt``,
``ShiftedView`` or constant vectors) and literal-vector operands.  A
``Model`` bundles declarations, the constraint store and the global
equality store.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .literals import TRUE, FALSE, lit, neg, is_const, norm_eq

LIVE = "live"
UNSAT = "unsat"

LOW_LEVEL_TAGS = frozenset(
    ["unary", "diff", "leq", "block", "uadder", "pairwise_and", "pairwise_xor",
     "lexleq", "biteq", "bdd"]
)
HIGH_LEVEL_TAGS = frozenset(["alldiff", "sumbits", "lexleqlist"])
# permutation is redundant: never propagated, encoded specially


class UnaryInt:
    """Order-encoded integer: a named vector of literal codes."""

    __slots__ = ("name", "bits")

    def __init__(self, name: str, bits):
        self.name = name
        self.bits = tuple(bits)

    @property
    def width(self) -> int:
        return len(self.bits)

    def bit(self, i: int) -> int:
        if i <= 0:
            return TRUE
        if i > len(self.bits):
            return FALSE
        return self.bits[i - 1]

    def with_bits(self, bits) -> "UnaryInt":
        return UnaryInt(self.name, bits)

    def __repr__(self):
        return "UnaryInt(%s/%d)" % (self.name, self.width)


class ShiftedView:
    """U shifted by a constant: value(view) = value(base) + offset.

    For positive offsets the view is the base vector prefixed by `offset`
    ones; negative offsets drop the leading bits and are only meaningful
    when the model guarantees base > |offset|.
    """

    __slots__ = ("base", "offset")

    def __init__(self, base, offset: int):
        if isinstance(base, ShiftedView):
            base, offset = base.base, base.offset + offset
        self.base = base
        self.offset = offset

    @property
    def name(self):
        return self.base.name

    @property
    def width(self) -> int:
        return self.base.width + self.offset

    def bit(self, i: int) -> int:
        return self.base.bit(i - self.offset)

    def __repr__(self):
        return "%r%+d" % (self.base, self.offset)


def shift_view(u, c: int):
    """View of u with value u + c (c may be negative)."""
    if c == 0:
        return u
    return ShiftedView(u, c)


def const_unary(value: int) -> UnaryInt:
    """Constant integer as an all-ones-prefix unary vector."""
    if value < 0:
        raise ValueError("unary constants are non-negative")
    return UnaryInt(str(value), (TRUE,) * value)


def int_bits(u) -> list[int]:
    """Underlying variable ids of an integer operand (constants excluded)."""
    base = u.base if isinstance(u, ShiftedView) else u
    return [l >> 1 for l in base.bits if not is_const(l)]


@dataclass(frozen=True)
class Constraint:
    """Tagged constraint record.

    Operand layout per tag:
      unary:        ints=(X,), params=(a, b)
      diff:         ints=(X, Y)
      alldiff:      ints=(X1, ..., Xm)
      leq:          ints=(A, B)
      block:        ints=(A, B), vecs=(cells,)
      uadder:       ints=(A, B, C)         # A + B = C
      sumbits:      ints=(U,), vecs=(bits,)
      pairwise_and: vecs=(a, b, c)         # c_i <-> a_i & b_i
      pairwise_xor: vecs=(a, b, c)         # c_i <-> a_i ^ b_i
      lexleq:       vecs=(v1, v2)
      lexleqlist:   vecs=(v1, ..., vk)
      biteq:        vecs=((l1, l2),)
      permutation:  ints=(U1, ..., Um)     # redundant strengthening
      bdd:          params=(root,)         # manager-scoped restricted residue
    """

    tag: str
    ints: tuple = ()
    vecs: tuple = ()
    params: tuple = ()

    def support_vars(self) -> list[int]:
        seen = []
        mark = set()
        for u in self.ints:
            for v in int_bits(u):
                if v not in mark:
                    mark.add(v)
                    seen.append(v)
        for vec in self.vecs:
            for l in vec:
                v = l >> 1
                if v and v not in mark:
                    mark.add(v)
                    seen.append(v)
        return seen

    def map_lits(self, fn) -> "Constraint":
        """Structure-preserving literal substitution."""

        def map_int(u):
            if isinstance(u, ShiftedView):
                return ShiftedView(map_int(u.base), u.offset)
            return u.with_bits(tuple(fn(l) for l in u.bits))

        return Constraint(
            self.tag,
            tuple(map_int(u) for u in self.ints),
            tuple(tuple(fn(l) for l in vec) for vec in self.vecs),
            self.params,
        )

    def pretty(self) -> str:
        parts = [u.name if hasattr(u, "name") else str(u) for u in self.ints]
        parts += ["<%d bits>" % len(v) for v in self.vecs]
        return "%s(%s)" % (self.tag, ", ".join(parts))


class Model:
    """Declarations, constraint store and global equality store."""

    def __init__(self):
        self.nvars = 0
        self.bit_owner: list[tuple[str, int]] = [("", 0)]  # var id -> (name, index)
        self.ints: dict[str, UnaryInt] = {}
        self.vecs: dict[str, tuple[int, ...]] = {}
        self.decl_order: list[tuple[str, str]] = []  # ("int"|"bits", name)
        self.aux_names: set[str] = set()
        self.store: list[Constraint] = []
        self.equations: list[tuple[int, int]] = []
        self.status = LIVE

    # -- declarations ---------------------------------------------------

    def _fresh_bits(self, name: str, n: int) -> tuple[int, ...]:
        bits = []
        for i in range(1, n + 1):
            self.nvars += 1
            self.bit_owner.append((name, i))
            bits.append(lit(self.nvars))
        return tuple(bits)

    def new_int(self, name: str, n: int, aux: bool = False) -> UnaryInt:
        self._check_fresh(name)
        u = UnaryInt(name, self._fresh_bits(name, n))
        self.ints[name] = u
        self.decl_order.append(("int", name))
        if aux:
            self.aux_names.add(name)
        return u

    def new_vec(self, name: str, n: int, aux: bool = False) -> tuple[int, ...]:
        self._check_fresh(name)
        vec = self._fresh_bits(name, n)
        self.vecs[name] = vec
        self.decl_order.append(("bits", name))
        if aux:
            self.aux_names.add(name)
        return vec

    def _check_fresh(self, name: str):
        if name in self.ints or name in self.vecs:
            raise ValueError("duplicate declaration: %s" % name)

    # -- equality store --------------------------------------------------

    def add_eq(self, a: int, b: int) -> None:
        self.equations.append(norm_eq(a, b))

    def fix_value(self, u: UnaryInt, value: int) -> None:
        """Fold X = value into the equality store."""
        if not 0 <= value <= u.width:
            raise ValueError("%s = %d out of range" % (u.name, value))
        self.restrict_range(u, value, value)

    def restrict_range(self, u: UnaryInt, a: int, b: int) -> None:
        """Fold a <= X <= b into the equality store."""
        if not 0 <= a <= b <= u.width:
            raise ValueError("range [%d, %d] invalid for %s" % (a, b, u.name))
        if a >= 1:
            self.add_eq(u.bit(a), TRUE)
        if b < u.width:
            self.add_eq(u.bit(b + 1), FALSE)

    # -- store -------------------------------------------------------------

    def add(self, c: Constraint) -> None:
        self.store.append(c)

    def declared_bits(self):
        """(name, index, literal) for every declared bit, declaration order."""
        for kind, name in self.decl_order:
            if kind == "int":
                for i, l in enumerate(self.ints[name].bits, start=1):
                    yield name, i, l
            else:
                for i, l in enumerate(self.vecs[name], start=1):
                    yield name, i, l

    def struct_eq(self, other: "Model") -> bool:
        """Structural equality modulo equation normalization."""
        return (
            self.decl_order == other.decl_order
            and {n: u.bits for n, u in self.ints.items()}
            == {n: u.bits for n, u in other.ints.items()}
            and self.vecs == other.vecs
            and [_c_key(c) for c in self.store] == [_c_key(c) for c in other.store]
            and set(self.equations) == set(other.equations)
            and self.status == other.status
        )


def _int_key(u):
    if isinstance(u, ShiftedView):
        return ("view", _int_key(u.base), u.offset)
    return ("int", u.name, u.bits)


def _c_key(c: Constraint):
    return (c.tag, tuple(_int_key(u) for u in c.ints), c.vecs, c.params)


def domain_of(x, theta=None) -> list[int]:
    """Values of x consistent with the substituted bits under monotonicity.

    theta: anything with a canon(lit)/``__call__`` mapping, or None.
    An empty result signals an unsatisfiable variable.
    """
    n = x.width
    if theta is None:
        bits = [x.bit(i) for i in range(1, n + 1)]
    else:
        canon = theta.canon if hasattr(theta, "canon") else theta
        bits = [canon(x.bit(i)) for i in range(1, n + 1)]
    dom = []
    for v in range(n + 1):
        demand: dict[int, int] = {}
        ok = True
        for i, l in enumerate(bits, start=1):
            want = 1 if i <= v else 0
            if is_const(l):
                if (l == TRUE) != bool(want):
                    ok = False
                    break
            else:
                var, sgn = l >> 1, l & 1
                val = want ^ sgn
                prev = demand.get(var)
                if prev is None:
                    demand[var] = val
                elif prev != val:
                    ok = False
                    break
        if ok:
            dom.append(v)
    return dom


def value_of(x, assignment) -> int:
    """Integer value of x under a total assignment var -> bool."""
    v = 0
    for i in range(1, x.width + 1):
        l = x.bit(i)
        if is_const(l):
            b = l == TRUE
        else:
            b = bool(assignment[l >> 1]) ^ bool(l & 1)
        if b:
            v = i
        else:
            break
    return v
