"""Line-based model text format.

One item per line, '#' starts a comment:

    int <name> <n>             declare n-bit order-encoded integer
    bits <name> <n>            declare free Boolean vector
    range <X> <a> <b>          bound an int (folded into the equality store)
    eq <X> <v>                 fix an int (folded)
    set <bitref> 0|1           fix a bit (folded)
    eqbits <bitref> <±bitref>  equate two bits, optional '-' negates (folded)
    diff <X> <Y>
    alldiff <X> <Y> ...
    leq <Xref> <Yref>
    block <Xref> <Yref> <Vec>
    uadder <X> <Y> <Z>
    sumbits <Vec> <U>
    pairwiseand <A> <B> <C>
    pairwisexor <A> <B> <C>
    lexleq <V1> <V2>
    lexleqlist <V1> <V2> ...

``<Xref>`` is an int name, optionally suffixed +c/-c for a shifted view, or
a bare integer constant.  ``<bitref>`` is ``<name>[i]``, 1-based, valid for
both int and vector bits.
"""

from __future__ import annotations

import re

from .literals import TRUE, FALSE, neg
from .model import Constraint, Model, ShiftedView, const_unary, shift_view

_BITREF = re.compile(r"^(-?)([A-Za-z_][\w.]*)\[(\d+)\]$")
_INTREF = re.compile(r"^([A-Za-z_][\w.]*)([+-]\d+)?$")


class ModelParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__("line %d: %s" % (lineno, msg))
        self.lineno = lineno


def parse_model(text: str) -> Model:
    m = Model()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            _parse_line(m, tokens)
        except ModelParseError:
            raise
        except (ValueError, KeyError) as exc:
            raise ModelParseError(lineno, str(exc)) from None
    return m


def _get_int(m: Model, name: str):
    u = m.ints.get(name)
    if u is None:
        raise ValueError("undeclared int: %s" % name)
    return u


def _get_vec(m: Model, name: str):
    v = m.vecs.get(name)
    if v is None:
        raise ValueError("undeclared bit vector: %s" % name)
    return v


def _int_ref(m: Model, token: str):
    if token.lstrip("-").isdigit():
        value = int(token)
        if value < 0:
            raise ValueError("negative integer constant: %s" % token)
        return const_unary(value)
    match = _INTREF.match(token)
    if not match:
        raise ValueError("bad int reference: %s" % token)
    u = _get_int(m, match.group(1))
    if match.group(2):
        return shift_view(u, int(match.group(2)))
    return u


def _bit_ref(m: Model, token: str) -> int:
    match = _BITREF.match(token)
    if not match:
        raise ValueError("bad bit reference: %s" % token)
    negate, name, idx = match.group(1) == "-", match.group(2), int(match.group(3))
    if name in m.ints:
        bits = m.ints[name].bits
    elif name in m.vecs:
        bits = m.vecs[name]
    else:
        raise ValueError("undeclared name: %s" % name)
    if not 1 <= idx <= len(bits):
        raise ValueError("%s[%d]: index out of range (1..%d)" % (name, idx, len(bits)))
    l = bits[idx - 1]
    return neg(l) if negate else l


def _arity(tokens, n: int):
    if len(tokens) != n + 1:
        raise ValueError(
            "%s expects %d arguments, got %d" % (tokens[0], n, len(tokens) - 1)
        )


def _parse_line(m: Model, tokens: list[str]) -> None:
    op = tokens[0]
    if op == "int":
        _arity(tokens, 2)
        m.new_int(tokens[1], _width(tokens[2]))
    elif op == "bits":
        _arity(tokens, 2)
        m.new_vec(tokens[1], _width(tokens[2]))
    elif op == "range":
        _arity(tokens, 3)
        m.restrict_range(_get_int(m, tokens[1]), int(tokens[2]), int(tokens[3]))
    elif op == "eq":
        _arity(tokens, 2)
        m.fix_value(_get_int(m, tokens[1]), int(tokens[2]))
    elif op == "set":
        _arity(tokens, 2)
        if tokens[2] not in ("0", "1"):
            raise ValueError("set expects 0 or 1")
        m.add_eq(_bit_ref(m, tokens[1]), TRUE if tokens[2] == "1" else FALSE)
    elif op == "eqbits":
        _arity(tokens, 2)
        m.add_eq(_bit_ref(m, tokens[1]), _bit_ref(m, tokens[2]))
    elif op == "diff":
        _arity(tokens, 2)
        m.add(Constraint("diff", (_get_int(m, tokens[1]), _get_int(m, tokens[2]))))
    elif op == "alldiff":
        if len(tokens) < 3:
            raise ValueError("alldiff expects at least two ints")
        m.add(Constraint("alldiff", tuple(_get_int(m, t) for t in tokens[1:])))
    elif op == "leq":
        _arity(tokens, 2)
        m.add(Constraint("leq", (_int_ref(m, tokens[1]), _int_ref(m, tokens[2]))))
    elif op == "block":
        _arity(tokens, 3)
        m.add(
            Constraint(
                "block",
                (_int_ref(m, tokens[1]), _int_ref(m, tokens[2])),
                (_get_vec(m, tokens[3]),),
            )
        )
    elif op == "uadder":
        _arity(tokens, 3)
        m.add(Constraint("uadder", tuple(_get_int(m, t) for t in tokens[1:4])))
    elif op == "sumbits":
        _arity(tokens, 2)
        m.add(
            Constraint("sumbits", (_get_int(m, tokens[2]),), (_get_vec(m, tokens[1]),))
        )
    elif op in ("pairwiseand", "pairwisexor"):
        _arity(tokens, 3)
        vecs = tuple(_get_vec(m, t) for t in tokens[1:4])
        if len({len(v) for v in vecs}) != 1:
            raise ValueError("%s: vector widths differ" % op)
        m.add(Constraint("pairwise_and" if op == "pairwiseand" else "pairwise_xor",
                         vecs=vecs))
    elif op == "lexleq":
        _arity(tokens, 2)
        v1, v2 = _get_vec(m, tokens[1]), _get_vec(m, tokens[2])
        if len(v1) != len(v2):
            raise ValueError("lexleq: vector widths differ")
        m.add(Constraint("lexleq", vecs=(v1, v2)))
    elif op == "lexleqlist":
        if len(tokens) < 3:
            raise ValueError("lexleqlist expects at least two vectors")
        vecs = tuple(_get_vec(m, t) for t in tokens[1:])
        if len({len(v) for v in vecs}) != 1:
            raise ValueError("lexleqlist: vector widths differ")
        m.add(Constraint("lexleqlist", vecs=vecs))
    else:
        raise ValueError("unknown directive: %s" % op)


def _width(token: str) -> int:
    n = int(token)
    if n < 1:
        raise ValueError("width must be positive")
    return n


def print_model(m: Model) -> str:
    """Canonical text of a model; parse(print(m)) is structurally equal."""
    owner = m.bit_owner
    lines = []
    for kind, name in m.decl_order:
        n = m.ints[name].width if kind == "int" else len(m.vecs[name])
        lines.append("%s %s %d" % (kind, name, n))
    for a, b in sorted(set(m.equations)):
        lines.append(_eq_line(owner, a, b))
    for c in m.store:
        lines.append(_constraint_line(m, c))
    return "\n".join(lines) + "\n"


def _bitref_str(owner, l: int, lead_sign=True) -> str:
    name, idx = owner[l >> 1]
    s = "%s[%d]" % (name, idx)
    return ("-" + s) if (l & 1 and lead_sign) else s


def _eq_line(owner, a: int, b: int) -> str:
    # norm_eq guarantees: if one side is a constant it is `a`
    if a == TRUE or a == FALSE:
        want = "1" if a == TRUE else "0"
        if b & 1:
            want = "0" if want == "1" else "1"
        return "set %s %s" % (_bitref_str(owner, b & ~1), want)
    return "eqbits %s %s" % (_bitref_str(owner, a), _bitref_str(owner, b))


def _int_ref_str(u) -> str:
    if isinstance(u, ShiftedView):
        return "%s%+d" % (u.base.name, u.offset)
    if all(l == TRUE for l in u.bits):
        # constant vectors print as their value
        return u.name if not u.name.isdigit() else str(u.width)
    return u.name


def _vec_name(m: Model, vec) -> str:
    for name, v in m.vecs.items():
        if v == vec:
            return name
    raise ValueError("constraint references an undeclared bit vector")


def _constraint_line(m: Model, c: Constraint) -> str:
    tag = c.tag
    if tag == "diff":
        return "diff %s %s" % (c.ints[0].name, c.ints[1].name)
    if tag == "alldiff":
        return "alldiff " + " ".join(u.name for u in c.ints)
    if tag == "leq":
        return "leq %s %s" % (_int_ref_str(c.ints[0]), _int_ref_str(c.ints[1]))
    if tag == "block":
        return "block %s %s %s" % (
            _int_ref_str(c.ints[0]),
            _int_ref_str(c.ints[1]),
            _vec_name(m, c.vecs[0]),
        )
    if tag == "uadder":
        return "uadder %s %s %s" % tuple(u.name for u in c.ints)
    if tag == "sumbits":
        return "sumbits %s %s" % (_vec_name(m, c.vecs[0]), c.ints[0].name)
    if tag == "pairwise_and":
        return "pairwiseand " + " ".join(_vec_name(m, v) for v in c.vecs)
    if tag == "pairwise_xor":
        return "pairwisexor " + " ".join(_vec_name(m, v) for v in c.vecs)
    if tag == "lexleq":
        return "lexleq %s %s" % (_vec_name(m, c.vecs[0]), _vec_name(m, c.vecs[1]))
    if tag == "lexleqlist":
        return "lexleqlist " + " ".join(_vec_name(m, v) for v in c.vecs)
    raise ValueError("cannot print constraint tag %r" % tag)
