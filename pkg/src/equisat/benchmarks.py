"""Model generators for the four benchmark families, with checkers.

Quasigroup completion, nonograms, balanced incomplete block designs and
the template-map formulation of DNA word design.  Generators emit plain
``Model`` values built from the same primitives the text format uses, so
every generated model round-trips through the parser.  The checkers
validate decoded solutions directly against the combinatorial definition
of each problem, independent of the constraint encoding.
"""

from __future__ import annotations

from .literals import FALSE, TRUE, neg
from .model import Constraint, Model, const_unary, shift_view


def _mark_infeasible(m: Model, u) -> None:
    # contradictory pair the propagation fixpoint turns into CompileTimeUnsat
    m.add_eq(u.bit(1), TRUE)
    m.add_eq(u.bit(1), FALSE)


# ---------------------------------------------------------------------------
# QCP


def gen_qcp(grid) -> Model:
    """Quasigroup completion: grid cells are None (blank) or values 1..n."""
    n = len(grid)
    m = Model()
    cells = []
    for r, row in enumerate(grid, start=1):
        if len(row) != n:
            raise ValueError("grid must be square")
        cells.append([])
        for c, val in enumerate(row, start=1):
            u = m.new_int("x%d_%d" % (r, c), n)
            m.restrict_range(u, 1, n)
            if val is not None:
                if not 1 <= val <= n:
                    raise ValueError("cell value %r out of range 1..%d" % (val, n))
                m.fix_value(u, val)
            cells[-1].append(u)
    for r in range(n):
        m.add(Constraint("alldiff", tuple(cells[r])))
    for c in range(n):
        m.add(Constraint("alldiff", tuple(cells[r][c] for r in range(n))))
    return m


def parse_qcp_text(text: str):
    """First line n, then n rows of '.' or values."""
    lines = [l for l in (s.strip() for s in text.splitlines()) if l and l[0] != "#"]
    n = int(lines[0])
    grid = []
    for row in lines[1 : n + 1]:
        tokens = row.split()
        if len(tokens) != n:
            raise ValueError("expected %d cells, got %d" % (n, len(tokens)))
        grid.append([None if t == "." else int(t) for t in tokens])
    if len(grid) != n:
        raise ValueError("expected %d rows" % n)
    return grid


def verify_qcp(grid, values) -> bool:
    """values: dict cell-name -> value."""
    n = len(grid)
    board = [[values["x%d_%d" % (r + 1, c + 1)] for c in range(n)] for r in range(n)]
    for r in range(n):
        for c in range(n):
            given = grid[r][c]
            if given is not None and board[r][c] != given:
                return False
            if not 1 <= board[r][c] <= n:
                return False
    for r in range(n):
        if len(set(board[r])) != n:
            return False
    for c in range(n):
        if len({board[r][c] for r in range(n)}) != n:
            return False
    return True


def random_qcp(n: int, holes: int, seed: int = 0):
    """Satisfiable instance: a shuffled cyclic Latin square with holes."""
    import random

    rng = random.Random(seed)
    rows = list(range(n))
    cols = list(range(n))
    syms = list(range(1, n + 1))
    rng.shuffle(rows)
    rng.shuffle(cols)
    rng.shuffle(syms)
    grid = [[syms[(rows[r] + cols[c]) % n] for c in range(n)] for r in range(n)]
    spots = [(r, c) for r in range(n) for c in range(n)]
    rng.shuffle(spots)
    for r, c in spots[:holes]:
        grid[r][c] = None
    return grid


# ---------------------------------------------------------------------------
# Nonograms


def gen_nonogram(row_clues, col_clues) -> Model:
    """Board of cells with block-placement constraints per line.

    Each block gets an order-encoded start variable; ordering constraints
    keep gaps of at least one white cell, window constraints force the
    black run of each block and the white stretches before, between and
    after blocks.
    """
    nr, nc = len(row_clues), len(col_clues)
    m = Model()
    rows = [m.new_vec("r%d" % (i + 1), nc) for i in range(nr)]
    cols = [m.new_vec("c%d" % (j + 1), nr) for j in range(nc)]
    bar_rows = [m.new_vec("br%d" % (i + 1), nc) for i in range(nr)]
    bar_cols = [m.new_vec("bc%d" % (j + 1), nr) for j in range(nc)]
    for i in range(nr):
        for j in range(nc):
            m.add_eq(cols[j][i], rows[i][j])
            m.add_eq(bar_rows[i][j], neg(rows[i][j]))
            m.add_eq(bar_cols[j][i], neg(rows[i][j]))
    for i, clue in enumerate(row_clues):
        _line_constraints(m, "ur%d" % (i + 1), clue, nc, rows[i], bar_rows[i])
    for j, clue in enumerate(col_clues):
        _line_constraints(m, "uc%d" % (j + 1), clue, nr, cols[j], bar_cols[j])
    return m


def _line_constraints(m: Model, prefix: str, clue, n: int, line, bar) -> None:
    clue = list(clue)
    if any(b < 1 for b in clue):
        raise ValueError("block lengths must be positive")
    if not clue:
        m.add(Constraint("block", (const_unary(0), const_unary(n)), (bar,)))
        return
    k = len(clue)
    starts = []
    for j, b in enumerate(clue):
        u = m.new_int("%s_%d" % (prefix, j + 1), n)
        lb = 1 + sum(q + 1 for q in clue[:j])
        ub = n - (b - 1) - sum(q + 1 for q in clue[j + 1 :])
        if lb > ub or ub < 1 or lb > n:
            _mark_infeasible(m, u)
        else:
            m.restrict_range(u, lb, ub)
        starts.append(u)
    for j in range(k - 1):
        m.add(
            Constraint(
                "leq", (shift_view(starts[j], clue[j] + 1), starts[j + 1])
            )
        )
    for j, b in enumerate(clue):
        m.add(
            Constraint(
                "block",
                (shift_view(starts[j], -1), shift_view(starts[j], b - 1)),
                (line,),
            )
        )
    m.add(
        Constraint("block", (const_unary(0), shift_view(starts[0], -1)), (bar,))
    )
    for j in range(k - 1):
        m.add(
            Constraint(
                "block",
                (shift_view(starts[j], clue[j] - 1), shift_view(starts[j + 1], -1)),
                (bar,),
            )
        )
    m.add(
        Constraint(
            "block", (shift_view(starts[-1], clue[-1] - 1), const_unary(n)), (bar,)
        )
    )


def parse_nonogram_text(text: str):
    """'rows' section then 'cols' section, one space-separated clue per line.

    A line with '-' (or an empty clue line) means no blocks.
    """
    rows, cols, current = [], [], None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "rows":
            current = rows
        elif line == "cols":
            current = cols
        else:
            if current is None:
                raise ValueError("clue line before rows/cols header")
            current.append([] if line == "-" else [int(t) for t in line.split()])
    if not rows or not cols:
        raise ValueError("need both rows and cols sections")
    return rows, cols


def clues_of_line(cells) -> list[int]:
    out = []
    run = 0
    for b in cells:
        if b:
            run += 1
        elif run:
            out.append(run)
            run = 0
    if run:
        out.append(run)
    return out


def board_clues(board):
    rows = [clues_of_line(row) for row in board]
    cols = [clues_of_line(col) for col in zip(*board)]
    return rows, cols


def count_nonogram_boards(row_clues, col_clues, limit: int = 2**30) -> int:
    """Brute-force solution count by enumerating all boards (tests only)."""
    from itertools import product

    nr, nc = len(row_clues), len(col_clues)
    want_rows = [list(c) for c in row_clues]
    want_cols = [list(c) for c in col_clues]
    count = 0
    rows_cands = []
    for clue in want_rows:
        cands = [
            row
            for row in product((0, 1), repeat=nc)
            if clues_of_line(row) == clue
        ]
        rows_cands.append(cands)
    for rows in product(*rows_cands):
        if [clues_of_line(col) for col in zip(*rows)] == want_cols:
            count += 1
            if count >= limit:
                return count
    return count


def verify_nonogram(row_clues, col_clues, board) -> bool:
    rows, cols = board_clues(board)
    return rows == [list(c) for c in row_clues] and cols == [
        list(c) for c in col_clues
    ]


# ---------------------------------------------------------------------------
# BIBD


def gen_bibd(v: int, b: int, r: int, k: int, lam: int, symmetry: bool = True) -> Model:
    """v x b incidence matrix with fixed row/column sums and row overlaps."""
    m = Model()
    rows = [m.new_vec("R%d" % (i + 1), b) for i in range(v)]
    for i in range(v):
        target = m.new_int("sr%d" % (i + 1), r)
        m.fix_value(target, r)
        m.add(Constraint("sumbits", (target,), (rows[i],)))
    for j in range(b):
        col = m.new_vec("C%d" % (j + 1), v)
        for i in range(v):
            m.add_eq(col[i], rows[i][j])
        target = m.new_int("sc%d" % (j + 1), k)
        m.fix_value(target, k)
        m.add(Constraint("sumbits", (target,), (col,)))
    for i in range(v):
        for j in range(i + 1, v):
            prod = m.new_vec("P%d_%d" % (i + 1, j + 1), b)
            m.add(Constraint("pairwise_and", vecs=(rows[i], rows[j], prod)))
            target = m.new_int("sp%d_%d" % (i + 1, j + 1), lam)
            m.fix_value(target, lam)
            m.add(Constraint("sumbits", (target,), (prod,)))
    if symmetry:
        _bibd_symmetry(m, rows, v, b, r, k, lam)
    return m


def _bibd_symmetry(m: Model, rows, v, b, r, k, lam) -> None:
    """Fix the first two rows and the left column."""
    for j in range(b):
        m.add_eq(rows[0][j], TRUE if j < r else FALSE)
    if v >= 2:
        for j in range(b):
            one = j < lam or (r <= j < 2 * r - lam)
            m.add_eq(rows[1][j], TRUE if one else FALSE)
    for i in range(v):
        m.add_eq(rows[i][0], TRUE if i < k else FALSE)


def verify_bibd(v, b, r, k, lam, matrix) -> bool:
    if len(matrix) != v or any(len(row) != b for row in matrix):
        return False
    if any(sum(row) != r for row in matrix):
        return False
    if any(sum(matrix[i][j] for i in range(v)) != k for j in range(b)):
        return False
    for i in range(v):
        for j in range(i + 1, v):
            if sum(a and c for a, c in zip(matrix[i], matrix[j])) != lam:
                return False
    return True


# ---------------------------------------------------------------------------
# DNA word design (template-map strategy)

WORD_LEN = 8
MIN_DIST = 4
GC_COUNT = 4


def gen_dna(n_templates: int, n_maps: int) -> Model:
    """Template and map vectors whose cross product forms the word set.

    Conditions modelled: every template has exactly four one-bits and
    templates are pairwise at Hamming distance >= 4; maps are pairwise at
    distance >= 4 and every map is at distance >= 4 from the complement
    of every reversed map, its own included.  The last condition alone
    makes reversed words and complemented words differ enough: a position
    either separates the templates or, when the templates agree there,
    the maps must separate, so the distance is at least the larger of the
    two.  Against the plain (uncomplemented) reversal it reads as
    d(rev m, m') <= 4.  Symmetry is broken by ordering templates and maps
    lexicographically.
    """
    if n_templates < 1 or n_maps < 1:
        raise ValueError("need at least one template and one map")
    m = Model()
    ts = [m.new_vec("t%d" % (i + 1), WORD_LEN) for i in range(n_templates)]
    ms = [m.new_vec("m%d" % (j + 1), WORD_LEN) for j in range(n_maps)]
    rms = []
    for j, mp in enumerate(ms):
        rm = m.new_vec("rm%d" % (j + 1), WORD_LEN)
        for p in range(WORD_LEN):
            m.add_eq(rm[p], mp[WORD_LEN - 1 - p])
        rms.append(rm)
    for i, t in enumerate(ts):
        target = m.new_int("gc%d" % (i + 1), GC_COUNT)
        m.fix_value(target, GC_COUNT)
        m.add(Constraint("sumbits", (target,), (t,)))
    for i in range(n_templates):
        for j in range(i + 1, n_templates):
            _distance_bounds(m, "dt%d_%d" % (i + 1, j + 1), ts[i], ts[j],
                             MIN_DIST, WORD_LEN)
    for i in range(n_maps):
        for j in range(i + 1, n_maps):
            _distance_bounds(m, "dm%d_%d" % (i + 1, j + 1), ms[i], ms[j],
                             MIN_DIST, WORD_LEN)
    # d(rev m_i, complement m_j) >= 4, i.e. d(rev m_i, m_j) <= 4; symmetric
    # in i and j, so i <= j covers all ordered pairs
    for i in range(n_maps):
        for j in range(i, n_maps):
            _distance_bounds(m, "dr%d_%d" % (i + 1, j + 1), rms[i], ms[j],
                             0, WORD_LEN - MIN_DIST)
    if n_templates >= 2:
        m.add(Constraint("lexleqlist", vecs=tuple(ts)))
    if n_maps >= 2:
        m.add(Constraint("lexleqlist", vecs=tuple(ms)))
    return m


def _distance_bounds(m: Model, name: str, v1, v2, lo: int, hi: int) -> None:
    x = m.new_vec("x" + name, WORD_LEN)
    m.add(Constraint("pairwise_xor", vecs=(v1, v2, x)))
    target = m.new_int(name, WORD_LEN)
    m.restrict_range(target, lo, hi)
    m.add(Constraint("sumbits", (target,), (x,)))


_LETTERS = {(False, False): "A", (False, True): "T", (True, False): "C", (True, True): "G"}
_COMPLEMENT = {"A": "T", "T": "A", "C": "G", "G": "C"}


def dna_words(templates, maps) -> list[str]:
    """Expand template/map bit vectors into the word set."""
    words = []
    for t in templates:
        for mp in maps:
            words.append(
                "".join(_LETTERS[(bool(a), bool(b))] for a, b in zip(t, mp))
            )
    return words


def verify_dna_words(words) -> bool:
    """The three word-set properties, checked from scratch."""

    def dist(a, b):
        return sum(1 for x, y in zip(a, b) if x != y)

    for w in words:
        if len(w) != WORD_LEN:
            return False
        if sum(1 for ch in w if ch in "CG") != GC_COUNT:
            return False
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            if dist(words[i], words[j]) < MIN_DIST:
                return False
    for x in words:
        xr = x[::-1]
        for y in words:
            yc = "".join(_COMPLEMENT[ch] for ch in y)
            if dist(xr, yc) < MIN_DIST:
                return False
    return len(set(words)) == len(words)
