"""Runs, width-maximal run-blocks and block collisions.

A block ``d-[i,j]`` is a rectangle in the BWT: its column ``x`` is the
interval ``[LF^x[i], LF^x[j]]`` and every column holds a single symbol.  The
block is stored with its column tops materialized, which is all that is
needed to walk it, score it, intersect it with other blocks and tunnel it.
"""

import gc
from bisect import bisect_right
from collections import defaultdict
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError, InvariantViolation


class Run(NamedTuple):
    start: int
    height: int
    symbol: int


class Runs:
    """Maximal runs of a symbol sequence, stored column-wise."""

    def __init__(self, starts, heights, symbols):
        self.starts = np.asarray(starts, dtype=np.int64)
        self.heights = np.asarray(heights, dtype=np.int64)
        self.symbols = np.asarray(symbols, dtype=np.int64)

    @property
    def n(self):
        return int(self.heights.sum())

    def __len__(self):
        return self.starts.size

    def __getitem__(self, r):
        return Run(int(self.starts[r]), int(self.heights[r]), int(self.symbols[r]))

    def __iter__(self):
        for s, h, c in zip(self.starts.tolist(), self.heights.tolist(), self.symbols.tolist()):
            yield Run(s, h, c)

    def run_of(self, pos):
        """Run id containing each position in ``pos`` (scalar or array)."""
        return np.searchsorted(self.starts, pos, side="right") - 1

    def count_taller_than(self, h=1):
        return int(np.count_nonzero(self.heights > h))


def compute_runs(L) -> Runs:
    L = np.asarray(L)
    if L.size == 0:
        return Runs([], [], [])
    heads = np.flatnonzero(np.concatenate(([True], L[1:] != L[:-1])))
    heights = np.diff(np.append(heads, L.size))
    return Runs(heads, heights, L[heads])


@dataclass(frozen=True, eq=False)
class Block:
    """A ``d-[i,j]`` block; ``tops[x] = LF^x[i]`` and ``runs[x]`` the run holding column x."""

    d: int
    i: int
    j: int
    tops: np.ndarray = field(repr=False)
    runs: np.ndarray = field(default=None, repr=False)

    @property
    def height(self):
        return self.j - self.i + 1

    @property
    def width(self):
        return self.d + 1

    @property
    def key(self):
        return (self.d, self.i, self.j)

    @property
    def end_interval(self):
        top = int(self.tops[-1])
        return top, top + self.height - 1

    @property
    def columns(self):
        """``(run id, top position)`` per column, left to right."""
        runs = self.runs.tolist() if self.runs is not None else [None] * self.width
        return list(zip(runs, self.tops.tolist()))

    def column(self, x):
        top = int(self.tops[x])
        return top, top + self.height - 1

    def positions(self):
        """Every BWT position covered by the block (test/diagnostic helper)."""
        h = self.height
        return {top + k for top in self.tops.tolist() for k in range(h)}

    def __eq__(self, other):
        if not isinstance(other, Block):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Block({self.d}-[{self.i},{self.j}])"


def make_block(d, i, j, lf, L=None, runs=None) -> Block:
    """Build a block from its interval, walking LF to fill in the columns.

    With ``L`` given, the block condition (one symbol per column) is checked.
    """
    if d < 0 or i > j:
        raise InvalidInputError(f"malformed block {d}-[{i},{j}]")
    tops = np.empty(d + 1, dtype=np.int64)
    pos = i
    for x in range(d + 1):
        tops[x] = pos
        pos = int(lf[pos])
    h = j - i + 1
    if L is not None:
        L = np.asarray(L)
        for top in tops.tolist():
            col = L[top:top + h]
            if col.size != h or np.any(col != col[0]):
                raise InvalidInputError(f"{d}-[{i},{j}] is not a block")
    run_ids = runs.run_of(tops) if runs is not None else None
    return Block(d, i, j, tops, run_ids)


def is_run_block(block: Block, L) -> bool:
    """The four run-boundary conditions, with virtual borders outside [0, n)."""
    L = np.asarray(L)
    n = L.size

    def differs(a, b):
        return not (0 <= a < n and 0 <= b < n) or L[a] != L[b]

    lo, hi = block.end_interval
    return (differs(block.i, block.i - 1) and differs(block.j, block.j + 1)
            and differs(lo, lo - 1) and differs(hi, hi + 1))


def compute_run_blocks(lf, runs: Runs) -> list:
    """All width-maximal run-blocks with height and width above one.

    Runs serve as starting blocks and are extended by following LF.  A run
    whose LF image fits inside a single run that run is pushed on a stack;
    when the top cannot be extended it is popped, and the block below it
    inherits its block pointer (skipping the part already walked).  Popping a
    block of the same height as the one below it means the lower block
    absorbs it, so the popped one is not width-maximal.
    """
    lf = np.asarray(lf, dtype=np.int64)
    R = len(runs)
    starts = runs.starts.tolist()
    heights = runs.heights.tolist()
    bounds = starts + [runs.n]
    first = lf[runs.starts].tolist()
    be = list(first)
    rbe = list(first)

    for r in range(R):
        if heights[r] < 2:
            continue
        stack = [r]
        while stack:
            b = stack[-1]
            pointer = be[b]
            target = bisect_right(bounds, pointer) - 1
            if pointer + heights[b] <= bounds[target + 1]:
                stack.append(target)
                if len(stack) > R:
                    raise InvariantViolation("run-block stack exceeded run count; LF is not a BWT permutation")
                continue
            stack.pop()
            if stack:
                top = stack[-1]
                be[top] = pointer + be[top] - starts[b]
                if heights[b] == heights[top]:
                    rbe[top] = rbe[b]
                    rbe[b] = first[b]

    lf_list = lf.tolist()
    total = bounds[-1]
    blocks = []
    for r in range(R):
        if rbe[r] == first[r]:
            continue
        start, h = starts[r], heights[r]
        end = rbe[r]
        tops = []
        pos = start
        while pos != end:
            tops.append(pos)
            pos = lf_list[pos]
            if len(tops) > total:
                raise InvariantViolation("block end pointer unreachable from its start")
        tops = np.array(tops, dtype=np.int64)
        blocks.append(Block(tops.size - 1, start, start + h - 1, tops, runs.run_of(tops)))
    return blocks


def is_self_colliding(block: Block) -> bool:
    return bool(_shared_entries([block]).get((0, 0)))


# -- collisions --------------------------------------------------------------

class CollisionKind(Enum):
    NONE = "none"
    COMPENSABLE = "compensable"
    CRITICAL = "critical"


class Collision(NamedTuple):
    kind: CollisionKind
    inner: Block = None
    outer: Block = None


NO_COLLISION = Collision(CollisionKind.NONE)
CRITICAL = Collision(CollisionKind.CRITICAL)


def _overlapping_columns(blocks):
    """Every pair of intersecting columns, as parallel arrays grouped by block pair.

    Returns ``(a, xa, b, xb, lo, hi)`` with ``a <= b`` block indices and
    ``[lo, hi]`` the shared interval, sorted by ``(a, b)``.  Columns are
    sorted by top; each column meets exactly the later columns whose top it
    reaches, so the pairs come out of one ``searchsorted``.
    """
    if not blocks:
        empty = np.zeros(0, dtype=np.int64)
        return (empty,) * 6
    tops = np.concatenate([blk.tops for blk in blocks]).astype(np.int64)
    widths = np.array([blk.width for blk in blocks], dtype=np.int64)
    idx = np.repeat(np.arange(len(blocks)), widths)
    x = np.arange(tops.size) - np.repeat(np.cumsum(widths) - widths, widths)
    bottoms = tops + np.repeat([blk.height - 1 for blk in blocks], widths)

    order = np.lexsort((-bottoms, tops))
    tops, bottoms, idx, x = tops[order], bottoms[order], idx[order], x[order]
    first = np.arange(1, tops.size + 1)
    count = np.searchsorted(tops, bottoms, side="right") - first
    u = np.repeat(np.arange(tops.size), count)
    v = np.arange(u.size) - np.repeat(np.cumsum(count) - count, count) + first[u]
    lo, hi = tops[v], np.minimum(bottoms[u], bottoms[v])
    swap = idx[u] > idx[v]
    u, v = np.where(swap, v, u), np.where(swap, u, v)

    a, b = idx[u], idx[v]
    group = np.argsort(a * len(blocks) + b, kind="stable")
    return a[group], x[u][group], b[group], x[v][group], lo[group], hi[group]


def _shared_entries(blocks):
    """``{(a, b): [(xa, xb, lo, hi), ...]}`` for every pair of blocks with intersecting columns."""
    a, xa, b, xb, lo, hi = _overlapping_columns(blocks)
    pairs = {}
    if not a.size:
        return pairs
    cut = np.flatnonzero((a[1:] != a[:-1]) | (b[1:] != b[:-1])) + 1
    starts = [0] + cut.tolist()
    stops = cut.tolist() + [a.size]
    entries = list(zip(xa.tolist(), xb.tolist(), lo.tolist(), hi.tolist()))
    for s, e, pa, pb in zip(starts, stops, a[starts].tolist(), b[starts].tolist()):
        pairs[(pa, pb)] = entries[s:e]
    return pairs


def _compensable(inner: Block, outer: Block, entries) -> bool:
    """Check the three compensability conditions; ``entries`` are ``(x_in, x_out, lo, hi)``."""
    h_in, h_out = inner.height, outer.height
    last = outer.d
    tops = inner.tops.tolist()
    covered = []
    for x_in, x_out, lo, hi in entries:
        if x_out == 0 or x_out == last:
            return False
        if h_in - (hi - lo + 1) not in (0, h_in - h_out):
            return False
        top = tops[x_in]
        covered.append((lo - top, hi - top))
    covered.sort()
    reach = -1
    for lo, hi in covered:
        if lo > reach + 1:
            return True
        reach = max(reach, hi)
    return reach < h_in - 1


def _classify(a: Block, b: Block, entries) -> Collision:
    if not entries:
        return NO_COLLISION
    flipped = [(xb, xa, lo, hi) for xa, xb, lo, hi in entries]
    if a.height >= b.height and _compensable(a, b, entries):
        return Collision(CollisionKind.COMPENSABLE, a, b)
    if b.height >= a.height and _compensable(b, a, flipped):
        return Collision(CollisionKind.COMPENSABLE, b, a)
    return CRITICAL


def classify_collision(b1: Block, b2: Block) -> Collision:
    """Classify the collision between two blocks of the same BWT.

    Passing the same block twice asks whether it collides with itself;
    self-collisions are always critical.
    """
    if b1 == b2:
        return CRITICAL if is_self_colliding(b1) else NO_COLLISION
    entries = _shared_entries([b1, b2])
    if entries.get((0, 0)) or entries.get((1, 1)):
        return CRITICAL
    return _classify(b1, b2, entries.get((0, 1), []))


def critical_pairs(blocks) -> list:
    """Index pairs ``(a, b)`` of blocks whose collision is critical; ``a == b`` for self-collisions."""
    blocks = list(blocks)
    bad = []
    for (a, b), entries in sorted(_shared_entries(blocks).items()):
        if a == b or _classify(blocks[a], blocks[b], entries).kind is CollisionKind.CRITICAL:
            bad.append((a, b))
    return bad


@dataclass
class CollisionGraph:
    """Blocks joined by their direct (not overlaid) compensable collisions.

    ``edges`` holds ``(inner, outer)`` index pairs and ``conflicts`` the
    pairs whose collision is critical; at most one block of a conflicting
    pair may be tunneled.  ``collisions`` counts all colliding pairs,
    overlaid ones included.
    """

    blocks: list
    edges: list
    collisions: int = 0
    conflicts: list = field(default_factory=list)

    def __post_init__(self):
        self.inner = [set() for _ in self.blocks]
        self.outer = [set() for _ in self.blocks]
        self.conflict = [set() for _ in self.blocks]
        for i, o in self.edges:
            self.outer[i].add(o)
            self.inner[o].add(i)
        for a, b in self.conflicts:
            self.conflict[a].add(b)
            self.conflict[b].add(a)

    def remove(self, b):
        """Drop node ``b``; its neighbours lose their edge to it."""
        for i in self.inner[b]:
            self.outer[i].discard(b)
        for o in self.outer[b]:
            self.inner[o].discard(b)
        for c in self.conflict[b]:
            self.conflict[c].discard(b)
        self.inner[b] = set()
        self.outer[b] = set()
        self.conflict[b] = set()


@contextmanager
def _gc_paused():
    # the graph build allocates millions of small tuples and no cycles;
    # letting the collector rescan them makes the build visibly superlinear
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


def build_collision_graph(blocks) -> CollisionGraph:
    """Collision graph over width-maximal run-blocks.

    Self-collisions cannot occur between run-blocks of height above one and
    raise InvariantViolation.  Critical collisions are rare but possible: a
    wide block can pass through every lane of a taller one (in the BWT of
    ``aababbaababb``, 5-[0,1] crosses both halves of 1-[5,8]).  Such pairs
    become conflicts instead of edges.
    """
    with _gc_paused():
        return _build_collision_graph(list(blocks))


def _build_collision_graph(blocks) -> CollisionGraph:
    pairs = _shared_entries(blocks)
    near = defaultdict(lambda: defaultdict(list))  # (block, x) -> other block -> [other x]
    for (a, b), entries in pairs.items():
        if a == b:
            raise InvariantViolation(f"{blocks[a]} collides with itself")
        for xa, xb, _, _ in entries:
            near[(a, xa)][b].append(xb)
            near[(b, xb)][a].append(xa)
    tops = [blk.tops.tolist() for blk in blocks]

    def covers(c, lo, hi, anchor):
        h = blocks[c].height
        return any(top <= lo and hi < top + h for top in (tops[c][ox] for ox in near[anchor].get(c, ())))

    edges, conflicts = [], []
    for (a, b), entries in pairs.items():  # sorted by (a, b)
        coll = _classify(blocks[a], blocks[b], entries)
        if coll.kind is not CollisionKind.COMPENSABLE:
            conflicts.append((a, b))
            continue
        xa0 = entries[0][0]
        candidates = [c for c in near[(a, xa0)] if c != a and c != b]
        overlaid = any(
            all(covers(c, lo, hi, (a, xa)) for xa, _, lo, hi in entries)
            for c in sorted(candidates)
        )
        if not overlaid:
            inner = a if coll.inner is blocks[a] else b
            edges.append((inner, b if inner == a else a))
    return CollisionGraph(blocks, edges, len(pairs), conflicts)
