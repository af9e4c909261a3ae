"""Block scoring, benefit/tax estimators and the greedy block choice.

Gross benefit and tax are estimates, in bits, of what tunneling saves on the
run-length encoded BWT and what it costs to encode the aux vector.  The
greedy choice picks blocks by score with a max-heap and keeps the prefix of
picks with the best estimated net benefit.
"""

import heapq
import math
from dataclasses import dataclass, field, replace

from .backend.rle import digit_counts, rle_length
from .errors import EstimatorDomainError

TAX_RATIO_FLOOR = 3.0


@dataclass(frozen=True)
class EstimatorState:
    n_rle: int
    rc: int
    tc: float = 0.0
    t: int = 0
    r_gt1: int = 0

    @classmethod
    def from_runs(cls, runs):
        n_rle = rle_length(runs.heights)
        return cls(n_rle=n_rle, rc=n_rle - len(runs), r_gt1=runs.count_taller_than(1))


@dataclass
class ChoiceResult:
    BS: list
    t_best: int
    b_best: float
    state: EstimatorState
    # per pick t = 1..|BS|: (tc, gross, tax) after that pick; None if not evaluable
    history: list = field(default_factory=list)

    @property
    def chosen(self):
        return self.BS[: self.t_best]

    @property
    def best_state(self):
        if self.t_best == 0:
            return replace(self.state, tc=0.0, t=0)
        return replace(self.state, tc=self.history[self.t_best - 1][0], t=self.t_best)


def initial_score(block, runs) -> float:
    """Run-length digits saved if ``block`` alone is tunneled.

    Each interior column sits in a run of height h that shrinks to
    h - height + 1 (the top row stays).
    """
    if block.d < 2:
        return 0.0
    h = runs.heights[block.runs[1:-1]]
    return float((digit_counts(h) - digit_counts(h - block.height + 1)).sum())


def gross_benefit(state: EstimatorState) -> float:
    n, rc, tc = state.n_rle, state.rc, state.tc
    if tc == 0:
        return 0.0
    if not 0 <= tc < rc or tc >= n:
        raise EstimatorDomainError(f"gross benefit needs 0 <= tc < rc (tc={tc}, rc={rc})")
    return (n * math.log2(n / (n - tc))
            - rc * math.log2(rc / (rc - tc))
            + tc * (1 + math.log2((n - tc) / (rc - tc))))


def tax(state: EstimatorState) -> float:
    t = state.t
    if t <= 0:
        return 0.0
    ratio = max(TAX_RATIO_FLOOR, (state.r_gt1 - 2 * t) / (2 * t))
    h = math.log2(ratio)
    return 2 * t * (1 + math.log2(h * h - 1)) + 2 * t * h * math.log2(1 + 2 / (h - 1))


def net_benefit(state: EstimatorState) -> float:
    return gross_benefit(state) - tax(state)


def greedy_choice(blocks, scores, graph, state: EstimatorState) -> ChoiceResult:
    """Pick blocks in descending score order, updating colliding scores as we go.

    After picking B, a taller (inner) neighbour I loses ``w_I / w_B * score(B)``
    and a wider (outer) neighbour O keeps the fraction of its width that B
    does not cover.  Blocks in critical conflict with B are dropped, and B
    leaves the graph.  Ties go to the lower index.
    """
    score = [float(s) for s in scores]
    alive = [True] * len(blocks)
    heap = [(-s, b) for b, s in enumerate(score)]
    heapq.heapify(heap)
    BS, history = [], []
    t_best, b_best, tc = 0, 0.0, 0.0
    evaluable = True

    while heap:
        neg, b = heapq.heappop(heap)
        if not alive[b] or -neg != score[b]:
            continue
        s = score[b]
        wb = blocks[b].width
        for i in graph.inner[b]:
            score[i] = max(0.0, score[i] - blocks[i].width / wb * s)
            heapq.heappush(heap, (-score[i], i))
        for o in graph.outer[b]:
            wo = blocks[o].width
            score[o] *= max(0, wo - wb) / wo
            heapq.heappush(heap, (-score[o], o))
        for c in graph.conflict[b]:
            alive[c] = False  # critically colliding with a chosen block
        graph.remove(b)
        alive[b] = False
        BS.append(blocks[b])
        tc += s
        t = len(BS)
        if evaluable and tc >= state.rc:
            evaluable = False
        if not evaluable:
            history.append(None)
            continue
        cur = replace(state, tc=tc, t=t)
        g, x = gross_benefit(cur), tax(cur)
        history.append((tc, g, x))
        if g - x > b_best:
            t_best, b_best = t, g - x
    return ChoiceResult(BS, t_best, b_best, state, history)


def choose_blocks(blocks, runs, graph):
    """Score ``blocks`` and run the greedy choice; convenience wrapper."""
    state = EstimatorState.from_runs(runs)
    scores = [initial_score(b, runs) for b in blocks]
    return greedy_choice(blocks, scores, graph, state)
