"""Tunneling a BWT, the generalized LF-mapping and tunneled inversion.

Tunneling a block crosses out, in every column but the last, all rows below
the top in L, and in every column but the first the same rows in F.  Rows
crossed out in both are dropped.  What remains is the shortened L together
with the bitvectors cntL and cntF (1 = counted), each with an extra trailing
1 so that ``cnt[j + 1]`` is always defined.
"""

from dataclasses import dataclass

import numpy as np

from .bitvector import BitVector
from .blocks import compute_runs, critical_pairs
from .bwt import SENTINEL, validate_bwt
from .errors import CorruptInputError, CorruptStructureError, InvalidBlockSetError, InvariantViolation

AUX_START, AUX_END, AUX_PLAIN = 1, 2, 3
AUX_ALPHABET = 4


@dataclass(frozen=True, eq=False)
class TunneledBwt:
    L: np.ndarray
    cntL: BitVector
    cntF: BitVector
    orig_len: int

    @property
    def n(self):
        return int(self.L.size)

    def validate(self):
        """Raise CorruptStructureError unless the structural invariants hold."""
        n = self.n
        if len(self.cntL) != n + 1 or len(self.cntF) != n + 1:
            raise CorruptStructureError("bitvectors must have length n + 1")
        if not (self.cntL[n] and self.cntF[n]):
            raise CorruptStructureError("trailing bitvector entries must be 1")
        if self.orig_len < n:
            raise CorruptStructureError(f"original length {self.orig_len} below BWT length {n}")
        cl, cf = self.cntL.bits[:n], self.cntF.bits[:n]
        if np.any((cl == 0) & (cf == 0)):
            raise CorruptStructureError("position crossed out in both L and F")
        heads = compute_runs(self.L).starts
        if np.any(cl[heads] == 0) or np.any(cf[heads] == 0):
            raise CorruptStructureError("run head crossed out")
        return self

    def __eq__(self, other):
        if not isinstance(other, TunneledBwt):
            return NotImplemented
        return (np.array_equal(self.L, other.L) and self.cntL == other.cntL
                and self.cntF == other.cntF and self.orig_len == other.orig_len)


def untunneled(L) -> TunneledBwt:
    L = validate_bwt(L)
    return TunneledBwt(L, BitVector.ones(L.size + 1), BitVector.ones(L.size + 1), int(L.size))


def tunnel(L, blocks, validate=True) -> TunneledBwt:
    """Tunnel every block of ``blocks`` at once.

    With ``validate`` the blocks are checked to be real blocks of ``L`` and
    free of critical collisions (InvalidBlockSetError otherwise).
    """
    L = validate_bwt(L)
    blocks = list(blocks)
    n = L.size
    if validate and blocks:
        _check_blocks(L, blocks)
    cl = np.ones(n, dtype=np.uint8)
    cf = np.ones(n, dtype=np.uint8)
    for blk in blocks:
        h = blk.height
        tops = blk.tops.tolist()
        for top in tops[:-1]:
            cl[top + 1:top + h] = 0
        for top in tops[1:]:
            cf[top + 1:top + h] = 0
    keep = (cl | cf).astype(bool)
    return TunneledBwt(
        L[keep],
        BitVector(np.append(cl[keep], 1)),
        BitVector(np.append(cf[keep], 1)),
        int(n),
    )


def _check_blocks(L, blocks):
    runs = compute_runs(L)
    n = L.size
    for blk in blocks:
        tops = np.asarray(blk.tops)
        if tops.size != blk.width or tops.min() < 0 or tops.max() + blk.height > n:
            raise InvalidBlockSetError(f"{blk} does not fit in a BWT of length {n}")
        if np.any(runs.run_of(tops) != runs.run_of(tops + blk.height - 1)):
            raise InvalidBlockSetError(f"{blk} has a column holding more than one symbol")
    bad = critical_pairs(blocks)
    if bad:
        a, b = bad[0]
        what = f"{blocks[a]} collides with itself" if a == b else f"{blocks[a]} and {blocks[b]} collide critically"
        raise InvalidBlockSetError(what)


def removed_positions(blocks) -> set:
    """Positions dropped by tunneling ``blocks`` (as a set, overlaps counted once)."""
    in_l, in_f = set(), set()
    for blk in blocks:
        h = blk.height
        tops = blk.tops.tolist()
        for top in tops[:-1]:
            in_l.update(range(top + 1, top + h))
        for top in tops[1:]:
            in_f.update(range(top + 1, top + h))
    return in_l & in_f


def generalized_lf(t: TunneledBwt) -> np.ndarray:
    """``LF*[i] = select_cntF(k)`` with k the counted L entries up to i in F order.

    k counts counted positions holding a smaller symbol, plus counted
    positions up to and including i holding the same symbol.  select(0) is
    -1, so an uncounted position with no counted predecessor maps to -1.
    """
    L = np.asarray(t.L)
    n = L.size
    cl = t.cntL.bits[:n].astype(np.int64)
    order = np.argsort(L, kind="stable")
    k = np.empty(n, dtype=np.int64)
    k[order] = np.cumsum(cl[order])
    ones = np.flatnonzero(t.cntF.bits[:n])
    if n and k.max() > ones.size:
        raise CorruptStructureError(
            f"cntL counts {int(k.max())} entries but cntF only {ones.size}")
    return np.concatenate(([-1], ones))[k]


def invert_tunneled(t: TunneledBwt) -> np.ndarray:
    """Rebuild the text from a tunneled BWT.

    Walks the generalized LF from row 0.  Entering a tunnel (a crossed-out
    row in L, or the row just above one) pushes the offset to the block's
    top row; reaching a row whose successor is crossed out in F pops it.
    """
    L = np.asarray(t.L)
    n = L.size
    total = int(t.orig_len)
    if total < n or n == 0:
        raise CorruptInputError(f"original length {total} inconsistent with BWT length {n}")
    lf = generalized_lf(t).tolist()
    cl = t.cntL.bits.tolist()
    cf = t.cntF.bits.tolist()
    counted = np.where(t.cntL.bits[:n] == 1, np.arange(n), -1)
    upper = np.maximum.accumulate(counted).tolist()
    syms = L.tolist()
    stack = []
    out = []
    j = 0
    for _ in range(total - 1):
        if not cf[j + 1]:
            if not stack:
                raise CorruptInputError("tunnel end without a matching start")
            j += stack.pop()
            if j >= n:
                raise CorruptInputError("tunnel exit outside the BWT")
        c = syms[j]
        if c == SENTINEL:
            raise CorruptInputError("sentinel reached before the end of the text")
        out.append(c)
        if not cl[j] or not cl[j + 1]:
            k = upper[j]
            if k < 0:
                raise CorruptInputError(f"no counted row above {j}")
            stack.append(j - k)
        j = lf[j]
        if j < 0:
            raise CorruptInputError("generalized LF left the BWT")
    if stack:
        raise CorruptInputError(f"{len(stack)} tunnels left open")
    if syms[j] != SENTINEL:
        raise CorruptInputError("walk did not end at the sentinel row")
    out.reverse()
    out.append(SENTINEL)
    return np.array(out, dtype=L.dtype)


@dataclass(frozen=True)
class AuxVector:
    symbols: np.ndarray

    @property
    def t(self):
        return int(np.count_nonzero(self.symbols == AUX_START))

    def __len__(self):
        return int(self.symbols.size)


def encode_aux(t: TunneledBwt) -> AuxVector:
    """One symbol ``2 cntL + cntF`` per run of height > 1, taken from the run body."""
    n = t.n
    runs = compute_runs(t.L)
    merged = 2 * t.cntL.bits[:n].astype(np.int64) + t.cntF.bits[:n]
    heads = runs.starts
    if np.any(merged[heads] != AUX_PLAIN):
        raise InvariantViolation("run head crossed out")
    tall = runs.heights > 1
    body_start = heads[tall] + 1
    symbols = merged[body_start]
    # every position, head or body, must agree with what the aux symbol implies
    expect = np.full(n, AUX_PLAIN, dtype=np.int64)
    expect_runs = np.full(len(runs), AUX_PLAIN, dtype=np.int64)
    expect_runs[tall] = symbols
    expect[:] = np.repeat(expect_runs, runs.heights)
    expect[heads] = AUX_PLAIN
    if not np.array_equal(expect, merged):
        bad = int(np.flatnonzero(expect != merged)[0])
        raise InvariantViolation(f"run body around position {bad} is not uniformly marked")
    return AuxVector(symbols.astype(np.int64))


def decode_aux(L, aux, orig_len) -> TunneledBwt:
    L = validate_bwt(L)
    symbols = np.asarray(aux.symbols if isinstance(aux, AuxVector) else aux, dtype=np.int64)
    runs = compute_runs(L)
    tall = runs.heights > 1
    if symbols.size != int(tall.sum()):
        raise CorruptInputError(f"aux has {symbols.size} symbols for {int(tall.sum())} runs")
    if symbols.size and (symbols.min() < AUX_START or symbols.max() > AUX_PLAIN):
        raise CorruptInputError("aux symbols must lie in {1, 2, 3}")
    if np.count_nonzero(symbols == AUX_START) != np.count_nonzero(symbols == AUX_END):
        raise CorruptInputError("aux has unbalanced tunnel starts and ends")
    per_run = np.full(len(runs), AUX_PLAIN, dtype=np.int64)
    per_run[tall] = symbols
    merged = np.repeat(per_run, runs.heights)
    merged[runs.starts] = AUX_PLAIN
    cl = np.append(merged >> 1, 1).astype(np.uint8)
    cf = np.append(merged & 1, 1).astype(np.uint8)
    if orig_len < L.size:
        raise CorruptInputError(f"original length {orig_len} below BWT length {L.size}")
    return TunneledBwt(L, BitVector(cl), BitVector(cf), int(orig_len))


__all__ = [
    "TunneledBwt", "AuxVector", "tunnel", "untunneled", "removed_positions",
    "generalized_lf", "invert_tunneled", "encode_aux", "decode_aux",
    "AUX_START", "AUX_END", "AUX_PLAIN", "AUX_ALPHABET",
]
