"""Suffix arrays, the Burrows-Wheeler transform and LF-mapping.

Texts live in a 257-symbol alphabet: byte ``b`` is stored as ``b + 1`` and
symbol 0 is the sentinel, which must occur exactly once, at the end.  All
arrays are numpy arrays and all positions are 0-based.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CorruptInputError, InvalidInputError

SENTINEL = 0
SIGMA = 257
SYMBOL_DTYPE = np.uint16


def make_text(data: bytes) -> np.ndarray:
    """Shift ``data`` into the internal alphabet and append the sentinel."""
    raw = np.frombuffer(bytes(data), dtype=np.uint8)
    text = np.empty(raw.size + 1, dtype=SYMBOL_DTYPE)
    text[:-1] = raw
    text[:-1] += 1
    text[-1] = SENTINEL
    return text


def text_to_bytes(text) -> bytes:
    text = validate_text(text)
    return (text[:-1] - 1).astype(np.uint8).tobytes()


def from_string(s: str) -> np.ndarray:
    """Test helper: ``'$'`` is the sentinel, other characters their code point + 1."""
    return np.array([SENTINEL if c == "$" else ord(c) + 1 for c in s], dtype=SYMBOL_DTYPE)


def to_string(seq) -> str:
    return "".join("$" if s == SENTINEL else chr(s - 1) for s in np.asarray(seq).tolist())


def validate_text(text) -> np.ndarray:
    text = np.asarray(text)
    if text.ndim != 1 or text.size == 0:
        raise InvalidInputError("text must be a nonempty 1-d symbol sequence")
    if text.size and (text.min() < 0 or text.max() >= SIGMA):
        raise InvalidInputError("text symbols must lie in [0, 256]")
    if text[-1] != SENTINEL or np.count_nonzero(text == SENTINEL) != 1:
        raise InvalidInputError("text must end with a unique sentinel")
    return text.astype(SYMBOL_DTYPE, copy=False)


def build_suffix_array(text) -> np.ndarray:
    """Suffix array by prefix doubling; O(n log n) vectorized sorting rounds.

    Each round ranks suffixes by their first 2k symbols using the ranks of
    the first k.  Rounds stop as soon as all ranks are distinct, so the last
    round's order is the exact lexicographic order.
    """
    text = validate_text(text)
    n = text.size
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    rank = text.astype(np.int64)
    second = np.zeros(n, dtype=np.int64)
    k = 1
    while True:
        second[:] = 0
        second[: n - k] = rank[k:] + 1
        key = rank * (int(rank.max()) + 2) + second
        sa = np.argsort(key, kind="stable")
        skey = key[sa]
        sorted_rank = np.zeros(n, dtype=np.int64)
        np.cumsum(skey[1:] != skey[:-1], out=sorted_rank[1:])
        rank = np.empty(n, dtype=np.int64)
        rank[sa] = sorted_rank
        if sorted_rank[-1] == n - 1:
            return sa
        k *= 2


def bwt_from_sa(text, sa) -> np.ndarray:
    text = validate_text(text)
    sa = np.asarray(sa, dtype=np.int64)
    if sa.shape != text.shape:
        raise InvalidInputError(f"suffix array length {sa.size} != text length {text.size}")
    L = text[sa - 1]
    L[sa == 0] = SENTINEL
    return L


def bwt(data: bytes) -> np.ndarray:
    text = make_text(data)
    return bwt_from_sa(text, build_suffix_array(text))


def validate_bwt(L) -> np.ndarray:
    L = np.asarray(L)
    if L.ndim != 1 or L.size == 0:
        raise InvalidInputError("BWT must be a nonempty 1-d symbol sequence")
    if L.min() < 0 or L.max() >= SIGMA:
        raise InvalidInputError("BWT symbols must lie in [0, 256]")
    if np.count_nonzero(L == SENTINEL) != 1:
        raise InvalidInputError("BWT must contain exactly one sentinel")
    return L.astype(SYMBOL_DTYPE, copy=False)


def lf_mapping(L) -> np.ndarray:
    """``LF[i] = C[L[i]] + rank(L[i], i)``, computed with one stable sort."""
    L = validate_bwt(L)
    order = np.argsort(L, kind="stable")
    lf = np.empty(L.size, dtype=np.int64)
    lf[order] = np.arange(L.size, dtype=np.int64)
    return lf


def invert_bwt(L) -> np.ndarray:
    """Rebuild the text by walking LF backwards from the sentinel row."""
    L = validate_bwt(L)
    n = L.size
    lf = lf_mapping(L).tolist()
    syms = L.tolist()
    out = [0] * n
    j = 0
    for i in range(n - 2, -1, -1):
        out[i] = syms[j]
        j = lf[j]
        if j == 0:
            raise CorruptInputError("LF walk closed a cycle early; not a valid BWT")
    return np.array(out, dtype=SYMBOL_DTYPE)


@dataclass(frozen=True)
class CharCounts:
    counts: np.ndarray
    C: np.ndarray

    @property
    def total(self):
        return int(self.counts.sum())


def char_counts(seq, sigma=SIGMA) -> CharCounts:
    seq = np.asarray(seq, dtype=np.int64)
    counts = np.bincount(seq, minlength=sigma).astype(np.int64)
    C = np.zeros_like(counts)
    np.cumsum(counts[:-1], out=C[1:])
    return CharCounts(counts, C)


def entropy(counts) -> float:
    """Zero-order entropy in bits per symbol."""
    if isinstance(counts, CharCounts):
        counts = counts.counts
    counts = np.asarray(counts, dtype=np.float64)
    counts = counts[counts > 0]
    n = counts.sum()
    if n <= 0:
        raise InvalidInputError("entropy of an empty sequence is undefined")
    h = float(np.log2(n) - (counts * np.log2(counts)).sum() / n)
    return max(h, 0.0)
