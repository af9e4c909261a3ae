"""Run-length encoding of a BWT, used for estimator accounting.

A run of symbol c with height h becomes ``c`` followed by the binary digits
of h with the leading 1 cut, most significant first.  Digits are the two
symbols just past the text alphabet.
"""

import numpy as np

from ..bwt import SIGMA
from ..errors import CorruptInputError, InvalidInputError


def digit_counts(heights):
    """floor(log2 h) for each height, exact for heights below 2**53."""
    h = np.asarray(heights, dtype=np.float64)
    if h.size and h.min() < 1:
        raise InvalidInputError("run heights must be positive")
    return (np.frexp(h)[1] - 1).astype(np.int64)


def rle_length(heights) -> int:
    """Length of the run-length encoding: one symbol per run plus its digits."""
    heights = np.asarray(heights)
    return int(heights.size + digit_counts(heights).sum())


def rl_encode(seq, alphabet=SIGMA) -> np.ndarray:
    seq = np.asarray(seq, dtype=np.int64)
    if seq.size == 0:
        raise InvalidInputError("cannot run-length encode an empty sequence")
    if seq.min() < 0 or seq.max() >= alphabet:
        raise InvalidInputError("symbol outside the alphabet")
    d0 = alphabet
    heads = np.flatnonzero(np.concatenate(([True], seq[1:] != seq[:-1])))
    heights = np.diff(np.append(heads, seq.size))
    out = []
    for c, h in zip(seq[heads].tolist(), heights.tolist()):
        out.append(c)
        out.extend(d0 + int(b) for b in bin(h)[3:])
    return np.array(out, dtype=np.int64)


def rl_decode(rle, alphabet=SIGMA) -> np.ndarray:
    d0, d1 = alphabet, alphabet + 1
    syms, heights = [], []
    for s in np.asarray(rle, dtype=np.int64).tolist():
        if s == d0 or s == d1:
            if not syms:
                raise CorruptInputError("run-length digits before any symbol")
            heights[-1] = 2 * heights[-1] + (s - d0)
        elif 0 <= s < alphabet:
            syms.append(s)
            heights.append(1)
        else:
            raise CorruptInputError(f"symbol {s} outside the run-length alphabet")
    if not syms:
        raise CorruptInputError("empty run-length string")
    return np.repeat(np.array(syms, dtype=np.int64), heights)
