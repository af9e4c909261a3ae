"""Zero-run coding of MTF output.

A maximal run of m zeros is written as m in bijective base 2, least
significant digit first, with digit 1 -> Z0 and digit 2 -> Z1.  Nonzero
indices v become v + 1, so for an MTF alphabet of size A the output
alphabet is ``0..A`` with Z0 = 0 and Z1 = 1.
"""

import numpy as np

from ..errors import CorruptInputError

Z0, Z1 = 0, 1


def zero_run_digits(m):
    out = []
    while m > 0:
        if m & 1:
            out.append(Z0)
            m = (m - 1) >> 1
        else:
            out.append(Z1)
            m = (m - 2) >> 1
    return out


def rle0_encode(indices) -> np.ndarray:
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size == 0:
        return np.zeros(0, dtype=np.int64)
    is_zero = indices == 0
    edges = np.flatnonzero(np.diff(np.concatenate(([0], is_zero.view(np.int8), [0]))))
    starts, ends = edges[::2], edges[1::2]
    out = []
    pos = 0
    for s, e in zip(starts.tolist(), ends.tolist()):
        out.extend((indices[pos:s] + 1).tolist())
        out.extend(zero_run_digits(e - s))
        pos = e
    out.extend((indices[pos:] + 1).tolist())
    return np.array(out, dtype=np.int64)


def rle0_decode(symbols, limit=None) -> np.ndarray:
    """Inverse of ``rle0_encode``; ``limit`` caps the output length."""
    values, repeats = [], []
    total = 0
    m, weight = 0, 1
    for s in list(symbols) + [None]:
        if s == Z0 or s == Z1:
            m += weight * (s + 1)
            weight <<= 1
            continue
        if m:
            values.append(0)
            repeats.append(m)
            total += m
            m, weight = 0, 1
            if limit is not None and total > limit:
                raise CorruptInputError(f"zero-run decoding exceeds {limit} symbols")
        if s is None:
            break
        if s < 0:
            raise CorruptInputError(f"negative zero-run symbol {s}")
        values.append(s - 1)
        repeats.append(1)
        total += 1
        if limit is not None and total > limit:
            raise CorruptInputError(f"zero-run decoding exceeds {limit} symbols")
    return np.repeat(np.array(values, dtype=np.int64), np.array(repeats, dtype=np.int64))
