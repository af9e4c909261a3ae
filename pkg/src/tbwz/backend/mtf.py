"""Move-to-front transform over a fixed alphabet ``0..alphabet-1``.

Only run heads can produce nonzero indices, so both directions loop over
runs in Python and fill the rest with numpy.
"""

import numpy as np

from ..errors import CorruptInputError, InvalidInputError


def mtf_encode(seq, alphabet) -> np.ndarray:
    seq = np.asarray(seq, dtype=np.int64)
    out = np.zeros(seq.size, dtype=np.int64)
    if seq.size == 0:
        return out
    if seq.min() < 0 or seq.max() >= alphabet:
        raise InvalidInputError("symbol outside the MTF alphabet")
    heads = np.flatnonzero(np.concatenate(([True], seq[1:] != seq[:-1])))
    table = list(range(alphabet))
    idx = []
    for c in seq[heads].tolist():
        k = table.index(c)
        if k:
            del table[k]
            table.insert(0, c)
        idx.append(k)
    out[heads] = idx
    return out


def mtf_decode(indices, alphabet) -> np.ndarray:
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size == 0:
        return np.zeros(0, dtype=np.int64)
    if indices.min() < 0 or indices.max() >= alphabet:
        raise CorruptInputError("MTF index outside the alphabet")
    heads = np.flatnonzero(indices)
    if heads.size == 0 or heads[0] != 0:
        heads = np.concatenate(([0], heads))
    table = list(range(alphabet))
    syms = []
    for k in indices[heads].tolist():
        c = table[k]
        if k:
            del table[k]
            table.insert(0, c)
        syms.append(c)
    # every position repeats the symbol of the latest head at or before it
    marker = np.zeros(indices.size, dtype=np.int64)
    marker[heads] = np.arange(heads.size)
    return np.array(syms, dtype=np.int64)[np.maximum.accumulate(marker)]
