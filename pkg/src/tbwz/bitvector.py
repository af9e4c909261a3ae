"""Plain bitvector with constant-time rank and select.

Positions are 0-based.  ``rank(i)`` counts set bits in ``bits[:i]`` and
``select(k)`` returns the index of the k-th set bit (k >= 1), so that
``rank(select(k) + 1) == k``.  ``select(0)`` is -1 by convention: the
position "before" the vector.
"""

import numpy as np

from .errors import InvalidInputError


class BitVector:
    __slots__ = ("bits", "_prefix", "_ones")

    def __init__(self, bits):
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 1:
            raise InvalidInputError("bitvector must be one-dimensional")
        if bits.size and bits.max() > 1:
            raise InvalidInputError("bitvector entries must be 0 or 1")
        self.bits = bits
        self._prefix = None
        self._ones = None

    @classmethod
    def ones(cls, n):
        return cls(np.ones(n, dtype=np.uint8))

    def __len__(self):
        return self.bits.size

    def __getitem__(self, i):
        return int(self.bits[i])

    def __eq__(self, other):
        if not isinstance(other, BitVector):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __repr__(self):
        return f"BitVector('{''.join(map(str, self.bits.tolist()))}')"

    @property
    def prefix(self):
        if self._prefix is None:
            prefix = np.zeros(self.bits.size + 1, dtype=np.int64)
            np.cumsum(self.bits, out=prefix[1:])
            self._prefix = prefix
        return self._prefix

    @property
    def positions(self):
        """Indices of all set bits, ascending."""
        if self._ones is None:
            self._ones = np.flatnonzero(self.bits)
        return self._ones

    def count(self):
        return int(self.prefix[-1])

    def rank(self, i):
        if not 0 <= i <= self.bits.size:
            raise IndexError(f"rank position {i} outside [0, {self.bits.size}]")
        return int(self.prefix[i])

    def select(self, k):
        if k == 0:
            return -1
        if not 1 <= k <= self.count():
            raise IndexError(f"select({k}) beyond popcount {self.count()}")
        return int(self.positions[k - 1])
