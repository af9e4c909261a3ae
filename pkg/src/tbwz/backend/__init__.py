"""Entropy-coding backend: MTF, zero-run coding, canonical Huffman, container."""

import numpy as np

from ..errors import CorruptInputError
from .container import Container, read_container, write_container
from .huffman import huffman_decode, huffman_encode
from .mtf import mtf_decode, mtf_encode
from .rle import digit_counts, rl_decode, rl_encode, rle_length
from .rle0 import rle0_decode, rle0_encode


def encode_payload(seq, alphabet) -> bytes:
    """MTF -> zero-run coding -> Huffman.  An empty sequence encodes to no bytes."""
    seq = np.asarray(seq, dtype=np.int64)
    if seq.size == 0:
        return b""
    return huffman_encode(rle0_encode(mtf_encode(seq, alphabet)), alphabet + 1)


def decode_payload(data: bytes, alphabet, count) -> np.ndarray:
    """Inverse of ``encode_payload``; ``count`` is the number of symbols expected."""
    if count == 0:
        if data:
            raise CorruptInputError("payload present for an empty sequence")
        return np.zeros(0, dtype=np.int64)
    if not data:
        raise CorruptInputError(f"missing payload for {count} symbols")
    indices = rle0_decode(huffman_decode(data, alphabet + 1).tolist(), limit=count)
    if indices.size != count:
        raise CorruptInputError(f"payload decodes to {indices.size} symbols, expected {count}")
    return mtf_decode(indices, alphabet)


__all__ = [
    "Container", "read_container", "write_container",
    "encode_payload", "decode_payload",
    "huffman_encode", "huffman_decode", "mtf_encode", "mtf_decode",
    "rle0_encode", "rle0_decode", "rl_encode", "rl_decode",
    "digit_counts", "rle_length",
]
