"""Canonical Huffman coding with a byte-per-slot length header.

Layout: one code-length byte per alphabet slot, the symbol count as 8 bytes
little-endian, then the code bits packed MSB first and zero padded.  Tree
construction breaks ties by (count, smallest symbol), so the output is
bit-exact.  A lone symbol gets a 1-bit code.
"""

import heapq

import numpy as np

from ..errors import CorruptInputError, InvalidInputError

MAX_CODE_LEN = 20  # encoder limit; keeps the decode table small
MAX_HEADER_LEN = 31
TABLE_BITS = 20
WINDOW_CHUNK = 1 << 20


def code_lengths(counts, max_len=MAX_CODE_LEN) -> np.ndarray:
    counts = np.asarray(counts, dtype=np.int64)
    lengths = np.zeros(counts.size, dtype=np.int64)
    used = np.flatnonzero(counts)
    if used.size == 0:
        return lengths
    if used.size == 1:
        lengths[used[0]] = 1
        return lengths
    work = counts.copy()
    while True:
        heap = [(int(work[s]), int(s), [int(s)]) for s in used]
        heapq.heapify(heap)
        lengths[:] = 0
        while len(heap) > 1:
            c1, m1, s1 = heapq.heappop(heap)
            c2, m2, s2 = heapq.heappop(heap)
            merged = s1 + s2
            lengths[merged] += 1
            heapq.heappush(heap, (c1 + c2, min(m1, m2), merged))
        if lengths.max() <= max_len:
            return lengths
        # flatten the distribution and retry
        work[used] = (work[used] + 1) // 2


def canonical_codes(lengths) -> np.ndarray:
    lengths = np.asarray(lengths, dtype=np.int64)
    codes = np.zeros(lengths.size, dtype=np.int64)
    order = sorted(np.flatnonzero(lengths).tolist(), key=lambda s: (lengths[s], s))
    code, prev = 0, 0
    for s in order:
        code <<= int(lengths[s]) - prev
        prev = int(lengths[s])
        codes[s] = code
        code += 1
    return codes


def huffman_encode(symbols, alphabet, max_len=MAX_CODE_LEN) -> bytes:
    symbols = np.asarray(symbols, dtype=np.int64)
    if symbols.size and (symbols.min() < 0 or symbols.max() >= alphabet):
        raise InvalidInputError("symbol outside the Huffman alphabet")
    lengths = code_lengths(np.bincount(symbols, minlength=alphabet), max_len)
    codes = canonical_codes(lengths)
    sym_len = lengths[symbols]
    sym_code = codes[symbols]
    offsets = np.cumsum(sym_len) - sym_len
    total = int(sym_len.sum())
    bits = np.zeros(total, dtype=np.uint8)
    for b in range(int(lengths.max(initial=0))):
        mask = sym_len > b
        bits[offsets[mask] + b] = (sym_code[mask] >> (sym_len[mask] - 1 - b)) & 1
    header = lengths.astype(np.uint8).tobytes() + int(symbols.size).to_bytes(8, "little")
    return header + np.packbits(bits).tobytes()


def _check_lengths(lengths):
    if lengths.size and lengths.max() > MAX_HEADER_LEN:
        raise CorruptInputError(f"code length above {MAX_HEADER_LEN}")
    kraft = sum(1 << (MAX_HEADER_LEN - int(l)) for l in lengths.tolist() if l)
    if kraft > 1 << MAX_HEADER_LEN:
        raise CorruptInputError("code lengths violate the Kraft inequality")


def huffman_decode(data: bytes, alphabet, expected=None) -> np.ndarray:
    data = bytes(data)
    if len(data) < alphabet + 8:
        raise CorruptInputError(f"Huffman header needs {alphabet + 8} bytes, got {len(data)}")
    lengths = np.frombuffer(data, dtype=np.uint8, count=alphabet).astype(np.int64)
    count = int.from_bytes(data[alphabet:alphabet + 8], "little")
    body = np.frombuffer(data, dtype=np.uint8, offset=alphabet + 8)
    _check_lengths(lengths)
    if expected is not None and count != expected:
        raise CorruptInputError(f"Huffman stream holds {count} symbols, expected {expected}")
    nbits = body.size * 8
    if count == 0:
        if body.size:
            raise CorruptInputError("trailing bytes after empty Huffman stream")
        return np.zeros(0, dtype=np.int64)
    if not lengths.any():
        raise CorruptInputError("empty code table for a nonempty stream")
    if count > nbits:
        raise CorruptInputError(f"{count} symbols cannot fit in {nbits} bits")
    bits = np.unpackbits(body)
    maxlen = int(lengths.max())
    if maxlen <= TABLE_BITS:
        out, pos = _decode_table(bits, lengths, maxlen, count)
    else:
        out, pos = _decode_slow(bits, lengths, count)
    if pos > nbits:
        raise CorruptInputError("Huffman stream ends mid-code")
    if nbits - pos >= 8:
        raise CorruptInputError("trailing bytes after Huffman stream")
    return np.array(out, dtype=np.int64)


def _decode_table(bits, lengths, maxlen, count):
    codes = canonical_codes(lengths)
    size = 1 << maxlen
    tab_sym = np.full(size, -1, dtype=np.int64)
    tab_len = np.zeros(size, dtype=np.int64)
    for s in np.flatnonzero(lengths).tolist():
        l = int(lengths[s])
        lo = int(codes[s]) << (maxlen - l)
        tab_sym[lo:lo + (1 << (maxlen - l))] = s
        tab_len[lo:lo + (1 << (maxlen - l))] = l
    padded = np.concatenate((bits, np.zeros(maxlen, dtype=np.uint8))).astype(np.int64)
    nb = bits.size
    tab_sym = tab_sym.tolist()
    tab_len = tab_len.tolist()
    out = [0] * count
    pos = 0
    base, window = 0, []
    for i in range(count):
        if pos >= nb:
            raise CorruptInputError("Huffman stream ends early")
        if pos - base >= len(window):
            # windows of maxlen bits, computed one chunk at a time to bound memory
            base = pos
            end = min(nb, base + WINDOW_CHUNK)
            w = np.zeros(end - base, dtype=np.int64)
            for k in range(maxlen):
                w = (w << 1) | padded[base + k:end + k]
            window = w.tolist()
        w = window[pos - base]
        l = tab_len[w]
        if l == 0:
            raise CorruptInputError(f"invalid Huffman code at bit {pos}")
        out[i] = tab_sym[w]
        pos += l
    return out, pos


def _decode_slow(bits, lengths, count):
    # canonical decode one bit at a time; only for foreign tables with long codes
    maxlen = int(lengths.max())
    first = [0] * (maxlen + 2)
    n_of = np.bincount(lengths, minlength=maxlen + 1).tolist()
    n_of[0] = 0
    order = sorted(np.flatnonzero(lengths).tolist(), key=lambda s: (lengths[s], s))
    start = [0] * (maxlen + 2)
    code, idx = 0, 0
    for l in range(1, maxlen + 1):
        code <<= 1
        first[l] = code
        start[l] = idx
        code += n_of[l]
        idx += n_of[l]
    bl = bits.tolist()
    out = []
    pos = 0
    for _ in range(count):
        code, l = 0, 0
        while True:
            if pos >= len(bl) or l >= maxlen:
                raise CorruptInputError(f"invalid Huffman code at bit {pos}")
            code = (code << 1) | bl[pos]
            pos += 1
            l += 1
            off = code - first[l]
            if 0 <= off < n_of[l]:
                out.append(order[start[l] + off])
                break
    return out, pos
