import numpy as np
import pytest

from tbwz.backend import (decode_payload, digit_counts, encode_payload, huffman_decode, huffman_encode,
                          mtf_decode, mtf_encode, rl_decode, rl_encode, rle0_decode, rle0_encode, rle_length)
from tbwz.backend.container import HEADER_SIZE, Container, crc32, read_container, write_container
from tbwz.backend.huffman import canonical_codes, code_lengths
from tbwz.backend.rle0 import Z0, Z1
from tbwz.blocks import compute_runs
from tbwz.bwt import SIGMA, bwt, entropy, from_string, to_string
from tbwz.choice import EstimatorState
from tbwz.errors import CorruptFileError, CorruptInputError

D0, D1 = SIGMA, SIGMA + 1


def show_rle(rle):
    return "".join({D0: "0", D1: "1"}.get(s) or to_string([s]) for s in rle.tolist())


# -- run-length encoding --------------------------------------------------------

def test_rl_encode_examples():
    assert show_rle(rl_encode(from_string("yeep$yaass"))) == "ye0p$ya0s0"
    a = ord("a") + 1
    assert rl_encode([a] * 5).tolist() == [a, D0, D1]
    assert rl_encode([a]).tolist() == [a]


def test_rl_roundtrip_and_length():
    rng = np.random.default_rng(2)
    for _ in range(100):
        seq = np.repeat(rng.integers(0, 5, 30), rng.integers(1, 70, 30))
        rle = rl_encode(seq)
        assert rl_decode(rle).tolist() == seq.tolist()
        runs = compute_runs(seq)
        assert len(rle) == rle_length(runs.heights) == EstimatorState.from_runs(runs).n_rle


def test_rl_decode_errors():
    with pytest.raises(CorruptInputError):
        rl_decode([D0, 5])
    with pytest.raises(CorruptInputError):
        rl_decode([SIGMA + 7])


def test_digit_counts():
    assert digit_counts([1, 2, 3, 4, 7, 8, 1 << 40]).tolist() == [0, 1, 1, 2, 2, 3, 40]


# -- MTF ------------------------------------------------------------------------

def test_mtf_examples():
    assert mtf_encode([0, 0, 0, 0], 2).tolist() == [0, 0, 0, 0]
    assert mtf_encode([1, 0], 2).tolist() == [1, 1]
    assert mtf_encode([2, 2, 1, 2], 3).tolist() == [2, 0, 2, 1]


def test_mtf_roundtrip_random():
    rng = np.random.default_rng(3)
    for _ in range(100):
        a = int(rng.integers(1, 260))
        seq = np.repeat(rng.integers(0, a, 40), rng.integers(1, 5, 40))
        assert mtf_decode(mtf_encode(seq, a), a).tolist() == seq.tolist()


def test_mtf_decode_range_error():
    with pytest.raises(CorruptInputError):
        mtf_decode([0, 4], 4)


# -- zero-run coding ------------------------------------------------------------

def test_rle0_examples():
    assert rle0_encode([0]).tolist() == [Z0]
    assert rle0_encode([0, 0, 0]).tolist() == [Z0, Z0]
    assert rle0_encode([5, 0, 0, 7]).tolist() == [6, Z1, 8]


def test_rle0_roundtrip_random():
    rng = np.random.default_rng(4)
    for _ in range(200):
        idx = rng.integers(0, 4, rng.integers(0, 300)) * (rng.random(1) < 0.5)
        idx = np.where(rng.random(idx.size) < 0.7, 0, idx)
        assert rle0_decode(rle0_encode(idx).tolist()).tolist() == idx.tolist()


def test_rle0_limit():
    with pytest.raises(CorruptInputError):
        rle0_decode([Z1] * 70, limit=1000)
    with pytest.raises(CorruptInputError):
        rle0_decode([-3])


# -- Huffman --------------------------------------------------------------------

def test_huffman_single_symbol():
    data = huffman_encode([3] * 20, 5)
    assert data[:5] == bytes([0, 0, 0, 1, 0])
    assert len(data) == 5 + 8 + 3  # 20 one-bit codes fill 3 bytes
    assert huffman_decode(data, 5).tolist() == [3] * 20


def test_huffman_deterministic_ties():
    lengths = code_lengths([1, 1, 1, 1])
    assert lengths.tolist() == [2, 2, 2, 2]
    assert canonical_codes(lengths).tolist() == [0, 1, 2, 3]
    assert huffman_encode([0, 1, 2, 3], 4) == huffman_encode([0, 1, 2, 3], 4)
    # counts (2,1,1): symbol 0 gets the short code
    assert code_lengths([2, 1, 1]).tolist() == [1, 2, 2]


def test_huffman_roundtrip_and_entropy_bound():
    rng = np.random.default_rng(5)
    for _ in range(60):
        a = int(rng.integers(2, 300))
        p = rng.dirichlet(np.ones(a) * 0.3)
        syms = rng.choice(a, size=int(rng.integers(1, 3000)), p=p)
        data = huffman_encode(syms, a)
        assert huffman_decode(data, a).tolist() == syms.tolist()
        lengths = np.frombuffer(data[:a], dtype=np.uint8).astype(np.int64)
        bits_per = lengths[syms].sum() / syms.size
        h = entropy(np.bincount(syms, minlength=a))
        if lengths.max() < 20:  # the length limit can cost a little on skewed inputs
            assert h - 1e-9 <= bits_per <= h + 1 + 1e-9


def test_huffman_length_limit_and_long_code_decoding():
    # Fibonacci counts need codes longer than 20 bits without a limit
    fib = [1, 1]
    while len(fib) < 30:
        fib.append(fib[-1] + fib[-2])
    syms = np.repeat(np.arange(30), fib[:30])
    limited = huffman_encode(syms, 30)
    assert max(limited[:30]) <= 20
    assert huffman_decode(limited, 30).tolist() == syms.tolist()
    unlimited = huffman_encode(syms, 30, max_len=31)
    assert max(unlimited[:30]) > 20
    assert huffman_decode(unlimited, 30).tolist() == syms.tolist()


def test_huffman_rejects_bad_tables():
    good = huffman_encode([0, 1, 1, 2], 3)
    with pytest.raises(CorruptInputError):
        huffman_decode(bytes([1, 1, 1]) + good[3:], 3)      # Kraft sum 3/2
    with pytest.raises(CorruptInputError):
        huffman_decode(bytes([40, 1, 1]) + good[3:], 3)     # length above 31
    with pytest.raises(CorruptInputError):
        huffman_decode(good[:5], 3)                         # truncated header
    with pytest.raises(CorruptInputError):
        huffman_decode(good + b"\x00", 3)                   # trailing byte
    with pytest.raises(CorruptInputError):
        huffman_decode(good[:-1], 3)                        # truncated body


# -- payloads -------------------------------------------------------------------

def test_payload_roundtrip_running_example():
    L = from_string("yeep$yass")
    enc = encode_payload(L, SIGMA)
    assert decode_payload(enc, SIGMA, L.size).tolist() == L.tolist()
    assert encode_payload(L, SIGMA) == enc


def test_payload_uniform_aux_is_tiny():
    aux = [3] * 10000
    enc = encode_payload(aux, 4)
    assert len(enc) < 5 + 8 + 8
    assert decode_payload(enc, 4, 10000).tolist() == aux


def test_payload_empty():
    assert encode_payload([], 4) == b""
    assert decode_payload(b"", 4, 0).size == 0
    with pytest.raises(CorruptInputError):
        decode_payload(b"x", 4, 0)
    with pytest.raises(CorruptInputError):
        decode_payload(b"", 4, 3)


def test_payload_count_mismatch():
    enc = encode_payload([1, 2, 3], 4)
    with pytest.raises(CorruptInputError):
        decode_payload(enc, 4, 4)
    with pytest.raises(CorruptInputError):
        decode_payload(enc, 4, 2)


def test_payload_random_bwt_roundtrip():
    rng = np.random.default_rng(6)
    for _ in range(20):
        L = bwt(rng.integers(0, int(rng.choice([2, 16, 256])), 2000).astype(np.uint8).tobytes())
        assert decode_payload(encode_payload(L, SIGMA), SIGMA, L.size).tolist() == L.tolist()


# -- container ------------------------------------------------------------------

def _tunneled():
    return Container(True, 10, 9, 2, b"LLLL", b"AA", crc=crc32(b"easypeasy"))


def test_container_layout():
    blob = write_container(_tunneled())
    assert blob[:4] == b"TBWZ" and blob[4] == 1 and blob[5] == 0x03
    assert int.from_bytes(blob[6:14], "little") == 10
    assert int.from_bytes(blob[14:22], "little") == 9
    assert int.from_bytes(blob[22:30], "little") == 2
    assert int.from_bytes(blob[30:38], "little") == 4
    assert blob[38:42] == b"LLLL" and blob[42:44] == b"AA"
    assert HEADER_SIZE == 38 and len(blob) == 38 + 6 + 4
    c = read_container(blob)
    assert c == _tunneled() and write_container(c) == blob


def test_container_without_crc():
    c = Container(False, 5, 5, 0, b"xyz")
    blob = write_container(c)
    assert blob[5] == 0 and len(blob) == 41
    assert read_container(blob) == c


@pytest.mark.parametrize("mutate, offset", [
    (lambda b: b"XBWZ" + b[4:], 0),
    (lambda b: b[:4] + b"\x02" + b[5:], 4),
    (lambda b: b[:5] + b"\x07" + b[6:], 5),
    (lambda b: b[:20], 20),
])
def test_container_header_errors(mutate, offset):
    with pytest.raises(CorruptFileError) as e:
        read_container(mutate(write_container(_tunneled())))
    assert e.value.offset == offset
    assert f"at byte {offset}" in str(e.value)


def test_container_consistency_errors():
    plain = bytearray(write_container(Container(False, 5, 5, 0, b"xyz")))
    bad_n = bytes(plain[:14]) + (4).to_bytes(8, "little") + bytes(plain[22:])
    with pytest.raises(CorruptFileError):
        read_container(bad_n)
    bad_aux = bytes(plain[:22]) + (1).to_bytes(8, "little") + bytes(plain[30:])
    with pytest.raises(CorruptFileError):
        read_container(bad_aux)
    with pytest.raises(CorruptFileError):
        read_container(bytes(plain) + b"!")                 # trailing bytes
    tun = bytearray(write_container(_tunneled()))
    tun[22:30] = (0).to_bytes(8, "little")
    with pytest.raises(CorruptFileError):
        read_container(bytes(tun))                          # tunneled, aux count 0
    tun = write_container(_tunneled())
    with pytest.raises(CorruptFileError):
        read_container(tun[:30] + (100).to_bytes(8, "little") + tun[38:])
