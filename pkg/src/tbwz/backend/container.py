"""Container byte format.

    offset  size  field
    0       4     magic b"TBWZ"
    4       1     version (1)
    5       1     flags: bit0 tunneled, bit1 CRC-32 trailer present
    6       8     original length (with sentinel), little-endian
    14      8     BWT length after tunneling
    22      8     aux symbol count
    30      8     byte length of the encoded BWT
    38      ...   encoded BWT, then encoded aux (tunneled only)
    end-4   4     CRC-32 of the original bytes, little-endian (bit1 only)

Plain containers have n equal to the original length and no aux section.
"""

import struct
import zlib
from dataclasses import dataclass

from ..errors import CorruptFileError, InvalidInputError

MAGIC = b"TBWZ"
VERSION = 1
FLAG_TUNNELED = 0x01
FLAG_CRC = 0x02
HEADER = struct.Struct("<4sBBQQQQ")
HEADER_SIZE = HEADER.size
CRC_SIZE = 4


@dataclass(frozen=True)
class Container:
    tunneled: bool
    orig_len: int
    n: int
    aux_count: int
    enc_L: bytes
    enc_aux: bytes = b""
    crc: int = None

    @property
    def size(self):
        return len(write_container(self))


def crc32(data: bytes) -> int:
    return zlib.crc32(data) & 0xFFFFFFFF


def write_container(c: Container) -> bytes:
    flags = (FLAG_TUNNELED if c.tunneled else 0) | (FLAG_CRC if c.crc is not None else 0)
    if not c.tunneled and (c.n != c.orig_len or c.aux_count or c.enc_aux):
        raise InvalidInputError("plain container cannot carry tunneling data")
    if c.tunneled and c.aux_count == 0:
        raise InvalidInputError("tunneled container needs a nonempty aux vector")
    out = HEADER.pack(MAGIC, VERSION, flags, c.orig_len, c.n, c.aux_count, len(c.enc_L))
    out += c.enc_L + c.enc_aux
    if c.crc is not None:
        out += c.crc.to_bytes(CRC_SIZE, "little")
    return out


def read_container(data: bytes) -> Container:
    data = bytes(data)
    if len(data) < HEADER_SIZE:
        raise CorruptFileError(f"truncated header: {len(data)} of {HEADER_SIZE} bytes", len(data))
    magic, version, flags, orig_len, n, aux_count, len_L = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CorruptFileError("bad magic", 0)
    if version != VERSION:
        raise CorruptFileError(f"unsupported version {version}", 4)
    if flags & ~(FLAG_TUNNELED | FLAG_CRC):
        raise CorruptFileError(f"unknown flag bits {flags:#04x}", 5)
    tunneled = bool(flags & FLAG_TUNNELED)
    if orig_len < 1:
        raise CorruptFileError("original length must be at least 1", 6)
    if n < 1 or n > orig_len:
        raise CorruptFileError(f"BWT length {n} outside [1, {orig_len}]", 14)
    if not tunneled:
        if n != orig_len:
            raise CorruptFileError("plain container with shortened BWT", 14)
        if aux_count:
            raise CorruptFileError("plain container with aux symbols", 22)
    elif aux_count == 0:
        raise CorruptFileError("tunneled container without aux symbols", 22)
    elif aux_count > n:
        raise CorruptFileError(f"aux count {aux_count} exceeds BWT length {n}", 22)

    end = len(data) - (CRC_SIZE if flags & FLAG_CRC else 0)
    if end < HEADER_SIZE:
        raise CorruptFileError("truncated checksum", len(data))
    if len_L == 0:
        raise CorruptFileError("empty BWT payload", 30)
    if HEADER_SIZE + len_L > end:
        raise CorruptFileError(f"BWT payload of {len_L} bytes runs past end of file", end)
    enc_L = data[HEADER_SIZE:HEADER_SIZE + len_L]
    enc_aux = data[HEADER_SIZE + len_L:end]
    if not tunneled and enc_aux:
        raise CorruptFileError("trailing bytes after plain payload", HEADER_SIZE + len_L)
    if tunneled and not enc_aux:
        raise CorruptFileError("missing aux payload", HEADER_SIZE + len_L)
    crc = int.from_bytes(data[end:], "little") if flags & FLAG_CRC else None
    return Container(tunneled, orig_len, n, aux_count, enc_L, enc_aux, crc)
