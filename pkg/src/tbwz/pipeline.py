"""End-to-end compression: bytes -> BWT -> (tunneled) payloads -> container."""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .backend import decode_payload, encode_payload
from .backend.container import HEADER_SIZE, Container, crc32, read_container, write_container
from .blocks import build_collision_graph, compute_run_blocks, compute_runs
from .bwt import SIGMA, bwt_from_sa, build_suffix_array, invert_bwt, lf_mapping, make_text, text_to_bytes
from .choice import choose_blocks, gross_benefit, tax
from .errors import CorruptFileError, CorruptInputError, InvalidInputError
from .tunnel import AUX_ALPHABET, decode_aux, encode_aux, invert_tunneled, tunnel


class _Timer:
    def __init__(self):
        self.ms = {}

    def __call__(self, name):
        timer = self

        class _Span:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                timer.ms[name] = timer.ms.get(name, 0.0) + (time.perf_counter() - self.t0) * 1e3

        return _Span()


@dataclass
class Analysis:
    data: bytes
    L: np.ndarray
    runs: object
    blocks: list
    choice: object
    timings: dict = field(default_factory=dict)

    @property
    def chosen(self):
        return self.choice.chosen if self.choice is not None else []


def analyze(data: bytes, with_blocks=True) -> Analysis:
    """BWT, run-blocks and the greedy choice for ``data``, with stage timings."""
    timer = _Timer()
    with timer("bwt"):
        text = make_text(data)
        L = bwt_from_sa(text, build_suffix_array(text))
    with timer("block"):
        runs = compute_runs(L)
        blocks = compute_run_blocks(lf_mapping(L), runs) if with_blocks else []
        graph = build_collision_graph(blocks) if with_blocks else None
    choice = None
    if with_blocks:
        with timer("choice"):
            choice = choose_blocks(blocks, runs, graph)
    return Analysis(bytes(data), L, runs, blocks, choice, timer.ms)


@dataclass
class Encoded:
    """Both candidate containers for one input."""

    plain: bytes
    tunneled: bytes = None  # None when no block was chosen
    enc_L_plain: int = 0
    enc_L_tunneled: int = 0
    enc_aux: int = 0
    n: int = 0  # BWT length in the tunneled container
    aux_count: int = 0
    timings: dict = field(default_factory=dict)

    @property
    def best(self):
        if self.tunneled is not None and len(self.tunneled) <= len(self.plain):
            return self.tunneled
        return self.plain


def encode(analysis: Analysis, force=False) -> Encoded:
    timer = _Timer()
    L = analysis.L
    crc = crc32(analysis.data)
    with timer("encode"):
        enc_L = encode_payload(L, SIGMA)
        plain = write_container(Container(False, L.size, L.size, 0, enc_L, crc=crc))
    result = Encoded(plain, enc_L_plain=len(enc_L), n=L.size)
    chosen = analysis.choice.BS if force and analysis.choice is not None else analysis.chosen
    if chosen:
        with timer("tunnel"):
            tb = tunnel(L, chosen, validate=False)
            aux = encode_aux(tb)
        with timer("encode"):
            enc_tL = encode_payload(tb.L, SIGMA)
            enc_aux = encode_payload(aux.symbols, AUX_ALPHABET)
            result.tunneled = write_container(
                Container(True, L.size, tb.n, len(aux), enc_tL, enc_aux, crc=crc))
        result.enc_L_tunneled, result.enc_aux = len(enc_tL), len(enc_aux)
        result.n, result.aux_count = tb.n, len(aux)
    result.timings = timer.ms
    return result


def compress(data: bytes, tunnel=True, force=False) -> bytes:
    """Compress ``data``.

    With ``tunnel`` the estimator picks blocks; the tunneled container is
    kept only if it is no larger than the plain one.  ``force`` tunnels every
    width-maximal run-block regardless of estimated benefit and skips that
    size comparison (used to exercise the tunneled path on small inputs).
    """
    enc = encode(analyze(data, with_blocks=tunnel), force=force)
    if force and enc.tunneled is not None:
        return enc.tunneled
    return enc.best


def decompress(blob: bytes) -> bytes:
    c = read_container(blob)
    aux_at = HEADER_SIZE + len(c.enc_L)
    try:
        L = decode_payload(c.enc_L, SIGMA, c.n)
    except (CorruptInputError, InvalidInputError) as e:
        raise CorruptFileError(f"BWT payload: {e}", HEADER_SIZE) from e
    try:
        if c.tunneled:
            aux = decode_payload(c.enc_aux, AUX_ALPHABET, c.aux_count)
            tb = decode_aux(L, aux, c.orig_len).validate()
            text = invert_tunneled(tb)
        else:
            text = invert_bwt(L)
    except (CorruptInputError, InvalidInputError) as e:
        raise CorruptFileError(f"reconstruction failed: {e}", aux_at if c.tunneled else HEADER_SIZE) from e
    if text.size != c.orig_len:
        raise CorruptFileError(f"decoded {text.size} symbols, header says {c.orig_len}", 6)
    data = text_to_bytes(text)
    if c.crc is not None and crc32(data) != c.crc:
        raise CorruptFileError("checksum mismatch", len(blob) - 4)
    return data


@dataclass
class StatsReport:
    orig_len: int
    n: int
    r: int
    r_gt1: int
    blocks: int
    t_best: int
    gross_pred_bits: float
    tax_pred_bits: float
    plain_bytes: int
    tunneled_bytes: int
    plain_L_bytes: int
    tunneled_L_bytes: int
    aux_bytes: int
    aux_symbols: int
    fit: float = None
    x_ratio: float = None
    y_ratio: float = None
    timings: dict = field(default_factory=dict)

    @property
    def fallback(self):
        """True when tunneling was chosen but the plain container was smaller."""
        return self.t_best > 0 and self.tunneled_bytes == self.plain_bytes


def model_fit(delta_L_bits, aux_bits, gross, tax_bits):
    """Min-max distance of compressor and model gross/net ratios.

    Returns ``(fit, x, y)``; fit is None when either ratio is undefined.
    """
    x = y = None
    if delta_L_bits - aux_bits != 0:
        x = 1 + aux_bits / (delta_L_bits - aux_bits)
    if gross - tax_bits != 0:
        y = 1 + tax_bits / (gross - tax_bits)
    if x is None or y is None or not (math.isfinite(x) and math.isfinite(y)):
        return None, x, y
    hi = max(x, y)
    if hi == 0:
        return None, x, y
    return min(x, y) / hi, x, y


def stats(data: bytes) -> StatsReport:
    a = analyze(data)
    enc = encode(a)
    timings = dict(a.timings)
    for k, v in enc.timings.items():
        timings[k] = timings.get(k, 0.0) + v
    t0 = time.perf_counter()
    decompress(enc.best)
    timings["decode"] = (time.perf_counter() - t0) * 1e3
    state = a.choice.best_state
    gross, tax_bits = gross_benefit(state), tax(state)
    t_best = a.choice.t_best
    report = StatsReport(
        orig_len=a.L.size,
        n=enc.n,
        r=len(a.runs),
        r_gt1=a.runs.count_taller_than(1),
        blocks=len(a.blocks),
        t_best=t_best,
        gross_pred_bits=gross,
        tax_pred_bits=tax_bits,
        plain_bytes=len(enc.plain),
        tunneled_bytes=len(enc.best),
        plain_L_bytes=enc.enc_L_plain,
        tunneled_L_bytes=enc.enc_L_tunneled if t_best else enc.enc_L_plain,
        aux_bytes=enc.enc_aux,
        aux_symbols=enc.aux_count,
        timings=timings,
    )
    if t_best:
        report.fit, report.x_ratio, report.y_ratio = model_fit(
            8 * (enc.enc_L_plain - enc.enc_L_tunneled), 8 * enc.enc_aux, gross, tax_bits)
    return report

