"""Command line interface: ``tbwz compress|decompress|stats|bench``.

Exit codes: 0 success, 1 usage, 2 corrupt input, 3 I/O error.
"""

import argparse
import csv
import io
import os
import sys
from pathlib import Path

from .errors import CorruptInputError, TbwzError
from .pipeline import compress, decompress, stats

EXIT_OK, EXIT_USAGE, EXIT_CORRUPT, EXIT_IO = 0, 1, 2, 3

BENCH_COLUMNS = [
    "file", "orig_bytes", "plain_bytes", "tunneled_bytes", "bps_plain", "bps_tunneled",
    "r", "r_gt1", "blocks", "t_best", "gross_pred_bits", "tax_pred_bits", "aux_bytes", "fit",
    "t_block_ms", "t_choice_ms", "t_tunnel_ms", "t_encode_ms", "t_decode_ms", "error",
]

STATS_FIELDS = [
    ("orig_len", "input length (with sentinel)"),
    ("n", "BWT length after tunneling"),
    ("r", "runs"),
    ("r_gt1", "runs of height > 1"),
    ("blocks", "width-maximal run-blocks"),
    ("t_best", "tunnels chosen"),
    ("gross_pred_bits", "predicted gross benefit (bits)"),
    ("tax_pred_bits", "predicted tax (bits)"),
    ("plain_bytes", "plain container (bytes)"),
    ("tunneled_bytes", "tunneled container (bytes)"),
    ("plain_L_bytes", "plain encoded L (bytes)"),
    ("tunneled_L_bytes", "tunneled encoded L (bytes)"),
    ("aux_bytes", "encoded aux (bytes)"),
    ("aux_symbols", "aux symbols"),
    ("x_ratio", "compressor gross/net ratio"),
    ("y_ratio", "model gross/net ratio"),
    ("fit", "model fit"),
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="tbwz", description="BWT compressor with run-block tunneling")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = sub.add_parser("compress", help="compress a file")
    c.add_argument("--no-tunnel", action="store_true", help="skip block tunneling (plain BWT)")
    c.add_argument("input")
    c.add_argument("output")
    d = sub.add_parser("decompress", help="restore a compressed file")
    d.add_argument("input")
    d.add_argument("output")
    s = sub.add_parser("stats", help="report block, estimator and size statistics")
    s.add_argument("input")
    s.add_argument("--csv", action="store_true", help="print one CSV row instead of a table")
    b = sub.add_parser("bench", help="benchmark every file in a directory")
    b.add_argument("directory")
    b.add_argument("--csv", dest="csv_out", help="write the CSV here instead of stdout")
    return p


def _fmt(v):
    if v is None:
        return "NA"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _write_atomic(path, data: bytes):
    tmp = f"{path}.tmp{os.getpid()}"
    try:
        with open(tmp, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def cmd_compress(args):
    data = Path(args.input).read_bytes()
    _write_atomic(args.output, compress(data, tunnel=not args.no_tunnel))
    return EXIT_OK


def cmd_decompress(args):
    blob = Path(args.input).read_bytes()
    data = decompress(blob)  # fully decoded before anything is written
    _write_atomic(args.output, data)
    return EXIT_OK


def cmd_stats(args, out=None):
    out = out or sys.stdout
    rep = stats(Path(args.input).read_bytes())
    if args.csv:
        w = csv.writer(out, lineterminator="\n")
        w.writerow([name for name, _ in STATS_FIELDS])
        w.writerow([_fmt(getattr(rep, name)) for name, _ in STATS_FIELDS])
    else:
        width = max(len(label) for _, label in STATS_FIELDS)
        for name, label in STATS_FIELDS:
            print(f"{label:<{width}}  {_fmt(getattr(rep, name))}", file=out)
        for stage in ("block", "choice", "tunnel", "encode", "decode"):
            print(f"{stage + ' time (ms)':<{width}}  {rep.timings.get(stage, 0.0):.2f}", file=out)
    return EXIT_OK


def bench_row(path):
    """One CSV row for ``path``; errors go into the ``error`` column."""
    row = dict.fromkeys(BENCH_COLUMNS, "")
    row["file"] = Path(path).name
    try:
        data = Path(path).read_bytes()
        rep = stats(data)
        tn = rep.orig_len
        row.update(
            orig_bytes=len(data), plain_bytes=rep.plain_bytes, tunneled_bytes=rep.tunneled_bytes,
            bps_plain=f"{8 * rep.plain_bytes / tn:.6f}", bps_tunneled=f"{8 * rep.tunneled_bytes / tn:.6f}",
            r=rep.r, r_gt1=rep.r_gt1, blocks=rep.blocks, t_best=rep.t_best,
            gross_pred_bits=f"{rep.gross_pred_bits:.6f}", tax_pred_bits=f"{rep.tax_pred_bits:.6f}",
            aux_bytes=rep.aux_bytes, fit="" if rep.fit is None else f"{rep.fit:.6f}",
        )
        for stage in ("block", "choice", "tunnel", "encode", "decode"):
            row[f"t_{stage}_ms"] = f"{rep.timings.get(stage, 0.0):.3f}"
    except (OSError, TbwzError) as e:
        row["error"] = f"{type(e).__name__}: {e}"
    return row


def cmd_bench(args, out=None):
    root = Path(args.directory)
    if not root.is_dir():
        raise NotADirectoryError(f"not a directory: {root}")
    files = sorted(p for p in root.iterdir() if p.is_file())
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    w.writeheader()
    for p in files:
        w.writerow(bench_row(p))
    if args.csv_out:
        Path(args.csv_out).write_text(buf.getvalue())
    else:
        (out or sys.stdout).write(buf.getvalue())
    return EXIT_OK


COMMANDS = {"compress": cmd_compress, "decompress": cmd_decompress, "stats": cmd_stats, "bench": cmd_bench}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CorruptInputError as e:
        print(f"tbwz: corrupt input: {e}", file=sys.stderr)
        return EXIT_CORRUPT
    except OSError as e:
        print(f"tbwz: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
