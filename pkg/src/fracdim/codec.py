"""Lossless compressed-size oracles.

The compressed size of a serialized raster stands in for its entropy, so the
codecs here must be lossless and deterministic. Two are provided:

* ``deflate`` (primary): zlib at maximum effort, measured on the compressed
  payload of the raw pixel buffer, no container framing.
* ``rle_huffman``: the positions-of-set-bits scheme. The input is viewed as a
  bit sequence; gaps between successive 1 bits are entropy-coded with a
  canonical Huffman code.

Canonical raw serialization, counted bit-exactly by both codecs:
gray8 rasters are width*height bytes row-major; mono rasters pack 8 pixels
per byte MSB-first, each row padded to a whole byte, with bit 1 meaning
foreground (black).

RLE-Huffman payload layout (big-endian): u64 count of 1 bits ``n``; u64 first
bit position (present iff n >= 1); u32 table entry count K; K entries of
(u32 gap symbol, u8 code length); then the Huffman-coded gap stream for the
n-1 gaps, zero-padded to a byte. Ties during Huffman construction are broken
by ascending symbol value and a single-symbol alphabet is assigned a 1-bit
code, so the table and stream are unique for a given input.
"""

import heapq
import itertools
import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .raster import FOREGROUND, MONO, GrayRaster

DEFLATE_LEVEL = 9

_CODEC_NAMES = ("deflate", "rle_huffman")


@dataclass(frozen=True)
class CodecId:
    name: str
    level: int

    def __post_init__(self):
        if self.name not in _CODEC_NAMES:
            raise ValueError(f"unknown codec {self.name!r}")


DEFLATE = CodecId("deflate", DEFLATE_LEVEL)
RLE_HUFFMAN = CodecId("rle_huffman", 0)


def get_codec(name: str) -> CodecId:
    aliases = {"deflate": DEFLATE, "rlehuff": RLE_HUFFMAN, "rle_huffman": RLE_HUFFMAN}
    try:
        return aliases[name]
    except KeyError:
        raise ValueError(f"unknown codec {name!r}") from None


@dataclass(frozen=True)
class CompressedBlob:
    data: bytes
    original_len: int
    codec: CodecId


def compress(data: bytes, codec: CodecId = DEFLATE) -> CompressedBlob:
    data = bytes(data)
    if codec.name == "deflate":
        payload = zlib.compress(data, codec.level)
    else:
        payload = _rle_encode(data)
    return CompressedBlob(data=payload, original_len=len(data), codec=codec)


def decompress(blob: CompressedBlob) -> bytes:
    if blob.codec.name == "deflate":
        out = zlib.decompress(blob.data)
    else:
        out = _rle_decode(blob.data, blob.original_len)
    if len(out) != blob.original_len:
        raise ValueError("corrupt blob: decompressed length mismatch")
    return out


def serialize(r: GrayRaster) -> bytes:
    """Canonical raw pixel buffer (see module docstring for the format)."""
    if r.colorspace == MONO:
        return np.packbits(r.pixels == FOREGROUND, axis=1).tobytes()
    return r.pixels.tobytes()


def compressed_size(r: GrayRaster, codec: CodecId = DEFLATE) -> int:
    """Compressed payload size of the serialized raster, in bytes."""
    return len(compress(serialize(r), codec).data)


def double_compression_ratio(blob) -> float:
    """Size ratio of a second deflate pass over an existing payload.

    Near 1.0 means the first pass already sits close to the entropy limit;
    clearly below 1.0 exposes an inefficient first compressor. Accepts a
    CompressedBlob or raw bytes (the latter models a do-nothing first pass).
    """
    payload = blob.data if isinstance(blob, CompressedBlob) else bytes(blob)
    if not payload:
        raise ValueError("cannot recompress an empty payload")
    return len(zlib.compress(payload, DEFLATE_LEVEL)) / len(payload)


def rle_huffman_size(r: GrayRaster) -> int:
    """Paper-style reference size of a mono raster, in bytes.

    Rows are concatenated into one unpadded bit sequence (1 = foreground);
    the Huffman-coded gap stream plus the code table are counted and the
    first-position/count header is not: ceil((32 + 40*K + stream bits) / 8).
    """
    if r.colorspace != MONO:
        raise ValueError("rle_huffman_size requires a mono raster")
    bits = (r.pixels == FOREGROUND).ravel()
    pos = np.flatnonzero(bits)
    gaps = np.diff(pos.astype(np.int64))
    lengths = _huffman_lengths(_gap_frequencies(gaps))
    table_bits = 32 + 40 * len(lengths)
    if gaps.size:
        syms = np.array(sorted(lengths), np.int64)
        len_of = np.array([lengths[int(s)] for s in syms], np.int64)
        stream_bits = int(len_of[np.searchsorted(syms, gaps)].sum())
    else:
        stream_bits = 0
    return -(-(table_bits + stream_bits) // 8)


# ---------------------------------------------------------------- huffman


def _gap_frequencies(gaps: np.ndarray) -> dict[int, int]:
    syms, counts = np.unique(gaps, return_counts=True)
    return {int(s): int(c) for s, c in zip(syms, counts)}


def _huffman_lengths(freq: dict[int, int]) -> dict[int, int]:
    """Code length per symbol; deterministic tie-breaking, min length 1."""
    if not freq:
        return {}
    if len(freq) == 1:
        (sym,) = freq
        return {sym: 1}
    depth = dict.fromkeys(freq, 0)
    fresh = itertools.count()
    # leaves sort before merged nodes at equal weight, then by symbol value
    heap = [(w, 0, s, (s,)) for s, w in freq.items()]
    heapq.heapify(heap)
    while len(heap) > 1:
        w1, _, _, syms1 = heapq.heappop(heap)
        w2, _, _, syms2 = heapq.heappop(heap)
        merged = syms1 + syms2
        for s in merged:
            depth[s] += 1
        heapq.heappush(heap, (w1 + w2, 1, next(fresh), merged))
    return depth


def _canonical_codes(lengths: dict[int, int]) -> dict[int, tuple[int, int]]:
    """Map symbol -> (code value, code length) in canonical order."""
    codes = {}
    code = 0
    prev = None
    for sym, ln in sorted(lengths.items(), key=lambda kv: (kv[1], kv[0])):
        if prev is not None:
            code = (code + 1) << (ln - prev)
        codes[sym] = (code, ln)
        prev = ln
    return codes


def _pack_stream(gaps: np.ndarray, codes: dict[int, tuple[int, int]]) -> bytes:
    if gaps.size == 0:
        return b""
    syms = np.array(sorted(codes), np.int64)
    code_of = np.array([codes[int(s)][0] for s in syms], np.int64)
    len_of = np.array([codes[int(s)][1] for s in syms], np.int64)
    if int(len_of.max()) > 63:
        raise ValueError("huffman code length exceeds 63 bits")
    which = np.searchsorted(syms, gaps)
    lens = len_of[which]
    vals = code_of[which]
    total = int(lens.sum())
    owner = np.repeat(np.arange(gaps.size), lens)
    bit_in_code = np.arange(total) - np.repeat(np.cumsum(lens) - lens, lens)
    bits = (vals[owner] >> (lens[owner] - 1 - bit_in_code)) & 1
    return np.packbits(bits.astype(np.uint8)).tobytes()


def _rle_encode(data: bytes) -> bytes:
    bits = np.unpackbits(np.frombuffer(data, np.uint8))
    pos = np.flatnonzero(bits).astype(np.int64)
    n = int(pos.size)
    gaps = np.diff(pos)
    if gaps.size and int(gaps.max()) >= 2**32:
        raise ValueError("bit gap too large for the table format")
    lengths = _huffman_lengths(_gap_frequencies(gaps))
    codes = _canonical_codes(lengths)
    parts = [struct.pack(">Q", n)]
    if n:
        parts.append(struct.pack(">Q", int(pos[0])))
    parts.append(struct.pack(">I", len(codes)))
    for sym in sorted(codes):
        parts.append(struct.pack(">IB", sym, codes[sym][1]))
    parts.append(_pack_stream(gaps, codes))
    return b"".join(parts)


def _rle_decode(payload: bytes, original_len: int) -> bytes:
    nbits = 8 * original_len
    (n,) = struct.unpack_from(">Q", payload, 0)
    off = 8
    first = 0
    if n:
        (first,) = struct.unpack_from(">Q", payload, off)
        off += 8
    (k,) = struct.unpack_from(">I", payload, off)
    off += 4
    lengths = {}
    for _ in range(k):
        sym, ln = struct.unpack_from(">IB", payload, off)
        off += 5
        lengths[sym] = ln
    by_code = {(ln, cv): sym for sym, (cv, ln) in _canonical_codes(lengths).items()}

    gaps = []
    need = n - 1 if n else 0
    code = 0
    ln = 0
    for byte in payload[off:]:
        if len(gaps) >= need:
            break
        for shift in range(7, -1, -1):
            code = (code << 1) | ((byte >> shift) & 1)
            ln += 1
            sym = by_code.get((ln, code))
            if sym is not None:
                gaps.append(sym)
                code = 0
                ln = 0
                if len(gaps) >= need:
                    break
    if len(gaps) != need:
        raise ValueError("corrupt blob: truncated huffman stream")

    bits = np.zeros(nbits, np.uint8)
    if n:
        at = np.empty(n, np.int64)
        at[0] = first
        at[1:] = first + np.cumsum(np.array(gaps, np.int64))
        if at[-1] >= nbits:
            raise ValueError("corrupt blob: bit position out of range")
        bits[at] = 1
    return np.packbits(bits).tobytes()
