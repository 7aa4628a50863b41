"""Image file ingest and emission.

Supported on the way in: PNG (any Pillow-decodable flavor; color is reduced
with Rec.601 luma, alpha is composited over white, 16-bit samples are
rescaled to 8), binary PGM (P5, maxval <= 255) and binary PBM (P4). On the
way out: PGM for gray, PBM for mono, and a minimal 8-bit grayscale PNG
written by this module so emitted bytes depend only on the pixel data.
"""

import struct
import zlib
from pathlib import Path

import numpy as np

from .errors import ImageFormatError
from .raster import BACKGROUND, FOREGROUND, MONO, GrayRaster

_PNG_SIG = b"\x89PNG\r\n\x1a\n"


def luma_rec601(rgb: np.ndarray) -> np.ndarray:
    """Rec.601 luma of an (h, w, 3) uint8 array, rounded half-up."""
    r = rgb[..., 0].astype(np.int64)
    g = rgb[..., 1].astype(np.int64)
    b = rgb[..., 2].astype(np.int64)
    return ((299 * r + 587 * g + 114 * b + 500) // 1000).astype(np.uint8)


def _composite_over_white(channels: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    c = channels.astype(np.int64)
    a = alpha.astype(np.int64)[..., None] if channels.ndim == 3 else alpha.astype(np.int64)
    mixed = c * a + 255 * (255 - a)
    return ((2 * mixed + 255) // 510).astype(np.uint8)  # half-up /255


def _from_pillow(im) -> GrayRaster:
    if im.mode == "P":
        im = im.convert("RGBA" if "transparency" in im.info else "RGB")
    if im.mode == "1":
        im = im.convert("L")
    if im.mode in ("I", "I;16", "I;16B"):
        arr = np.asarray(im, np.int64)
        if arr.max(initial=0) > 255:
            arr = (2 * arr + 257) // 514  # half-up /257 maps 65535 -> 255
        return GrayRaster(arr.astype(np.uint8))
    if im.mode == "LA":
        arr = np.asarray(im)
        return GrayRaster(_composite_over_white(arr[..., 0], arr[..., 1]))
    if im.mode == "RGBA":
        arr = np.asarray(im)
        return GrayRaster(luma_rec601(_composite_over_white(arr[..., :3], arr[..., 3])))
    if im.mode == "RGB":
        return GrayRaster(luma_rec601(np.asarray(im)))
    if im.mode == "L":
        return GrayRaster(np.asarray(im))
    im = im.convert("RGB")
    return GrayRaster(luma_rec601(np.asarray(im)))


def _read_png(data: bytes) -> GrayRaster:
    import io

    from PIL import Image, UnidentifiedImageError

    try:
        with Image.open(io.BytesIO(data)) as im:
            im.load()
            return _from_pillow(im)
    except UnidentifiedImageError as exc:
        raise ImageFormatError(f"not a decodable PNG: {exc}") from None


def _pnm_tokens(data: bytes, count: int) -> tuple[list, int]:
    """First `count` whitespace-separated header tokens after the magic,
    skipping # comments; returns tokens and the offset past the final
    single whitespace byte that terminates the header."""
    tokens = []
    i = 2
    while len(tokens) < count:
        if i >= len(data):
            raise ImageFormatError("truncated PNM header")
        c = data[i : i + 1]
        if c == b"#":
            while i < len(data) and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
                j += 1
            tokens.append(data[i:j])
            i = j
    if i >= len(data) or not data[i : i + 1].isspace():
        raise ImageFormatError("malformed PNM header")
    return tokens, i + 1


def _read_pgm(data: bytes) -> GrayRaster:
    (w, h, maxval), off = _pnm_tokens(data, 3)
    w, h, maxval = int(w), int(h), int(maxval)
    if maxval > 255 or maxval < 1:
        raise ImageFormatError(f"unsupported PGM maxval {maxval}")
    need = w * h
    body = data[off : off + need]
    if len(body) != need:
        raise ImageFormatError("PGM pixel data truncated")
    return GrayRaster(np.frombuffer(body, np.uint8).reshape(h, w))


def _read_pbm(data: bytes) -> GrayRaster:
    (w, h), off = _pnm_tokens(data, 2)
    w, h = int(w), int(h)
    stride = -(-w // 8)
    need = stride * h
    body = data[off : off + need]
    if len(body) != need:
        raise ImageFormatError("PBM pixel data truncated")
    bits = np.unpackbits(np.frombuffer(body, np.uint8).reshape(h, stride), axis=1)[:, :w]
    # PBM: 1 is black
    pixels = np.where(bits == 1, FOREGROUND, BACKGROUND).astype(np.uint8)
    return GrayRaster(pixels, colorspace=MONO)


def load_raster(path) -> GrayRaster:
    """Decode an image file by sniffing its magic bytes."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ImageFormatError(f"cannot read {path}: {exc}") from None
    if data.startswith(_PNG_SIG):
        return _read_png(data)
    if data.startswith(b"P5"):
        return _read_pgm(data)
    if data.startswith(b"P4"):
        return _read_pbm(data)
    raise ImageFormatError(f"{path}: unsupported image format (need PNG, PGM P5, or PBM P4)")


def _png_chunk(tag: bytes, payload: bytes) -> bytes:
    crc = zlib.crc32(tag + payload) & 0xFFFFFFFF
    return struct.pack(">I", len(payload)) + tag + payload + struct.pack(">I", crc)


def png_bytes(r: GrayRaster) -> bytes:
    """Encode as a minimal non-interlaced 8-bit grayscale PNG."""
    h, w = r.pixels.shape
    ihdr = struct.pack(">IIBBBBB", w, h, 8, 0, 0, 0, 0)
    filtered = np.concatenate([np.zeros((h, 1), np.uint8), r.pixels], axis=1)
    idat = zlib.compress(filtered.tobytes(), 9)
    return _PNG_SIG + _png_chunk(b"IHDR", ihdr) + _png_chunk(b"IDAT", idat) + _png_chunk(b"IEND", b"")


def pgm_bytes(r: GrayRaster) -> bytes:
    return f"P5\n{r.width} {r.height}\n255\n".encode("ascii") + r.pixels.tobytes()


def pbm_bytes(r: GrayRaster) -> bytes:
    if r.colorspace != MONO:
        raise ValueError("PBM output requires a mono raster")
    packed = np.packbits(r.pixels == FOREGROUND, axis=1)
    return f"P4\n{r.width} {r.height}\n".encode("ascii") + packed.tobytes()


def save_raster(r: GrayRaster, path) -> None:
    """Write a raster; the format follows the file extension."""
    path = Path(path)
    ext = path.suffix.lower()
    if ext == ".png":
        payload = png_bytes(r)
    elif ext == ".pgm":
        payload = pgm_bytes(r)
    elif ext == ".pbm":
        payload = pbm_bytes(r)
    else:
        raise ValueError(f"unsupported output extension {ext!r} (use .png, .pgm, or .pbm)")
    path.write_bytes(payload)
