"""Minimal Zstandard (de)compression via the system libzstd.

The archive dumps this workbench ingests are zstd-framed NDJSON. No Python
zstd binding is assumed; instead we bind the streaming decompression API of
``libzstd`` (present on any stock Linux) with ctypes. Compression support is
only what the round-trip tests and fixture builders need (single-shot
``ZSTD_compress``).
"""

from __future__ import annotations

import ctypes
import ctypes.util
import io
from pathlib import Path
from typing import BinaryIO, Iterator

ZSTD_MAGIC = b"\x28\xb5\x2f\xfd"

_lib = None


class ZstdError(RuntimeError):
    pass


class _InBuffer(ctypes.Structure):
    _fields_ = [
        ("src", ctypes.c_char_p),
        ("size", ctypes.c_size_t),
        ("pos", ctypes.c_size_t),
    ]


class _OutBuffer(ctypes.Structure):
    _fields_ = [
        ("dst", ctypes.c_void_p),
        ("size", ctypes.c_size_t),
        ("pos", ctypes.c_size_t),
    ]


def _load() -> ctypes.CDLL:
    global _lib
    if _lib is None:
        name = ctypes.util.find_library("zstd")
        if name is None:
            raise ZstdError("libzstd not found; cannot read .zst archives")
        lib = ctypes.CDLL(name)
        lib.ZSTD_createDCtx.restype = ctypes.c_void_p
        lib.ZSTD_freeDCtx.argtypes = [ctypes.c_void_p]
        lib.ZSTD_decompressStream.restype = ctypes.c_size_t
        lib.ZSTD_decompressStream.argtypes = [
            ctypes.c_void_p,
            ctypes.POINTER(_OutBuffer),
            ctypes.POINTER(_InBuffer),
        ]
        lib.ZSTD_isError.restype = ctypes.c_uint
        lib.ZSTD_isError.argtypes = [ctypes.c_size_t]
        lib.ZSTD_getErrorName.restype = ctypes.c_char_p
        lib.ZSTD_getErrorName.argtypes = [ctypes.c_size_t]
        lib.ZSTD_compressBound.restype = ctypes.c_size_t
        lib.ZSTD_compressBound.argtypes = [ctypes.c_size_t]
        lib.ZSTD_compress.restype = ctypes.c_size_t
        lib.ZSTD_compress.argtypes = [
            ctypes.c_void_p,
            ctypes.c_size_t,
            ctypes.c_char_p,
            ctypes.c_size_t,
            ctypes.c_int,
        ]
        _lib = lib
    return _lib


def _check(lib: ctypes.CDLL, code: int) -> int:
    if lib.ZSTD_isError(code):
        raise ZstdError(lib.ZSTD_getErrorName(code).decode())
    return code


def is_zstd(path: Path) -> bool:
    with open(path, "rb") as fh:
        return fh.read(4) == ZSTD_MAGIC


def decompress_chunks(fh: BinaryIO, chunk_size: int = 1 << 20) -> Iterator[bytes]:
    """Yield decompressed byte chunks from a zstd-framed binary stream."""
    lib = _load()
    dctx = lib.ZSTD_createDCtx()
    if not dctx:
        raise ZstdError("ZSTD_createDCtx failed")
    out_raw = ctypes.create_string_buffer(chunk_size)
    try:
        while True:
            raw = fh.read(chunk_size)
            if not raw:
                break
            inbuf = _InBuffer(raw, len(raw), 0)
            while inbuf.pos < inbuf.size:
                outbuf = _OutBuffer(
                    ctypes.cast(out_raw, ctypes.c_void_p), chunk_size, 0
                )
                _check(
                    lib,
                    lib.ZSTD_decompressStream(
                        dctx, ctypes.byref(outbuf), ctypes.byref(inbuf)
                    ),
                )
                if outbuf.pos:
                    yield out_raw.raw[: outbuf.pos]
    finally:
        lib.ZSTD_freeDCtx(dctx)


def open_text(path: Path, encoding: str = "utf-8") -> io.TextIOBase:
    """Open a file for line iteration, transparently decompressing .zst frames."""
    path = Path(path)
    if is_zstd(path):
        fh = open(path, "rb")

        def gen() -> Iterator[bytes]:
            with fh:
                yield from decompress_chunks(fh)

        return io.TextIOWrapper(
            _ChunkReader(gen()), encoding=encoding, errors="replace"
        )
    return open(path, "r", encoding=encoding, errors="replace")


class _ChunkReader(io.RawIOBase):
    """File-like adapter over an iterator of byte chunks."""

    def __init__(self, chunks: Iterator[bytes]):
        self._chunks = chunks
        self._buf = b""

    def readable(self) -> bool:
        return True

    def readinto(self, b) -> int:
        while len(self._buf) < len(b):
            try:
                self._buf += next(self._chunks)
            except StopIteration:
                break
        n = min(len(b), len(self._buf))
        b[:n] = self._buf[:n]
        self._buf = self._buf[n:]
        return n


def compress_bytes(data: bytes, level: int = 3) -> bytes:
    """Single-shot zstd compression (fixture building and round-trip tests)."""
    lib = _load()
    bound = lib.ZSTD_compressBound(len(data))
    dst = ctypes.create_string_buffer(bound)
    written = _check(
        lib, lib.ZSTD_compress(dst, bound, data, len(data), level)
    )
    return dst.raw[:written]


def compress_file(src: Path, dst: Path, level: int = 3) -> None:
    dst.write_bytes(compress_bytes(Path(src).read_bytes(), level))
