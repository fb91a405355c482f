"""Word-packed Boolean matrices and their product with witness recovery.

Rows are packed into 64-bit words, least significant bit first, with the
padding bits past ``cols`` always zero.  The multiplier transposes and
packs the right operand once, then computes every output entry with word
ANDs and an any-bit test.  Witness recovery is deterministic: each 1-entry
of the product records the smallest inner index k with a[i,k] = b[k,j] = 1.

The multiplier is combinatorial by design; anything faster can be slotted
in behind :func:`mul` / :func:`mul_with_witness` without touching callers.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import DimensionError

WORD_BITS = 64


def _pack_rows(bools: np.ndarray) -> np.ndarray:
    rows, cols = bools.shape
    words = (cols + WORD_BITS - 1) // WORD_BITS
    if rows == 0:
        return np.zeros((0, words), dtype=np.uint64)
    pad = words * WORD_BITS - cols
    if pad:
        bools = np.concatenate(
            [bools, np.zeros((rows, pad), dtype=bool)], axis=1)
    packed = np.packbits(bools, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64)


class BitMatrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray):
        self.rows = rows
        self.cols = cols
        self.data = data

    @staticmethod
    def from_bool(bools) -> "BitMatrix":
        arr = np.asarray(bools, dtype=bool)
        if arr.ndim != 2:
            raise DimensionError("expected a 2-D boolean array")
        return BitMatrix(arr.shape[0], arr.shape[1], _pack_rows(arr))

    @staticmethod
    def zeros(rows: int, cols: int) -> "BitMatrix":
        words = (cols + WORD_BITS - 1) // WORD_BITS
        return BitMatrix(rows, cols, np.zeros((rows, words), dtype=np.uint64))

    def to_bool(self) -> np.ndarray:
        bits = np.unpackbits(self.data.view(np.uint8), axis=1, bitorder="little")
        return bits[:, :self.cols].astype(bool)

    def transpose_packed(self) -> "BitMatrix":
        return BitMatrix.from_bool(self.to_bool().T)

    def __getitem__(self, idx) -> bool:
        i, j = idx
        return bool((self.data[i, j // WORD_BITS] >> np.uint64(j % WORD_BITS)) & np.uint64(1))

    def __eq__(self, other) -> bool:
        return (isinstance(other, BitMatrix) and self.rows == other.rows
                and self.cols == other.cols and np.array_equal(self.data, other.data))


def mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Boolean matrix product a . b."""
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bt = b.transpose_packed()
    out = _kernels.bool_product(a.data, bt.data)
    return BitMatrix.from_bool(out.astype(bool))


def mul_with_witness(a: BitMatrix, b: BitMatrix) -> tuple[BitMatrix, np.ndarray]:
    """Product plus a witness matrix: entry (i, j) holds the smallest k with
    a[i,k] = b[k,j] = 1, or -1 where the product is 0."""
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bt = b.transpose_packed()
    out, wit = _kernels.bool_product_witness(a.data, bt.data)
    return BitMatrix.from_bool(out.astype(bool)), wit


def first_witness(a: BitMatrix, bt: BitMatrix, i: int, j: int) -> int:
    """Smallest witness k for one product entry, given b already transposed."""
    return int(_kernels.first_common_bit(a.data[i], bt.data[j]))
