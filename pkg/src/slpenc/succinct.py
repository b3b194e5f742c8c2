"""Rank/select bit vectors, packed integer arrays, post-order trees and LOUDS.

All positions are 1-based.  ``rank(b, i)`` counts ``b`` in ``B[1..i]`` and
``select(b, j)`` returns the position of the j-th ``b``; out-of-range
arguments are clamped (rank: 0 below, total count above; select: 0 for
``j <= 0``, ``len + 1`` past the last occurrence).

Bits are packed least-significant-bit first: bit ``i`` lives in byte
``(i - 1) // 8``.
"""

from __future__ import annotations

import numpy as np

from . import _backend
from ._pykernels import BLOCK_BITS, SAMPLE, WORD


class StructureError(ValueError):
    """A bit string does not have the shape its role requires."""


def _pack_bits(bits) -> tuple[np.ndarray, int]:
    if isinstance(bits, str):
        arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        if arr.size and arr.max() > 1:
            raise ValueError("bit string may only contain '0' and '1'")
    else:
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
    nbits = int(arr.size)
    packed = np.packbits(arr, bitorder="little")
    return _bytes_to_words(packed.tobytes()), nbits


def _bytes_to_words(data: bytes) -> np.ndarray:
    pad = (-len(data)) % 8
    return np.frombuffer(data + b"\0" * pad, dtype="<u8").astype(np.uint64)


def _words_to_bytes(words, nbits: int) -> bytes:
    raw = np.asarray(words, dtype=np.uint64).astype("<u8").tobytes()
    return raw[: (nbits + 7) // 8]


def _kernels(backend):
    if backend is None:
        return _backend.kernels
    mods = _backend.available_backends()
    if backend not in mods:
        raise ValueError(f"kernel backend {backend!r} is not available")
    return mods[backend]


class BitVec:
    """Static bit string with constant-time-ish rank and select."""

    # the kernel's total rank/select/access are bound per instance in _init,
    # shadowing the documented methods below to skip one call layer
    __slots__ = ("_rs", "_words", "nbits", "backend", "__dict__")

    def __init__(self, bits=(), *, backend: str | None = None):
        words, nbits = _pack_bits(bits)
        self._init(words, nbits, backend)

    def _init(self, words, nbits, backend):
        kern = _kernels(backend)
        self.backend = kern.BACKEND
        self.nbits = nbits
        self._words = words
        rs = self._rs = kern.RankSelect(words, nbits)
        self.access = rs.access
        self.rank1 = rs.rank1
        self.rank0 = rs.rank0
        self.select1 = rs.select1
        self.select0 = rs.select0

    @classmethod
    def from_bytes(cls, data: bytes, nbits: int, *, backend: str | None = None) -> "BitVec":
        if len(data) != (nbits + 7) // 8:
            raise StructureError(f"{len(data)} bytes cannot hold exactly {nbits} bits")
        if nbits % 8 and data[-1] >> (nbits % 8):
            raise StructureError("nonzero padding bits after the last bit")
        obj = cls.__new__(cls)
        obj._init(_bytes_to_words(data), nbits, backend)
        return obj

    def to_bytes(self) -> bytes:
        return _words_to_bytes(self._words, self.nbits)

    def __len__(self) -> int:
        return self.nbits

    def __iter__(self):
        acc = self._rs.access
        for i in range(1, self.nbits + 1):
            yield acc(i)

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self)

    def __repr__(self) -> str:
        s = str(self)
        if len(s) > 64:
            s = s[:61] + "..."
        return f"BitVec({s!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVec):
            return NotImplemented
        return self.nbits == other.nbits and self.to_bytes() == other.to_bytes()

    @property
    def ones(self) -> int:
        return self._rs.ones

    @property
    def zeros(self) -> int:
        return self._rs.zeros

    def access(self, i: int) -> int:
        """Bit ``i`` (1-based); IndexError outside ``[1..len]``."""
        return self._rs.access(i)

    def rank1(self, i: int) -> int:
        """Ones in ``B[1..i]``; 0 for ``i < 1``, all ones for ``i > len``."""
        return self._rs.rank1(i)

    def rank0(self, i: int) -> int:
        return self._rs.rank0(i)

    def rank(self, b: int, i: int) -> int:
        return self.rank1(i) if b else self.rank0(i)

    def select1(self, j: int) -> int:
        """Position of the ``j``-th one; 0 for ``j <= 0``, ``len + 1`` past the last."""
        return self._rs.select1(j)

    def select0(self, j: int) -> int:
        return self._rs.select0(j)

    def select(self, b: int, j: int) -> int:
        return self.select1(j) if b else self.select0(j)

    def excess(self, i: int) -> int:
        """``rank0(i) - rank1(i)``."""
        i = max(0, min(i, self.nbits))
        return i - 2 * self._rs.rank1(i) if i else 0

    def bwdsearch(self, i: int, d: int = -1) -> int:
        """Largest ``j <= i`` with ``excess(j) == excess(i) + d``; -1 if none.

        ``j`` may be 0 (the empty prefix).  Only negative ``d`` is supported.
        """
        if not 0 <= i <= self.nbits:
            raise IndexError(f"position {i} outside [0..{self.nbits}]")
        return self._rs.bwdsearch(i, d)

    def directory_bits(self) -> int:
        """Bits spent on the rank/select directory (reported as overhead)."""
        nblocks = (self.nbits + BLOCK_BITS - 1) // BLOCK_BITS
        samples = -(-self.ones // SAMPLE) + -(-self.zeros // SAMPLE)
        return 64 * (nblocks + 1) + 64 * samples

    def excess_directory_bits(self) -> int:
        """Bits of the per-word minimum-excess summary used by bwdsearch."""
        return 16 * ((self.nbits + WORD - 1) // WORD)


class IntArray:
    """Fixed-width packed array of unsigned integers, 0-based indexing."""

    __slots__ = ("_pk", "_words", "width", "length", "get")

    def __init__(self, values, width: int, *, backend: str | None = None):
        vals = np.asarray(list(values), dtype=np.uint64)
        if width < 0 or width > 64:
            raise ValueError("width must be in [0..64]")
        if vals.size and width < 64 and int(vals.max()) >> width:
            raise ValueError(f"value {int(vals.max())} does not fit in {width} bits")
        if width and vals.size:
            shifts = np.arange(width, dtype=np.uint64)
            bits = ((vals[:, None] >> shifts) & np.uint64(1)).astype(np.uint8).ravel()
            words = _bytes_to_words(np.packbits(bits, bitorder="little").tobytes())
        else:
            words = np.zeros(0, dtype=np.uint64)
        self._init(words, width, int(vals.size), backend)

    def _init(self, words, width, length, backend):
        kern = _kernels(backend)
        self._words = words
        self.width = width
        self.length = length
        self._pk = kern.PackedInts(words, width, length)
        self.get = self._pk.get

    @classmethod
    def from_bytes(cls, data: bytes, width: int, length: int, *, backend: str | None = None) -> "IntArray":
        nbits = width * length
        if len(data) != (nbits + 7) // 8:
            raise StructureError(f"{len(data)} bytes cannot hold {length} entries of {width} bits")
        if nbits % 8 and data[-1] >> (nbits % 8):
            raise StructureError("nonzero padding bits after the last entry")
        obj = cls.__new__(cls)
        obj._init(_bytes_to_words(data), width, length, backend)
        return obj

    @property
    def nbits(self) -> int:
        return self.width * self.length

    def to_bytes(self) -> bytes:
        return _words_to_bytes(self._words, self.nbits)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return int(self._pk.get(i))

    def __iter__(self):
        g = self._pk.get
        for i in range(self.length):
            yield int(g(i))

    def tolist(self) -> list[int]:
        return list(self)

    def __repr__(self) -> str:
        return f"IntArray(width={self.width}, {self.tolist()[:16]!r}{'...' if self.length > 16 else ''})"


class PostOrderTree:
    """Full binary tree stored as post-order bits (leaf 0, internal 1).

    A view over ``bv[lo + 1 .. lo + size]``; nodes are identified by their
    post-order rank ``1..size`` inside the view.  The root is ``size``.
    """

    __slots__ = ("bv", "lo", "size", "_zeros_before")

    def __init__(self, bv: BitVec, lo: int = 0, size: int | None = None):
        if size is None:
            size = len(bv) - lo
        if size < 1 or size % 2 == 0 or lo < 0 or lo + size > len(bv):
            raise StructureError(f"invalid tree slice lo={lo} size={size}")
        self.bv = bv
        self.lo = lo
        self.size = size
        self._zeros_before = bv.rank0(lo)

    @classmethod
    def from_bits(cls, bits, **kw) -> "PostOrderTree":
        return cls(BitVec(bits, **kw))

    @property
    def root(self) -> int:
        return self.size

    @property
    def leaves(self) -> int:
        return (self.size + 1) // 2

    def validate(self) -> None:
        """Raise StructureError unless the slice encodes a full binary tree."""
        e = 0
        acc = self.bv._rs.access
        for k in range(1, self.size + 1):
            e += -1 if acc(self.lo + k) else 1
            if e < 1:
                raise StructureError(f"prefix excess drops to {e} at node {k}")
        if e != 1:
            raise StructureError(f"final excess is {e}, expected 1")

    def excess(self, i: int) -> int:
        return self.bv.excess(self.lo + i) - self.bv.excess(self.lo)

    def isleaf(self, v: int) -> bool:
        return self.bv._rs.access(self.lo + v) == 0

    def rchild(self, v: int) -> int:
        if self.isleaf(v):
            raise StructureError(f"node {v} is a leaf")
        return v - 1

    def bwdsearch(self, i: int, d: int = -1) -> int | None:
        """Largest local ``j <= i`` with ``E[j] == E[i] + d``, or None."""
        j = self.bv.bwdsearch(self.lo + i, d)
        if j <= self.lo:
            return None
        return j - self.lo

    def lchild(self, v: int) -> int:
        if self.isleaf(v):
            raise StructureError(f"node {v} is a leaf")
        j = self.bv.bwdsearch(self.lo + v - 1, -1)
        if j <= self.lo:
            raise StructureError(f"no left child found for node {v}: corrupt tree")
        return j - self.lo

    def rmleaf(self, v: int) -> int:
        bv = self.bv
        return bv.select0(bv.rank0(self.lo + v)) - self.lo

    def leafrank(self, v: int) -> int:
        return self.bv.rank0(self.lo + v) - self._zeros_before


class Louds:
    """Level-order unary degree sequence of an ordered tree.

    The logical bit string is the super-root ``10`` followed by ``1^d 0`` for
    every node in breadth-first order.  Its first bit is always 1, so only the
    remaining ``2k`` bits are stored (``k`` nodes).  Nodes are identified by
    breadth-first rank ``1..k``.
    """

    __slots__ = ("stored", "nodes")

    def __init__(self, stored: BitVec):
        if stored.zeros != stored.ones + 2:
            raise StructureError("stored LOUDS bits need exactly two more 0s than 1s")
        self.stored = stored
        self.nodes = stored.ones + 1

    @classmethod
    def from_degrees(cls, degrees, **kw) -> "Louds":
        """Build from child counts listed in breadth-first order."""
        parts = ["0"]
        for d in degrees:
            parts.append("1" * d + "0")
        return cls(BitVec("".join(parts), **kw))

    @property
    def bits(self) -> str:
        return "1" + str(self.stored)

    def __len__(self) -> int:
        return len(self.stored)

    def degree(self, r: int) -> int:
        if not 1 <= r <= self.nodes:
            raise IndexError(f"node {r} outside [1..{self.nodes}]")
        s = self.stored
        return s.select0(r + 1) - s.select0(r) - 1

    def child(self, r: int, i: int) -> int:
        d = self.degree(r)
        if not 1 <= i <= d:
            raise IndexError(f"node {r} has degree {d}; no child {i}")
        s = self.stored
        return 1 + s.rank1(s.select0(r) + i)
