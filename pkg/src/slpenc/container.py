"""Binary container for encodings.

Layout (all integers little-endian)::

    "SLPX" | version u8 | scheme u8 | N, n, n_prime, sigma, start as u64
    | sigma alphabet bytes
    | per component: bit length u64, then the bits packed LSB-first

Components follow the encoding's ``component_names()`` order.  Integer
arrays take their width from the header (``ceil(lg N)`` for G,
``ceil(lg(n + sigma))`` otherwise).
"""

from __future__ import annotations

import struct

from .encodings import CLASSES
from .succinct import BitVec, IntArray, Louds, StructureError
from .trie import ceil_lg

MAGIC = b"SLPX"
VERSION = 1
_HEAD = struct.Struct("<4sBB5Q")
_LEN = struct.Struct("<Q")

# components stored as bit vectors; everything else is an integer array
_BITVECS = {"P", "D", "B", "M_E", "S"}


class ContainerError(ValueError):
    """The byte stream is not a well-formed container."""


def serialize(enc) -> bytes:
    parts = [
        _HEAD.pack(MAGIC, VERSION, enc.scheme, enc.N, enc.n, enc.n_prime, enc.sigma, enc.start),
        enc.alphabet,
    ]
    for name in enc.component_names():
        c = enc.component(name)
        if isinstance(c, Louds):
            c = c.stored
        nbits = c.nbits if isinstance(c, IntArray) else len(c)
        parts.append(_LEN.pack(nbits))
        parts.append(c.to_bytes())
    return b"".join(parts)


def deserialize(data: bytes, *, backend=None):
    """Rebuild an encoding; raises ContainerError or a StructureError subclass."""
    data = bytes(data)
    if len(data) < _HEAD.size:
        raise ContainerError("truncated header")
    magic, version, scheme, N, n, n_prime, sigma, start = _HEAD.unpack_from(data, 0)
    if magic != MAGIC:
        raise ContainerError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ContainerError(f"unsupported version {version}")
    if scheme not in CLASSES:
        raise ContainerError(f"unknown scheme {scheme}")
    if sigma < 1 or sigma > 256 or n < 1:
        raise StructureError(f"implausible header n={n} sigma={sigma}")
    pos = _HEAD.size
    alphabet = data[pos : pos + sigma]
    if len(alphabet) != sigma:
        raise ContainerError("truncated alphabet")
    pos += sigma
    cls = CLASSES[scheme]
    names = ["P", "D", *cls.extra_components, "G", "B"]
    sym_w = ceil_lg(n + sigma)
    len_w = ceil_lg(N)
    comps = {}
    for name in names:
        if pos + _LEN.size > len(data):
            raise ContainerError(f"truncated before component {name}")
        (nbits,) = _LEN.unpack_from(data, pos)
        pos += _LEN.size
        nbytes = (nbits + 7) // 8
        if pos + nbytes > len(data):
            raise ContainerError(f"component {name} runs past the end")
        raw = data[pos : pos + nbytes]
        pos += nbytes
        if name in _BITVECS:
            comps[name] = BitVec.from_bytes(raw, nbits, backend=backend)
        elif name == "T_E":
            comps[name] = Louds(BitVec.from_bytes(raw, nbits, backend=backend))
        else:
            w = len_w if name == "G" else sym_w
            if w == 0 or nbits % w:
                raise StructureError(f"component {name}: {nbits} bits is not a multiple of width {w}")
            comps[name] = IntArray.from_bytes(raw, w, nbits // w, backend=backend)
    if pos != len(data):
        raise ContainerError(f"{len(data) - pos} trailing bytes")
    return cls(n=n, n_prime=n_prime, sigma=sigma, N=N, start=start, alphabet=alphabet, **comps)


def save(enc, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize(enc))


def load(path, *, backend=None):
    with open(path, "rb") as fh:
        return deserialize(fh.read(), backend=backend)
