"""The three succinct SLP encodings."""

from .common import CorruptEncoding, Encoding
from .scheme_i import EncodingI, build_encoding_I
from .scheme_ii import EncodingII, build_encoding_II
from .scheme_iii import EncodingIII, NoMonotoneOrder, build_encoding_III, monotone_order

SCHEMES = {"I": 1, "II": 2, "III": 3}
CLASSES = {1: EncodingI, 2: EncodingII, 3: EncodingIII}


def build(slp, scheme, backend=None) -> Encoding:
    """Build encoding ``scheme`` (1/2/3 or 'I'/'II'/'III') for ``slp``."""
    s = SCHEMES.get(scheme, scheme)
    if s == 1:
        return build_encoding_I(slp, backend=backend)
    if s == 2:
        return build_encoding_II(slp, backend=backend)
    if s == 3:
        return build_encoding_III(slp, backend=backend)
    raise ValueError(f"unknown scheme {scheme!r}")


__all__ = [
    "CLASSES",
    "CorruptEncoding",
    "Encoding",
    "EncodingI",
    "EncodingII",
    "EncodingIII",
    "NoMonotoneOrder",
    "SCHEMES",
    "build",
    "build_encoding_I",
    "build_encoding_II",
    "build_encoding_III",
    "monotone_order",
]
