"""Succinct encodings of straight-line programs with random access."""

from ._backend import BACKEND, available_backends
from .access import QueryStats, access, extract
from .container import deserialize, serialize
from .encodings import NoMonotoneOrder, build
from .slp import InvalidGrammar, Slp, compress, expand, naive_access, naive_extract

__all__ = [
    "BACKEND",
    "InvalidGrammar",
    "NoMonotoneOrder",
    "QueryStats",
    "Slp",
    "access",
    "available_backends",
    "build",
    "compress",
    "deserialize",
    "expand",
    "extract",
    "naive_access",
    "naive_extract",
    "serialize",
]
