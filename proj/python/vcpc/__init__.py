"""Colored arborescence codes, isomorphism and subtree queries."""

import json

from . import _core
from ._core import CodecError, MatcherError, ParseError, ValidationError

__all__ = [
    "encode", "decode", "canon", "is_subarborescence", "undirected_subtree", "run",
    "CodecError", "MatcherError", "ParseError", "ValidationError",
]


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def encode(tree):
    """Code dict {"parents", "colors", "n"} for a tree record (dict or JSON text)."""
    return json.loads(_core.encode(_text(tree)))


def decode(code, strict=False):
    return json.loads(_core.decode(_text(code), strict))


def canon(tree):
    return json.loads(_core.canon(_text(tree)))


def is_subarborescence(query, host):
    """Witness index list if the query code occurs in the host code, else None."""
    return _core.is_subarborescence(_text(query), _text(host))


def undirected_subtree(a, b):
    return _core.undirected_subtree(_text(a), _text(b))


def run(*args, input=""):
    """Runs a CLI command in process; returns (exit code, stdout, stderr)."""
    return _core.run([str(a) for a in args], input)
