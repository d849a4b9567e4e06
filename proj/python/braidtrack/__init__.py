"""Braid group generators of plane curves and line arrangements."""

import json as _json

try:
    from braidtrack._core import (  # type: ignore
        arrangement,
        arrangement_lines,
        braid,
        branch_points,
        exponent_sum,
        free_reduce,
        poly_json,
        render,
        restrict_to_line,
        verify,
        word_permutation,
        __version__,
    )
except ImportError:  # build-tree layout: the extension sits on sys.path
    from _core import (  # type: ignore
        arrangement,
        arrangement_lines,
        braid,
        branch_points,
        exponent_sum,
        free_reduce,
        poly_json,
        render,
        restrict_to_line,
        verify,
        word_permutation,
        __version__,
    )

__all__ = [
    "arrangement",
    "arrangement_lines",
    "braid",
    "braid_report",
    "arrangement_report",
    "branch_points",
    "exponent_sum",
    "free_reduce",
    "poly_json",
    "render",
    "restrict_to_line",
    "verify",
    "word_permutation",
    "__version__",
]


def braid_report(curve, **kwargs):
    """Like braid(), but parses the JSON report into a dict."""
    return _json.loads(braid(curve, **kwargs))


def arrangement_report(matrix, **kwargs):
    """Like arrangement(), but parses the JSON report into a dict."""
    return _json.loads(arrangement(matrix, **kwargs))
