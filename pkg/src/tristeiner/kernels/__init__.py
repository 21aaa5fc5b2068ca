"""Layout kernel backend selection.

The compiled extension is preferred when it imports; the pure-Python
twin is the fallback and can be forced with TRISTEINER_PURE=1 in the
environment. Both expose the same two functions with identical numeric
behaviour, so callers never need to know which one they got; BACKEND
records the choice for diagnostics and benchmarks.
"""

import os

if os.environ.get("TRISTEINER_PURE") == "1":
    from .pure import layout_objective, minimize_layout

    BACKEND = "pure"
else:
    try:
        from ._fast import layout_objective, minimize_layout

        BACKEND = "fast"
    except ImportError:
        from .pure import layout_objective, minimize_layout

        BACKEND = "pure"

__all__ = ["BACKEND", "layout_objective", "minimize_layout"]
