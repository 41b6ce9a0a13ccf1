"""Kernel selection: compiled extension when available, numpy fallback otherwise.

Set FIBERLENS_FORCE_FALLBACK=1 to ignore the extension (used by the parity
tests and the benchmark).  Both implementations are deterministic; the tree
kernel is additionally bitwise-identical across the two.
"""

import os

from . import fallback

try:
    from . import _ext as _compiled
except ImportError:
    _compiled = None

if _compiled is not None and not os.environ.get("FIBERLENS_FORCE_FALLBACK"):
    _active = _compiled
    IMPLEMENTATION = "compiled"
else:
    _active = fallback
    IMPLEMENTATION = "fallback"

HAVE_COMPILED = _compiled is not None
compiled = _compiled

tree_importance_raw = _active.tree_importance_raw
svm_dual_cd = _active.svm_dual_cd
