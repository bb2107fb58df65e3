"""Mixup regularization, robustness and generalization lab.

Thin python surface over the C++ core: dataset generators, linear and
two-layer ReLU models, the mixup loss and its closed-form quadratic
decomposition, adversarial surrogates, theorem chain checks, Rademacher
complexity bounds and the SGD training loop.
"""

from ._mixlab import *  # noqa: F401,F403
from ._mixlab import __doc__ as _core_doc  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
