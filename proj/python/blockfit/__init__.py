"""Community detection for stochastic block models.

Thin Python surface over the native extension: generators, spectral
initialization, the block-model fitters, and label metrics.
"""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:  # pragma: no cover - test-tree layout without an installed wheel
    from _core import *  # type: ignore # noqa: F401,F403
    from _core import __version__  # type: ignore # noqa: F401
