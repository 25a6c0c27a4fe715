"""Exact chain-level symmetric L-theory: splitting, gluing, signatures of Poincare pairs."""

from symsig.rings import ZZ, QQ, LZ, LQ, Laurent, cyclic_group_ring, RingMap
from symsig.linalg import Matrix

__all__ = ["ZZ", "QQ", "LZ", "LQ", "Laurent", "cyclic_group_ring", "RingMap", "Matrix"]
__version__ = "0.1.0"
