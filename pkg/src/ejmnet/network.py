"""Global state of an N-party ring network.

Source ``i`` connects party ``i`` to party ``i+1 (mod N)``. In the assembled
state party ``i`` owns qubit slots ``(2i, 2i+1)``: slot ``2i`` holds its half
of source ``i-1`` and slot ``2i+1`` its half of source ``i``. For three
singlets this reproduces the expansion

    (|101010> - |001011> - |101100> + |001101>
     - |110010> + |010011> + |110100> - |010101>) / (2 sqrt2)

term by term, signs included.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import qmath
from .sources import SourceSpec, realize


class NetworkTooLarge(ValueError):
    """Dense assembly would exceed the supported register size."""


@dataclass(frozen=True)
class RingNetwork:
    sources: tuple[SourceSpec, ...]

    def __init__(self, sources: Sequence[SourceSpec]):
        object.__setattr__(self, "sources", tuple(sources))
        if len(self.sources) < 3:
            raise ValueError("a ring network needs at least 3 parties")

    @property
    def n_parties(self) -> int:
        return len(self.sources)

    @property
    def is_pure(self) -> bool:
        return all(s.is_pure for s in self.sources)

    def rotated(self, shift: int) -> "RingNetwork":
        """Same ring relabelled so that old party ``shift`` becomes party 0."""
        k = shift % self.n_parties
        return RingNetwork(self.sources[k:] + self.sources[:k])


def party_permutation(n_parties: int) -> tuple[int, ...]:
    """Qubit permutation from source order to party-major order.

    In source order qubit ``2i`` is source ``i``'s first half (party ``i``)
    and ``2i+1`` its second half (party ``i+1``).
    """
    if n_parties < 3:
        raise ValueError("a ring network needs at least 3 parties")
    perm = []
    for i in range(n_parties):
        perm.append((2 * i - 1) % (2 * n_parties))
        perm.append(2 * i)
    return tuple(perm)


def assemble(net: RingNetwork, mixed: bool | None = None) -> np.ndarray:
    """Global state vector (pure networks) or density matrix, party-major."""
    if mixed is None:
        mixed = not net.is_pure
    if not mixed and not net.is_pure:
        raise ValueError("network has mixed sources; assemble as a density matrix")
    n = 2 * net.n_parties
    limit = qmath.MAX_DENSITY_QUBITS if mixed else qmath.MAX_VECTOR_QUBITS
    if n > limit:
        raise NetworkTooLarge(
            f"{n} qubits exceeds the dense limit of {limit}; use ring contraction instead"
        )
    if mixed:
        state = qmath.kron_all(realize(s) for s in net.sources)
    else:
        state = qmath.kron_all(s.ket() for s in net.sources)
    return qmath.permute_qubits(state, party_permutation(net.n_parties))
