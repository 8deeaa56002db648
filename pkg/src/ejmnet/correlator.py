"""Outcome statistics of ring networks measured with EJM(theta) at every party.

Two independent evaluation routes are provided:

* :func:`distribution` projects the dense global state (``network.assemble``)
  onto product EJM states.
* :func:`ring_distribution` and the ``ring_*`` aggregates contract a ring of
  4x4 transfer operators, one per party and outcome, so that aggregate
  queries cost O(N) small matrix products instead of 4**N terms.

Party and outcome indices are 0-based in arrays; :class:`OutcomeDistribution`
item access uses outcome labels 1..4.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from . import qmath
from .ejm import ejm_basis
from .network import NetworkTooLarge, RingNetwork, assemble
from .sources import realize

MAX_RING_DISTRIBUTION_PARTIES = 10


class ZeroProbabilityError(ZeroDivisionError):
    """Conditioning event has zero probability."""


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    n_parties: int
    probs: np.ndarray  # shape (4,) * n_parties, 0-based outcome axes

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (4,) * self.n_parties:
            raise ValueError(f"probability tensor has shape {p.shape}")
        tol = qmath.TOL.equality
        if p.min() < -tol or p.max() > 1 + tol:
            raise ValueError(f"probabilities outside [0, 1]: [{p.min()}, {p.max()}]")
        if abs(p.sum() - 1) > 1e-10:
            raise ValueError(f"probabilities sum to {p.sum()}")
        p = np.clip(p, 0.0, 1.0)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def __getitem__(self, outcome: Iterable[int]) -> float:
        outcome = tuple(outcome)
        if len(outcome) != self.n_parties or not all(1 <= a <= 4 for a in outcome):
            raise KeyError(outcome)
        return float(self.probs[tuple(a - 1 for a in outcome)])

    def items(self) -> Iterator[tuple[tuple[int, ...], float]]:
        for idx in itertools.product(range(4), repeat=self.n_parties):
            yield tuple(a + 1 for a in idx), float(self.probs[idx])

    def marginal(self, party: int) -> np.ndarray:
        axes = tuple(i for i in range(self.n_parties) if i != party)
        return self.probs.sum(axis=axes)

    def max_abs_difference(self, other: "OutcomeDistribution") -> float:
        return float(np.max(np.abs(self.probs - other.probs)))


def _apply_per_party(tensor: np.ndarray, op: np.ndarray, axes: Iterable[int]) -> np.ndarray:
    for ax in axes:
        tensor = np.moveaxis(np.tensordot(op, tensor, axes=([1], [ax])), 0, ax)
    return tensor


def distribution(net: RingNetwork, theta: float) -> OutcomeDistribution:
    """Exact p(a_1..a_N) from the dense global state."""
    n = net.n_parties
    bra = ejm_basis(theta).states.conj()  # row b is <Phi_b|
    state = assemble(net)
    if state.ndim == 1:
        amps = _apply_per_party(state.reshape((4,) * n), bra, range(n))
        probs = np.abs(amps) ** 2
    else:
        rho = state.reshape((4,) * (2 * n))
        rho = _apply_per_party(rho, bra, range(n))
        rho = _apply_per_party(rho, bra.conj(), range(n, 2 * n))
        dim = 4**n
        probs = np.real(np.diagonal(rho.reshape(dim, dim))).reshape((4,) * n)
    return OutcomeDistribution(n, probs)


# --- ring contraction -------------------------------------------------------
#
# Bond between party i and party i+1 is the ket/bra index pair of source i's
# qubits, flattened to 4. For party i and outcome a,
#   P_a[(l, l'), (r, r')] = Pi_a[(l, r), (l', r')]
# and for source i with density matrix rho,
#   S[(r, r'), (m, m')] = rho[(r', m'), (r, m)],
# so that Tr[(x) Pi (x) rho] = Tr[prod_i P_{a_i} S_i].


def _party_tensors(theta: float) -> np.ndarray:
    proj = ejm_basis(theta).projectors.reshape(4, 2, 2, 2, 2)  # a, l, r, l', r'
    return proj.transpose(0, 1, 3, 2, 4).reshape(4, 4, 4)


def _source_tensor(rho: np.ndarray) -> np.ndarray:
    return rho.reshape(2, 2, 2, 2).transpose(2, 0, 3, 1).reshape(4, 4)


def transfer_operators(net: RingNetwork, theta: float) -> np.ndarray:
    """Array ``T[i, a]`` (shape N x 4 x 4 x 4) of per-party transfer matrices."""
    party = _party_tensors(theta)
    ops = []
    for spec in net.sources:
        src = _source_tensor(realize(spec))
        ops.append(np.einsum("aij,jk->aik", party, src))
    return np.array(ops)


def _real_trace(m: np.ndarray) -> float:
    t = np.trace(m)
    if abs(t.imag) > 1e-10:
        raise ArithmeticError(f"transfer trace has imaginary part {t.imag}")
    return float(t.real)


def ring_distribution(net: RingNetwork, theta: float) -> OutcomeDistribution:
    """Full p(a_1..a_N) via ring contraction (N up to 10)."""
    n = net.n_parties
    if n > MAX_RING_DISTRIBUTION_PARTIES:
        raise NetworkTooLarge(
            f"full distribution over 4**{n} outcomes not supported; use ring aggregates"
        )
    ops = transfer_operators(net, theta)
    acc = ops[0]  # (outcomes so far, 4, 4)
    for i in range(1, n):
        acc = np.einsum("xij,ajk->xaik", acc, ops[i]).reshape(-1, 4, 4)
    probs = np.real(np.einsum("xii->x", acc)).reshape((4,) * n)
    return OutcomeDistribution(n, probs)


def ring_prob_equal(net: RingNetwork, theta: float, parties: Iterable[int]) -> float:
    """Probability that every party in ``parties`` reports the same outcome."""
    n = net.n_parties
    group = set(parties)
    if not group <= set(range(n)):
        raise ValueError(f"party indices {sorted(group)} out of range for N={n}")
    ops = transfer_operators(net, theta)
    summed = ops.sum(axis=1)
    if len(group) <= 1:
        prod = np.eye(4)
        for i in range(n):
            prod = prod @ summed[i]
        return _real_trace(prod)
    total = 0.0
    for k in range(4):
        prod = np.eye(4)
        for i in range(n):
            prod = prod @ (ops[i, k] if i in group else summed[i])
        total += _real_trace(prod)
    return total


def ring_prob_all_equal(net: RingNetwork, theta: float) -> float:
    return ring_prob_equal(net, theta, range(net.n_parties))


def ring_conditional_all_given_prefix(net: RingNetwork, theta: float) -> float:
    """p(a_1 = ... = a_N | a_1 = ... = a_{N-1}) by ring contraction."""
    n = net.n_parties
    den = ring_prob_equal(net, theta, range(n - 1))
    if den <= 0:
        raise ZeroProbabilityError("prefix-equal event has zero probability")
    return ring_prob_all_equal(net, theta) / den


# --- aggregates on explicit distributions ------------------------------------


def prob_equal(d: OutcomeDistribution, parties: Iterable[int]) -> float:
    group = sorted(set(parties))
    if not group or group[0] < 0 or group[-1] >= d.n_parties:
        raise ValueError(f"party indices {group} out of range for N={d.n_parties}")
    total = 0.0
    for k in range(4):
        idx = [slice(None)] * d.n_parties
        for i in group:
            idx[i] = k
        total += float(np.sum(d.probs[tuple(idx)]))
    return total


def prob_all_equal(d: OutcomeDistribution) -> float:
    return float(sum(d.probs[(k,) * d.n_parties] for k in range(4)))


def prob_pair_equal(d: OutcomeDistribution, i: int, j: int) -> float:
    if i == j:
        raise ValueError("prob_pair_equal needs two distinct parties")
    return prob_equal(d, (i, j))


def prob_conditional_all_given_prefix(d: OutcomeDistribution) -> float:
    den = prob_equal(d, range(d.n_parties - 1))
    if den <= 0:
        raise ZeroProbabilityError("prefix-equal event has zero probability")
    return prob_all_equal(d) / den


def prob_conditional(d: OutcomeDistribution, target: int, given: Iterable[int]) -> float:
    """p(a_target = k | all parties in ``given`` equal k), summed over k."""
    given = sorted(set(given))
    den = prob_equal(d, given)
    if den <= 0:
        raise ZeroProbabilityError("conditioning event has zero probability")
    return prob_equal(d, given + [target]) / den


# --- closed form for the all-singlet polygon ---------------------------------


def _mul_sqrt3(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    # (a + b sqrt3)(c + d sqrt3)
    a, b = x
    c, d = y
    return (a * c + 3 * b * d, a * d + b * c)


def _pow_sqrt3(x: tuple[int, int], n: int) -> tuple[int, int]:
    out = (1, 0)
    for _ in range(n):
        out = _mul_sqrt3(out, x)
    return out


def polygon_closed_form(n_parties: int) -> Fraction:
    """All-equal probability of the N-singlet ring at theta = 0, exactly.

    ``((-sqrt3 - 1)**N + (sqrt3 - 1)**N)**2 / 4**(2N - 1)``; the two powers are
    conjugates in Z[sqrt3], so their sum is an integer.
    """
    if n_parties < 3:
        raise ValueError("polygon needs at least 3 parties")
    a = _pow_sqrt3((-1, -1), n_parties)
    b = _pow_sqrt3((-1, 1), n_parties)
    s = (a[0] + b[0], a[1] + b[1])
    assert s[1] == 0
    return Fraction(s[0] ** 2, 4 ** (2 * n_parties - 1))
