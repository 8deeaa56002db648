import itertools

import numpy as np
import pytest

from ejmnet import qmath
from ejmnet.network import NetworkTooLarge, RingNetwork, assemble, party_permutation
from ejmnet.sources import Partial, Singlet, Werner, reference_product

# the two printed AABBCC expansions, literally
SSS_TERMS = "+101010 -001011 -101100 +001101 -110010 +010011 +110100 -010101".split()
SSP_TERMS = "+101010 -001011 -101100 +001101 -111010 +011011 +111100 -011101".split()


def printed_state(terms):
    v = np.zeros(64, dtype=complex)
    for t in terms:
        v[int(t[1:], 2)] += (1 if t[0] == "+" else -1) / (2 * np.sqrt(2))
    return v


def test_three_singlet_expansion():
    psi = assemble(RingNetwork([Singlet()] * 3))
    np.testing.assert_allclose(psi, printed_state(SSS_TERMS), atol=1e-15)
    assert psi[0b101010] == pytest.approx(1 / (2 * np.sqrt(2)))
    assert psi[0b001011] == pytest.approx(-1 / (2 * np.sqrt(2)))


def test_product_expansion_term_by_term():
    # the printed state carries (|01> - |11>) on the A-B edge, i.e. source 0
    psi = assemble(RingNetwork([reference_product(), Singlet(), Singlet()]))
    np.testing.assert_allclose(psi, printed_state(SSP_TERMS), atol=1e-15)


def test_party_permutation_brute_force():
    # search the per-party slot orders; exactly one reproduces the printed expansion
    source_state = qmath.kron_all([qmath.ket("01") - qmath.ket("10")] * 3) / (2 * np.sqrt(2))
    target = printed_state(SSS_TERMS)
    halves = [(5, 0), (1, 2), (3, 4)]  # party A, B, C: (half of previous edge, half of next edge)
    matches = []
    for flips in itertools.product([False, True], repeat=3):
        perm = []
        for (prev, nxt), flip in zip(halves, flips):
            perm += [nxt, prev] if flip else [prev, nxt]
        if np.allclose(qmath.permute_qubits(source_state, perm), target, atol=1e-15):
            matches.append(tuple(perm))
    assert matches == [party_permutation(3)]


@pytest.mark.parametrize("n", [3, 4, 5, 7])
def test_party_permutation_inverse(n):
    perm = party_permutation(n)
    v = np.random.default_rng(n).normal(size=4**n)
    back = qmath.permute_qubits(qmath.permute_qubits(v, perm), qmath.inverse_permutation(perm))
    np.testing.assert_array_equal(back, v)


def test_party_permutation_rejects_small_rings():
    with pytest.raises(ValueError):
        party_permutation(2)
    with pytest.raises(ValueError):
        RingNetwork([Singlet()] * 2)


def test_all_product_network_unentangled():
    net = RingNetwork([reference_product(), Partial(1.0), Partial(0.0)])
    rho = qmath.dm(assemble(net))
    for party in range(3):
        keep = {2 * party, 2 * party + 1}
        assert qmath.entropy(qmath.partial_trace(rho, keep)) < 1e-10


def test_singlet_ring_entangles_neighbours():
    rho = qmath.dm(assemble(RingNetwork([Singlet()] * 3)))
    # each party holds halves of two singlets: 2 bits with the rest
    assert qmath.entropy(qmath.partial_trace(rho, {0, 1})) == pytest.approx(2.0)


@pytest.mark.parametrize(
    "sources",
    [
        [Singlet()] * 3,
        [Werner(0.4), Singlet(), reference_product()],
        [Partial(0.2), Werner(0.9), Singlet(), Partial(0.7, 1)],
    ],
)
def test_normalization(sources):
    net = RingNetwork(sources)
    state = assemble(net)
    if state.ndim == 1:
        assert abs(np.linalg.norm(state) - 1) < 1e-12
    else:
        assert abs(np.trace(state) - 1) < 1e-12
        assert qmath.is_density_matrix(state)


def test_pure_and_mixed_assembly_agree():
    net = RingNetwork([reference_product(), Partial(0.3), Singlet()])
    psi = assemble(net)
    rho = assemble(net, mixed=True)
    assert np.max(np.abs(rho - qmath.dm(psi))) < 1e-12


def test_mixed_network_cannot_be_pure():
    with pytest.raises(ValueError):
        assemble(RingNetwork([Werner(0.5)] * 3), mixed=False)


def test_size_limits():
    with pytest.raises(NetworkTooLarge, match="ring contraction"):
        assemble(RingNetwork([Singlet()] * 13))
    with pytest.raises(NetworkTooLarge):
        assemble(RingNetwork([Werner(0.5)] * 7))


def test_rotation_relabels_qubits():
    net = RingNetwork([reference_product(), Partial(0.3), Singlet(), Singlet()])
    shifted = net.rotated(1)
    psi = assemble(net)
    # new party j is old party j+1: new slots (2j, 2j+1) <- old (2j+2, 2j+3)
    perm = [(q + 2) % 8 for q in range(8)]
    np.testing.assert_allclose(assemble(shifted), qmath.permute_qubits(psi, perm), atol=1e-15)
