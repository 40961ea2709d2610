"""Brute-force routes: monodromy contraction, configuration enumeration,
and the face-type creation-operator route."""

import numpy as np
import pytest

from ellipdw import (SpectralConfig, double_row_monodromy,
                     face_creation_operator, face_one_row_monodromy,
                     partition_bruteforce, partition_enumeration,
                     partition_face_route)
from ellipdw.boundary import boundary_state_factors, vertex_K_matrix
from ellipdw.errors import SizeError
from ellipdw.rmatrices import sos_R_matrix, vertex_R_matrix
from ellipdw.tensor import embed_matrix

from conftest import random_weight


@pytest.fixture(scope="module")
def spec1():
    return SpectralConfig(u=(0.27 + 0.06j,), xi=(0.13 - 0.04j,))


def spec_n(draw, n, seed, setup, bc):
    return draw(n, seed, setup, bc)


def test_monodromy_n1_hand_product(spec1, bc, setup):
    """N=1: the double-row matrix equals the hand-composed R K R product."""
    t = double_row_monodromy(spec1.u[0], spec1, bc, setup)
    u, xi = spec1.u[0], spec1.xi[0]
    hand = (embed_matrix(vertex_R_matrix(u - xi, setup), (0, 1), 2)
            @ embed_matrix(vertex_K_matrix(u, bc, setup), (0,), 2)
            @ embed_matrix(vertex_R_matrix(u + xi, setup), (1, 0), 2))
    assert np.max(np.abs(t.mat - hand)) <= 1e-12


@pytest.mark.parametrize("n,seed", [(1, 100), (2, 101), (3, 99)])
def test_monodromy_exchange_relation(n, seed, draw, bc, setup):
    """R T R T = T R T R on two auxiliary spaces."""
    spec = draw(n, seed, setup, bc)
    u_i, u_j = 0.21 + 0.04j, 0.33 - 0.07j
    t_i = double_row_monodromy(u_i, spec, bc, setup, aux="bi")
    t_j = double_row_monodromy(u_j, spec, bc, setup, aux="bj")
    sites = ("bi", "bj") + tuple(range(1, n + 1))
    ti = t_i.on_sites(sites).mat
    tj = t_j.on_sites(sites).mat
    def rbar(z, first, second):
        from ellipdw.tensor import DenseOperator
        return DenseOperator((first, second),
                             vertex_R_matrix(z, setup)).on_sites(sites).mat
    lhs = rbar(u_i - u_j, "bi", "bj") @ ti @ rbar(u_i + u_j, "bj", "bi") @ tj
    rhs = tj @ rbar(u_i + u_j, "bi", "bj") @ ti @ rbar(u_i - u_j, "bj", "bi")
    assert np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)) <= 1e-9


def test_monodromy_permutation_simplification(bc, setup):
    """At xi_1 = u_i the outgoing factor R(u_i - xi_1) degenerates to the
    permutation; the monodromy equals the product with P inserted there."""
    u = 0.27 + 0.06j
    spec = SpectralConfig(u=(u,), xi=(u,))
    t = double_row_monodromy(u, spec, bc, setup)
    p = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
                 dtype=complex)
    hand = (embed_matrix(p, (0, 1), 2)
            @ embed_matrix(vertex_K_matrix(u, bc, setup), (0,), 2)
            @ embed_matrix(vertex_R_matrix(2 * u, setup), (1, 0), 2))
    assert np.max(np.abs(t.mat - hand)) <= 1e-12


def test_bruteforce_n1_hand_contraction(spec1, bc, setup):
    o1b, o2bb, o1bk, o2k = boundary_state_factors(bc, spec1.xi, spec1.u, setup)
    t = double_row_monodromy(spec1.u[0], spec1, bc, setup)
    z_hand = np.kron(o2bb[0], o1b[0]) @ t.mat @ np.kron(o1bk[0], o2k[0])
    z = partition_bruteforce(spec1, bc, setup)
    assert abs(z - z_hand) <= 1e-12 * abs(z_hand)


@pytest.mark.parametrize("n,seed", [(1, 102), (2, 103)])
def test_enumeration_matches_bruteforce(n, seed, draw, bc, setup):
    spec = draw(n, seed, setup, bc)
    z_en = partition_enumeration(spec, bc, setup)
    z_bf = partition_bruteforce(spec, bc, setup)
    tol = 1e-12 if n == 1 else 1e-10
    assert abs(z_en - z_bf) <= tol * abs(z_bf)


def test_enumeration_size_guard(draw, bc, setup):
    spec = draw(3, 104, setup, bc)
    with pytest.raises(SizeError):
        partition_enumeration(spec, bc, setup)


def test_bruteforce_u_permutation_symmetry(draw, bc, setup):
    spec = draw(2, 105, setup, bc)
    swapped = SpectralConfig(u=spec.u[::-1], xi=spec.xi)
    z = partition_bruteforce(spec, bc, setup)
    assert abs(partition_bruteforce(swapped, bc, setup) - z) <= 1e-9 * abs(z)


def test_bruteforce_xi_permutation_symmetry(draw, bc, setup):
    spec = draw(3, 106, setup, bc)
    swapped = SpectralConfig(u=spec.u, xi=spec.xi[::-1])
    z = partition_bruteforce(spec, bc, setup)
    assert abs(partition_bruteforce(swapped, bc, setup) - z) <= 1e-9 * abs(z)


def test_face_monodromy_n1_unwinds_to_sos(spec1, setup):
    from conftest import random_weight
    rng = np.random.default_rng(41)
    l = random_weight(rng, setup)
    u = 0.23 + 0.07j
    t = face_one_row_monodromy(l, u, spec1, setup)
    r = sos_R_matrix(u - spec1.xi[0], l, setup)
    for i in (1, 2):
        for j in (1, 2):
            for out in (1, 2):
                for inp in (1, 2):
                    lhs = t[(i, j)].mat[out - 1, inp - 1]
                    rhs = r[2 * (i - 1) + (out - 1), 2 * (j - 1) + (inp - 1)]
                    assert abs(lhs - rhs) <= 1e-13


def test_face_monodromy_weight_structure(draw, bc, setup):
    """T^2_1 lowers the number of down spins by exactly one."""
    rng = np.random.default_rng(42)
    l = random_weight(rng, setup)
    spec = draw(3, 107, setup, bc)
    t21 = face_one_row_monodromy(l, 0.21 - 0.05j, spec, setup)[(2, 1)].mat
    n = 3
    for col in range(2 ** n):
        for row in range(2 ** n):
            if bin(row).count("1") != bin(col).count("1") - 1:
                assert t21[row, col] == 0.0


def test_face_monodromy_explicit_sum_n2(draw, bc, setup):
    """Entries match the explicit double sum over intermediate indices."""
    rng = np.random.default_rng(43)
    l = random_weight(rng, setup)
    spec = draw(2, 108, setup, bc)
    u = 0.19 + 0.08j
    t = face_one_row_monodromy(l, u, spec, setup)
    eta = setup.eta
    shifts = {1: (1, 0.5, -0.5), 2: (2, -0.5, 0.5)}
    for i in (1, 2):
        for j in (1, 2):
            for i1p in (1, 2):
                for i2p in (1, 2):
                    for i1 in (1, 2):
                        for i2 in (1, 2):
                            acc = 0.0
                            r1 = sos_R_matrix(u - spec.xi[0], l, setup)
                            from ellipdw import WeightVector
                            _, e1, e2 = shifts[i1p]
                            l_shift = WeightVector(l.m1 - eta * e1, l.m2 - eta * e2)
                            r2 = sos_R_matrix(u - spec.xi[1], l_shift, setup)
                            for a1 in (1, 2):
                                acc += (r2[2 * (i - 1) + (i2p - 1), 2 * (a1 - 1) + (i2 - 1)]
                                        * r1[2 * (a1 - 1) + (i1p - 1), 2 * (j - 1) + (i1 - 1)])
                            row = 2 * (i1p - 1) + (i2p - 1)
                            col = 2 * (i1 - 1) + (i2 - 1)
                            assert abs(t[(i, j)].mat[row, col] - acc) <= 1e-12


def test_creation_operator_weight_structure(draw, bc, setup):
    """Applied to all-down it lands on single-flip states."""
    spec = draw(2, 109, setup, bc)
    lam = bc.weight
    m = lam.shifted(1, setup.eta, -2)
    op = face_creation_operator(m, bc, spec.u[1], spec, setup).mat
    psi = np.zeros(4, dtype=complex)
    psi[3] = 1.0
    out = op @ psi
    assert abs(out[0]) < 1e-12 * np.max(np.abs(out))  # no double flip
    assert abs(out[3]) < 1e-12 * np.max(np.abs(out))  # no zero flip
    assert np.max(np.abs(out[1:3])) > 0


def test_creation_operator_n1_hand_expansion(spec1, bc, setup):
    from ellipdw import sigma
    lam = bc.weight
    eta = setup.eta
    m = lam.shifted(1, eta, -1)
    u, xi = spec1.u[0], spec1.xi[0]
    s = lambda z: sigma(z, setup)
    k1 = s(bc.lambda1 + bc.zeta - u) / s(bc.lambda1 + bc.zeta + u)
    k2 = s(bc.lambda2 + bc.zeta - u) / s(bc.lambda2 + bc.zeta + u)
    term1 = k1 * (s(eta) * s(u - xi + lam.m12) / (s(u - xi + eta) * s(lam.m12)))
    b21 = s(u - xi) * s(lam.m21 - eta) / (s(u - xi + eta) * s(lam.m21))
    c_t = s(eta) * s(lam.m12 - u - xi) / (s(-u - xi) * s(lam.m12 + eta))
    term2 = k2 * b21 * c_t
    expected = (s(m.m21) / s(lam.m21)) * (s(u + xi) / s(u + xi + eta)) * (term1 - term2)
    op = face_creation_operator(m, bc, u, spec1, setup).mat
    assert abs(op[0, 1] - expected) <= 1e-12 * abs(expected)


def test_scalar_product_equals_bruteforce_n2(draw, bc, setup):
    """Product of creation-operator matrices between extremal states."""
    spec = draw(2, 110, setup, bc)
    lam = bc.weight
    acc = np.zeros(4, dtype=complex)
    acc[3] = 1.0
    for step in (2, 1):
        m = lam.shifted(1, setup.eta, -(2 * step - 2))
        acc = face_creation_operator(m, bc, spec.u[step - 1], spec, setup).mat @ acc
    z_bf = partition_bruteforce(spec, bc, setup)
    assert abs(acc[0] - z_bf) <= 1e-9 * abs(z_bf)


@pytest.mark.parametrize("n,seed", [(1, 111), (2, 112), (3, 113)])
def test_face_route_matches_bruteforce(n, seed, draw, bc, setup):
    spec = draw(n, seed, setup, bc)
    z_face = partition_face_route(spec, bc, setup)
    z_bf = partition_bruteforce(spec, bc, setup)
    assert abs(z_face - z_bf) <= 1e-9 * max(abs(z_face), abs(z_bf))


def test_face_route_xi_symmetry(draw, bc, setup):
    spec = draw(2, 114, setup, bc)
    z = partition_face_route(spec, bc, setup)
    swapped = SpectralConfig(u=spec.u, xi=spec.xi[::-1])
    assert abs(partition_face_route(swapped, bc, setup) - z) <= 1e-9 * abs(z)


def test_empty_products(bc, setup):
    empty = SpectralConfig(u=(), xi=())
    assert partition_face_route(empty, bc, setup) == 1.0
    assert partition_bruteforce(empty, bc, setup) == 1.0
    assert partition_enumeration(empty, bc, setup) == 1.0


def test_bruteforce_size_guard(bc, setup):
    spec = SpectralConfig(u=(0.1,) * 13, xi=(0.2,) * 13)
    with pytest.raises(SizeError):
        partition_bruteforce(spec, bc, setup)
