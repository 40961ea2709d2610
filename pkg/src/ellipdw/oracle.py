"""Brute-force partition-function routes.

Three independent evaluators of the same quantity:

* ``partition_bruteforce`` -- contracts the double-row monodromy product
  between the four boundary states, applying each R/K factor as a local
  update on a 2^(N+1) state vector (cost O(N^2 2^N)),
* ``partition_enumeration`` -- a micro-oracle that literally sums Boltzmann
  weights over all edge-spin configurations of the N x 2N reflecting
  lattice (exponential; N <= 2),
* ``partition_face_route`` -- the face-type route: a product of double-row
  pseudo-particle creation operators between the all-up bra and all-down
  ket, built from the dynamical one-row monodromy matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import BoundaryConfig, boundary_state_factors, vertex_K_matrix
from .elliptic import ModularSetup, sigma
from .errors import SingularityError, SizeError
from .rmatrices import (GENERICITY_FLOOR, WeightVector, _checked_sigma,
                        sos_R_matrix, vertex_R_matrix)
from .tensor import (DenseOperator, apply_one_site, apply_two_site,
                     popcount_groups, product_state)

MAX_BRUTEFORCE_N = 12
MAX_ENUMERATION_N = 2
MAX_FACE_N = 10


@dataclass(frozen=True)
class SpectralConfig:
    """Spectral data: N vertical-line parameters u and N inhomogeneities xi."""

    u: tuple
    xi: tuple

    def __post_init__(self):
        if len(self.u) != len(self.xi):
            raise ValueError(f"len(u) = {len(self.u)} != len(xi) = {len(self.xi)}")

    @property
    def n(self) -> int:
        return len(self.u)

    def require_generic(self, setup: ModularSetup, floor: float = GENERICITY_FLOOR):
        """All sigma combinations entering denominators must clear the floor."""
        u = np.asarray(self.u, dtype=complex)
        xi = np.asarray(self.xi, dtype=complex)
        eta = setup.eta
        pairs = []
        if self.n > 1:
            iu, ju = np.triu_indices(self.n, k=1)
            pairs += [xi[iu] - xi[ju], xi[iu] + xi[ju],
                      u[iu] - u[ju], u[iu] + u[ju],
                      u[iu] - u[ju] + eta, u[ju] - u[iu] + eta,
                      u[iu] + u[ju] + eta]
        um, xm = np.meshgrid(u, xi, indexing="ij")
        pairs += [(um - xm).ravel(), (um + xm).ravel(),
                  (um - xm + eta).ravel(), (um + xm + eta).ravel()]
        vals = np.abs(sigma(np.concatenate(pairs), setup))
        if float(vals.min()) < floor:
            raise SingularityError(
                f"spectral configuration degenerate: min |sigma| = {vals.min():.2e}")


# ---------------------------------------------------------------------------
# Vertex-type double-row monodromy and its contraction.
# ---------------------------------------------------------------------------

def _apply_double_row(phi, alpha_u, spectral, bc, setup, aux_axis, floor):
    """Apply the double-row factor sequence for one bar line to ``phi``.

    ``phi`` has quantum sites on axes 0..N-1 and the bar (auxiliary) site on
    ``aux_axis``; factors act right-to-left: +xi branch (site N..1), the
    reflection matrix, then the -xi branch (site 1..N).
    """
    n = spectral.n
    for j in range(n, 0, -1):
        r = vertex_R_matrix(alpha_u + spectral.xi[j - 1], setup, floor)
        phi = apply_two_site(phi, r, j - 1, aux_axis)
    phi = apply_one_site(phi, vertex_K_matrix(alpha_u, bc, setup, floor), aux_axis)
    for j in range(1, n + 1):
        r = vertex_R_matrix(alpha_u - spectral.xi[j - 1], setup, floor)
        phi = apply_two_site(phi, r, aux_axis, j - 1)
    return phi


def double_row_monodromy(u_i: complex, spectral: SpectralConfig,
                         bc: BoundaryConfig, setup: ModularSetup,
                         aux="aux", floor: float = GENERICITY_FLOOR) -> DenseOperator:
    """Double-row monodromy matrix on sites (aux, 1..N) as a dense operator."""
    n = spectral.n
    dim = 2 ** (n + 1)
    cols = np.eye(dim, dtype=complex)
    # treat the identity as a batch of basis kets with layout
    # (aux, site1..siteN, batch) and move aux behind the quantum axes,
    # which is where _apply_double_row expects it
    phi = np.moveaxis(cols.reshape((2,) * (n + 1) + (dim,)), 0, n)
    phi = _apply_double_row(phi, u_i, spectral, bc, setup, aux_axis=n, floor=floor)
    mat = np.moveaxis(phi, n, 0).reshape(dim, dim)
    return DenseOperator((aux,) + tuple(range(1, n + 1)), mat)


def partition_bruteforce(spectral: SpectralConfig, bc: BoundaryConfig,
                         setup: ModularSetup,
                         floor: float = GENERICITY_FLOOR) -> complex:
    """Contract the monodromy product between the four boundary states."""
    n = spectral.n
    if n > MAX_BRUTEFORCE_N:
        raise SizeError(f"bruteforce route limited to N <= {MAX_BRUTEFORCE_N}, got {n}")
    if n == 0:
        return 1.0 + 0.0j
    spectral.require_generic(setup, floor)
    bc.require_generic(setup, n, spectral.u, floor)
    omega1_bra, omega2bar_bra, omega1bar_ket, omega2_ket = boundary_state_factors(
        bc, spectral.xi, spectral.u, setup, floor)
    psi = product_state(omega2_ket).reshape((2,) * n)
    for a in range(n, 0, -1):
        phi = np.tensordot(psi, omega1bar_ket[a - 1], axes=0)  # aux on last axis
        phi = _apply_double_row(phi, spectral.u[a - 1], spectral, bc, setup,
                                aux_axis=n, floor=floor)
        psi = np.tensordot(phi, omega2bar_bra[a - 1], axes=([n], [0]))
    return complex(np.dot(product_state(omega1_bra), psi.ravel()))


def partition_enumeration(spectral: SpectralConfig, bc: BoundaryConfig,
                          setup: ModularSetup,
                          floor: float = GENERICITY_FLOOR) -> complex:
    """Sum of Boltzmann-weight products over all edge-spin configurations.

    Every internal edge of the reflecting lattice carries a spin; each bulk
    vertex contributes the matching eight-vertex R element, each reflection
    end a K element, and the open boundary edges the boundary-state
    components.  Zero-weight local configurations prune the recursion.
    """
    n = spectral.n
    if n > MAX_ENUMERATION_N:
        raise SizeError(f"enumeration limited to N <= {MAX_ENUMERATION_N}, got {n}")
    if n == 0:
        return 1.0 + 0.0j
    spectral.require_generic(setup, floor)
    omega1_bra, omega2bar_bra, omega1bar_ket, omega2_ket = boundary_state_factors(
        bc, spectral.xi, spectral.u, setup, floor)
    r_plus = [[vertex_R_matrix(spectral.u[a] + spectral.xi[j], setup, floor)
               for j in range(n)] for a in range(n)]
    r_minus = [[vertex_R_matrix(spectral.u[a] - spectral.xi[j], setup, floor)
                for j in range(n)] for a in range(n)]
    k_end = [vertex_K_matrix(spectral.u[a], bc, setup, floor)
             for a in range(n)]
    total = 0.0 + 0.0j

    def close(frontier, w):
        nonlocal total
        for j in range(n):
            w = w * omega1_bra[j][frontier[j]]
        total += w

    def bar_line(a, frontier, w):
        # a counts down: bar line a acts on the current frontier spins.
        def minus_branch(j, b, frontier, w):
            if j == n:
                w = w * omega2bar_bra[a][b]
                if a == 0:
                    close(frontier, w)
                else:
                    bar_line(a - 1, frontier, w)
                return
            q = frontier[j]
            for bp in (0, 1):
                for qp in (0, 1):
                    amp = r_minus[a][j][2 * bp + qp, 2 * b + q]
                    if amp != 0.0:
                        minus_branch(j + 1, bp, frontier[:j] + (qp,) + frontier[j + 1:],
                                     w * amp)

        def k_step(b, frontier, w):
            for bp in (0, 1):
                amp = k_end[a][bp, b]
                if amp != 0.0:
                    minus_branch(0, bp, frontier, w * amp)

        def plus_branch(j, b, frontier, w):
            if j < 0:
                k_step(b, frontier, w)
                return
            q = frontier[j]
            for qp in (0, 1):
                for bp in (0, 1):
                    amp = r_plus[a][j][2 * qp + bp, 2 * q + b]
                    if amp != 0.0:
                        plus_branch(j - 1, bp, frontier[:j] + (qp,) + frontier[j + 1:],
                                    w * amp)

        for b0 in (0, 1):
            plus_branch(n - 1, b0, frontier, w * omega1bar_ket[a][b0])

    # seed: sum over the ket components of the quantum boundary state
    def seed(j, frontier, w):
        if j == n:
            bar_line(n - 1, frontier, w)
            return
        for q in (0, 1):
            seed(j + 1, frontier + (q,), w * omega2_ket[j][q])

    seed(0, (), 1.0 + 0.0j)
    return complex(total)


# ---------------------------------------------------------------------------
# Face-type route: dynamical one-row monodromy and creation operators.
# ---------------------------------------------------------------------------

def _face_layer(phi, l: WeightVector, u_arg, k, n, setup, floor):
    """Apply R_{0,k}(u - xi_k; l - eta*sum_{m<k} h^(m)) to phi.

    phi axes: (aux, site1..siteN); the dynamical argument on each popcount
    class of the preceding sites is l shifted by (n1 - n2) steps of e_hat_1.
    """
    prefix_bits = k - 1
    blk = phi.reshape(2, 2 ** prefix_bits, 2, 2 ** (n - k))
    out = np.empty_like(blk)
    groups = popcount_groups(prefix_bits)
    for n2, idx in enumerate(groups):
        n1 = prefix_bits - n2
        r = sos_R_matrix(u_arg, l.shifted(1, setup.eta, n1 - n2), setup, floor)
        r4 = r.reshape(2, 2, 2, 2)
        out[:, idx] = np.einsum("ABas,apsS->ApBS", r4, blk[:, idx])
    return out.reshape(phi.shape)


def face_monodromy_apply(l: WeightVector, u: complex, j_in: int, psi,
                         spectral: SpectralConfig, setup: ModularSetup,
                         floor: float = GENERICITY_FLOOR):
    """Apply the one-row monodromy to ``psi``; returns both auxiliary rows.

    Output ``out[i-1]`` is T(l|u)^i_{j_in} psi.
    """
    n = spectral.n
    phi = np.zeros((2,) + (2,) * n, dtype=complex)
    phi[j_in - 1] = np.asarray(psi, dtype=complex).reshape((2,) * n)
    for k in range(1, n + 1):
        phi = _face_layer(phi, l, u - spectral.xi[k - 1], k, n, setup, floor)
    return phi


def face_one_row_monodromy(l: WeightVector, u: complex,
                           spectral: SpectralConfig, setup: ModularSetup,
                           floor: float = GENERICITY_FLOOR):
    """The four entries T(l|u)^i_j as dense operators on the quantum space."""
    n = spectral.n
    dim = 2 ** n
    mats = {(i, j): np.zeros((dim, dim), dtype=complex)
            for i in (1, 2) for j in (1, 2)}
    for col in range(dim):
        basis = np.zeros(dim, dtype=complex)
        basis[col] = 1.0
        for j in (1, 2):
            phi = face_monodromy_apply(l, u, j, basis, spectral, setup, floor)
            for i in (1, 2):
                mats[(i, j)][:, col] = phi[i - 1].ravel()
    sites = tuple(range(1, n + 1))
    return {key: DenseOperator(sites, mat) for key, mat in mats.items()}


def _creation_scalars(m: WeightVector, bc: BoundaryConfig, u: complex,
                      spectral: SpectralConfig, setup: ModularSetup, floor):
    lam = bc.weight
    pref = sigma(m.m21, setup) / _checked_sigma(lam.m21, setup, floor, "sigma(l21)")
    for xk in spectral.xi:
        pref = pref * sigma(u + xk, setup) / _checked_sigma(
            u + xk + setup.eta, setup, floor, "sigma(u+xi+eta)")
    k1 = sigma(bc.lambda1 + bc.zeta - u, setup) / _checked_sigma(
        bc.lambda1 + bc.zeta + u, setup, floor, "sigma(l1+zeta+u)")
    k2 = sigma(bc.lambda2 + bc.zeta - u, setup) / _checked_sigma(
        bc.lambda2 + bc.zeta + u, setup, floor, "sigma(l2+zeta+u)")
    return pref, k1, k2


def face_creation_apply(m: WeightVector, bc: BoundaryConfig, u: complex, psi,
                        spectral: SpectralConfig, setup: ModularSetup,
                        floor: float = GENERICITY_FLOOR):
    """Apply the double-row creation operator to a state vector."""
    lam = bc.weight
    eta = setup.eta
    pref, k1, k2 = _creation_scalars(m, bc, u, spectral, setup, floor)
    t = face_monodromy_apply(lam.shifted(2, eta, -1), -u - eta, 2, psi,
                             spectral, setup, floor)[1]
    t = face_monodromy_apply(lam, u, 1, t, spectral, setup, floor)[1]
    s = face_monodromy_apply(lam.shifted(1, eta, -1), -u - eta, 1, psi,
                             spectral, setup, floor)[1]
    s = face_monodromy_apply(lam, u, 2, s, spectral, setup, floor)[1]
    return pref * (k1 * t - k2 * s)


def face_creation_operator(m: WeightVector, bc: BoundaryConfig, u: complex,
                           spectral: SpectralConfig, setup: ModularSetup,
                           floor: float = GENERICITY_FLOOR) -> DenseOperator:
    """The creation operator as a dense matrix on the quantum space."""
    n = spectral.n
    dim = 2 ** n
    mat = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        basis = np.zeros(dim, dtype=complex)
        basis[col] = 1.0
        mat[:, col] = face_creation_apply(m, bc, u, basis, spectral, setup,
                                          floor).ravel()
    return DenseOperator(tuple(range(1, n + 1)), mat)


def partition_face_route(spectral: SpectralConfig, bc: BoundaryConfig,
                         setup: ModularSetup,
                         floor: float = GENERICITY_FLOOR) -> complex:
    """Product of N creation operators between <1...1| and |2...2>."""
    n = spectral.n
    if n > MAX_FACE_N:
        raise SizeError(f"face route limited to N <= {MAX_FACE_N}, got {n}")
    if n == 0:
        return 1.0 + 0.0j
    spectral.require_generic(setup, floor)
    bc.require_generic(setup, n, spectral.u, floor)
    lam = bc.weight
    psi = np.zeros((2,) * n, dtype=complex)
    psi[(1,) * n] = 1.0
    for step in range(n, 0, -1):
        m = lam.shifted(1, setup.eta, -(2 * step - n))
        psi = face_creation_apply(m, bc, spectral.u[step - 1], psi,
                                  spectral, setup, floor)
    return complex(psi[(0,) * n])
