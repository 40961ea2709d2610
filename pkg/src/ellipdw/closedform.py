"""Closed-form evaluations of the partition function and their proof steps.

The payload routes:

* ``normalized_z_permsum`` -- the symmetric sum over S_N of per-permutation
  sigma-products (O(N!), vectorized over permutations, deterministically
  chunked for threading),
* ``normalized_z_determinant`` -- the single-determinant representation
  (O(N^3), accumulated in log space so large N stays representable),
* ``partition_prefactor`` -- the lambda-product (M = N/2, even N only)
  times the (u, xi) ratio product turning the normalized value into the
  full partition function,
* ``full_z`` -- prefactor x normalized value by either route; odd N uses an
  oracle-calibrated lambda-factor and flags it,
* ``recursion_residual`` -- the N -> N-1 recursion obeyed by the sum,
* ``pole_matching_pair`` / ``residue_estimate`` / ``pole_scan`` -- the two
  meromorphic functions whose equal poles and residues prove the
  determinant formula, with epsilon-ring residue estimation.
"""

from __future__ import annotations

import cmath
import itertools
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .boundary import BoundaryConfig
from .elliptic import ModularSetup, sigma
from .errors import ConditioningWarning, OddSizeError, SingularityError, SizeError
from .oracle import SpectralConfig, partition_bruteforce
from .rmatrices import GENERICITY_FLOOR

MAX_PERMSUM_N = 9
MAX_DETERMINANT_N = 512
PERMSUM_CHUNK = 40320
THREADS_ENV = "ELLIPDW_THREADS"


def worker_count() -> int:
    """Worker cap from ELLIPDW_THREADS (default 1; results never depend on it)."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _tree_sum(values):
    """Pairwise-tree reduction in fixed order (bit-stable across workers)."""
    vals = list(values)
    if not vals:
        return 0.0 + 0.0j
    while len(vals) > 1:
        vals = [vals[i] + vals[i + 1] if i + 1 < len(vals) else vals[i]
                for i in range(0, len(vals), 2)]
    return vals[0]


@dataclass(frozen=True)
class NormalizedZ:
    """Normalized partition value with its provenance route."""

    value: complex
    n: int
    route: str


def _sigma_grid(z, setup, floor, what):
    vals = sigma(np.asarray(z, dtype=complex), setup)
    if float(np.min(np.abs(vals))) < floor:
        raise SingularityError(f"|{what}| below genericity floor")
    return vals


def _permsum_tables(spectral, bc, setup, floor):
    """Per-permutation factors reduced to N x N lookup tables.

    term(s) = prod_n A[n, s(n)] * prod_{n<k} B[n, s(k)] * G[s(n), s(k)].
    """
    n = spectral.n
    u = np.asarray(spectral.u, dtype=complex)
    xi = np.asarray(spectral.xi, dtype=complex)
    eta = setup.eta
    uu = u[:, None]
    xx = xi[None, :]
    a_num = (sigma(bc.lambda1 + bc.zeta - xx, setup)
             * sigma(bc.lambda2 + bc.zeta + xx, setup)
             * sigma(2 * uu, setup) * sigma(eta, setup))
    a_den = (_sigma_grid(bc.lambda1 + bc.zeta + uu, setup, floor, "sigma(l1+z+u)")
             * _sigma_grid(bc.lambda2 + bc.zeta + uu, setup, floor, "sigma(l2+z+u)")
             * _sigma_grid(uu - xx + eta, setup, floor, "sigma(u-xi+eta)")
             * _sigma_grid(uu + xx, setup, floor, "sigma(u+xi)"))
    table_a = a_num / a_den
    table_b = (sigma(uu - xx, setup) * sigma(uu + xx + eta, setup)
               / (_sigma_grid(uu - xx + eta, setup, floor, "sigma(u-xi+eta)")
                  * _sigma_grid(uu + xx, setup, floor, "sigma(u+xi)")))
    xd = xi[:, None] - xi[None, :]
    np.fill_diagonal(xd, 1.0)  # placeholder; diagonal never used
    g_den = sigma(xd, setup)
    if n > 1 and float(np.min(np.abs(g_den[~np.eye(n, dtype=bool)]))) < floor:
        raise SingularityError("|sigma(xi_i - xi_j)| below genericity floor")
    table_g = sigma(xd + eta, setup) / g_den
    return table_a, table_b, table_g


def normalized_z_permsum(spectral: SpectralConfig, bc: BoundaryConfig,
                         setup: ModularSetup,
                         floor: float = GENERICITY_FLOOR) -> complex:
    """Symmetric permutation-sum form of the normalized partition function."""
    n = spectral.n
    if n > MAX_PERMSUM_N:
        raise SizeError(f"permsum route limited to N <= {MAX_PERMSUM_N}, got {n}")
    if n == 0:
        return 1.0 + 0.0j
    table_a, table_b, table_g = _permsum_tables(spectral, bc, setup, floor)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    rows = np.arange(n)

    def chunk_sum(chunk):
        term = table_a[rows[None, :], chunk].prod(axis=1)
        for a in range(n):
            for k in range(a + 1, n):
                term = term * table_b[a, chunk[:, k]] * table_g[chunk[:, a], chunk[:, k]]
        return np.add.reduce(term)

    chunks = [perms[i:i + PERMSUM_CHUNK] for i in range(0, len(perms), PERMSUM_CHUNK)]
    workers = worker_count()
    if workers == 1 or len(chunks) == 1:
        partials = [chunk_sum(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(chunk_sum, chunks))
    return complex(_tree_sum(partials))


# ---------------------------------------------------------------------------
# Determinant route (log-space).
# ---------------------------------------------------------------------------

def _log_product(values) -> complex:
    """Sum of complex logs; the real part may exceed the double exp range."""
    v = np.asarray(values, dtype=complex).ravel()
    return complex(np.sum(np.log(v)))


def _log_det(matrix: np.ndarray, warn_context: str) -> complex:
    """log(det) via partial-pivoted LU with a pivot-ratio digit-loss warning."""
    lu, piv = scipy.linalg.lu_factor(matrix, check_finite=False)
    diag = np.diag(lu)
    if np.any(diag == 0):
        raise SingularityError(f"singular matrix in {warn_context}")
    mags = np.abs(diag)
    if mags.max() / mags.min() >= 1e6:
        warnings.warn(
            f"{warn_context}: pivot ratio {mags.max() / mags.min():.2e} "
            "indicates >= 6 digits lost", ConditioningWarning, stacklevel=3)
    n = len(diag)
    sign_flips = int(np.sum(piv != np.arange(n)))
    return complex(np.sum(np.log(diag))) + (1j * math.pi) * (sign_flips % 2)


def _log_normalized_z_determinant(spectral, bc, setup, floor) -> complex:
    n = spectral.n
    if n == 0:
        return 0.0 + 0.0j
    u = np.asarray(spectral.u, dtype=complex)
    xi = np.asarray(spectral.xi, dtype=complex)
    eta = setup.eta
    uu, xx = u[:, None], xi[None, :]
    s_eta = sigma(eta, setup)
    minus = _sigma_grid(uu - xx, setup, floor, "sigma(u-xi)")
    plus_eta = _sigma_grid(uu + xx + eta, setup, floor, "sigma(u+xi+eta)")
    minus_eta = _sigma_grid(uu - xx + eta, setup, floor, "sigma(u-xi+eta)")
    plus = _sigma_grid(uu + xx, setup, floor, "sigma(u+xi)")
    row = (sigma(2 * u, setup)
           / (_sigma_grid(bc.lambda1 + bc.zeta + u, setup, floor, "sigma(l1+z+u)")
              * _sigma_grid(bc.lambda2 + bc.zeta + u, setup, floor, "sigma(l2+z+u)")))
    col = (sigma(bc.lambda1 + bc.zeta - xi, setup)
           * sigma(bc.lambda2 + bc.zeta + xi, setup))
    kernel = s_eta / (minus * plus_eta * minus_eta * plus)
    matrix = row[:, None] * kernel * col[None, :]
    log_det = _log_det(matrix, "normalized_z_determinant")
    log_num = _log_product(minus) + _log_product(plus_eta)
    log_den = 0.0 + 0.0j
    if n > 1:
        ia, ib = np.triu_indices(n, k=1)
        log_den += _log_product(_sigma_grid(u[ib] - u[ia], setup, floor, "sigma(ua-ub)"))
        log_den += _log_product(_sigma_grid(u[ib] + u[ia] + eta, setup, floor,
                                            "sigma(ua+ub+eta)"))
        log_den += _log_product(_sigma_grid(xi[ia] - xi[ib], setup, floor,
                                            "sigma(xk-xl)"))
        log_den += _log_product(_sigma_grid(xi[ia] + xi[ib], setup, floor,
                                            "sigma(xk+xl)"))
    return log_num + log_det - log_den


def _exp_saturating(log_value: complex) -> complex:
    """exp of a complex log, saturating to 0 or a phased inf out of range."""
    if log_value.real > 705.0:
        return cmath.rect(math.inf, log_value.imag)
    if log_value.real < -745.0:
        return 0.0 + 0.0j
    return cmath.exp(log_value)


def normalized_z_determinant(spectral: SpectralConfig, bc: BoundaryConfig,
                             setup: ModularSetup,
                             floor: float = GENERICITY_FLOOR) -> complex:
    """Single-determinant form of the normalized partition function.

    Values beyond double range saturate to 0 or inf; bench mode reports the
    log-space digest instead.
    """
    n = spectral.n
    if n > MAX_DETERMINANT_N:
        raise SizeError(f"determinant route limited to N <= {MAX_DETERMINANT_N}, got {n}")
    return _exp_saturating(_log_normalized_z_determinant(spectral, bc, setup, floor))


# ---------------------------------------------------------------------------
# Prefactor and full partition function.
# ---------------------------------------------------------------------------

def _log_uxi_ratio(spectral, setup, floor) -> complex:
    u = np.asarray(spectral.u, dtype=complex)[:, None]
    xi = np.asarray(spectral.xi, dtype=complex)[None, :]
    num = sigma(u + xi, setup)
    den = _sigma_grid(u + xi + setup.eta, setup, floor, "sigma(u+xi+eta)")
    return _log_product(num) - _log_product(den)


def _log_lambda_factor(n: int, bc: BoundaryConfig, setup: ModularSetup,
                       floor: float) -> complex:
    """Telescoped creation-operator scalars: the closed-form lambda product.

    prod_{n'=1..N} sigma(l12 + (2n'-N) eta) / prod_{j=0..N-1} sigma(l12 - j eta):
    the n'-th creation operator in the chain contributes its scalar
    sigma(m12)/sigma(l12) and the sector weight sigma(l12)/sigma(l12-k eta)
    of the sector it acts on; validated against the brute-force oracle at
    N = 2, 4, 6.
    """
    if n % 2:
        raise OddSizeError(f"closed-form lambda product needs even N, got {n}")
    eta = setup.eta
    l12 = bc.lambda12
    out = 0.0 + 0.0j
    for k in range(1, n + 1):
        num = sigma(l12 + (2 * k - n) * eta, setup)
        den = sigma(l12 - (k - 1) * eta, setup)
        if min(abs(den), abs(num)) < floor:
            raise SingularityError("lambda12 within eta*Z of a sigma zero")
        out += cmath.log(num) - cmath.log(den)
    return out


def partition_prefactor(bc: BoundaryConfig, spectral: SpectralConfig,
                        setup: ModularSetup,
                        floor: float = GENERICITY_FLOOR) -> complex:
    """lambda-product (M = N/2) times the (u, xi) ratio product; even N only."""
    n = spectral.n
    return cmath.exp(_log_lambda_factor(n, bc, setup, floor)
                     + _log_uxi_ratio(spectral, setup, floor))


def empirical_lambda_factor(spectral: SpectralConfig, bc: BoundaryConfig,
                            setup: ModularSetup,
                            floor: float = GENERICITY_FLOOR) -> complex:
    """Oracle-calibrated replacement for the lambda product at odd N.

    Z_bruteforce / (uxi-ratio * normalized Z); depends on (N, lambda, eta)
    but not on the spectral draw, which is itself an acceptance check.
    """
    z_ref = partition_bruteforce(spectral, bc, setup, floor)
    log_norm = _log_normalized_z_determinant(spectral, bc, setup, floor)
    return z_ref / cmath.exp(_log_uxi_ratio(spectral, setup, floor) + log_norm)


def full_z(spectral: SpectralConfig, bc: BoundaryConfig, setup: ModularSetup,
           route: str = "determinant", floor: float = GENERICITY_FLOOR):
    """Full partition function: prefactor x normalized value.

    Returns (value, empirical_flag); odd N calibrates the lambda factor
    against the brute-force oracle and sets the flag.
    """
    n = spectral.n
    if n == 0:
        return 1.0 + 0.0j, False
    if route == "permsum":
        log_norm = cmath.log(normalized_z_permsum(spectral, bc, setup, floor))
    elif route == "determinant":
        log_norm = _log_normalized_z_determinant(spectral, bc, setup, floor)
    else:
        raise ValueError(f"unknown closed-form route: {route!r}")
    log_uxi = _log_uxi_ratio(spectral, setup, floor)
    if n % 2 == 0:
        log_lam = _log_lambda_factor(n, bc, setup, floor)
        return _exp_saturating(log_lam + log_uxi + log_norm), False
    lam = empirical_lambda_factor(spectral, bc, setup, floor)
    return _exp_saturating(cmath.log(lam) + log_uxi + log_norm), True


# ---------------------------------------------------------------------------
# Proof-step machinery: recursion, pole-matching pair, residues, pole scan.
# ---------------------------------------------------------------------------

def _drop(seq, idx):
    return tuple(v for k, v in enumerate(seq) if k != idx)


def recursion_residual(spectral: SpectralConfig, bc: BoundaryConfig,
                       setup: ModularSetup,
                       floor: float = GENERICITY_FLOOR) -> float:
    """Relative residual of the N -> N-1 recursion (determinant route)."""
    n = spectral.n
    if n < 1:
        raise SizeError("recursion needs N >= 1")
    eta = setup.eta
    u = spectral.u
    xi = spectral.xi
    un = u[n - 1]
    z_n = normalized_z_determinant(spectral, bc, setup, floor)
    acc = 0.0 + 0.0j
    for i in range(n):
        coeff = (sigma(bc.lambda1 + bc.zeta - xi[i], setup)
                 * sigma(bc.lambda2 + bc.zeta + xi[i], setup)
                 * sigma(2 * un, setup) * sigma(eta, setup)
                 / (sigma(bc.lambda1 + bc.zeta + un, setup)
                    * sigma(bc.lambda2 + bc.zeta + un, setup)
                    * sigma(un - xi[i] + eta, setup)
                    * sigma(un + xi[i], setup)))
        for l in range(n - 1):
            coeff *= (sigma(u[l] - xi[i], setup) * sigma(u[l] + xi[i] + eta, setup)
                      / (sigma(u[l] - xi[i] + eta, setup) * sigma(u[l] + xi[i], setup)))
        for j in range(n):
            if j != i:
                coeff *= sigma(xi[j] - xi[i] + eta, setup) / sigma(xi[j] - xi[i], setup)
        sub = SpectralConfig(u=_drop(u, n - 1), xi=_drop(xi, i))
        acc += coeff * normalized_z_determinant(sub, bc, setup, floor)
    return float(abs(z_n - acc) / abs(z_n))


def pole_matching_pair(order: int, spectral: SpectralConfig,
                       bc: BoundaryConfig, setup: ModularSetup,
                       floor: float = GENERICITY_FLOOR):
    """The two meromorphic functions compared in the determinant proof.

    Returns (permsum_side, determinant_side) at size ``order``: the rescaled
    permutation sum and the Cauchy-type determinant expression.  Both are
    functions of the first ``order`` spectral parameters.
    """
    n = spectral.n
    if order > min(n, 8):
        raise SizeError(f"pole-matching pair limited to I <= min(N, 8), got {order}")
    sub = SpectralConfig(u=spectral.u[:order], xi=spectral.xi[:order])
    eta = setup.eta
    scale = 1.0 + 0.0j
    for l in range(order):
        scale *= (sigma(bc.lambda1 + bc.zeta + sub.u[l], setup)
                  * sigma(bc.lambda2 + bc.zeta + sub.u[l], setup)
                  / (sigma(bc.lambda1 + bc.zeta - sub.xi[l], setup)
                     * sigma(bc.lambda2 + bc.zeta + sub.xi[l], setup)
                     * sigma(2 * sub.u[l], setup)))
    permsum_side = scale * normalized_z_permsum(sub, bc, setup, floor)

    u = np.asarray(sub.u, dtype=complex)[:, None]
    xi = np.asarray(sub.xi, dtype=complex)[None, :]
    minus = sigma(u - xi, setup)
    plus_eta = sigma(u + xi + eta, setup)
    kernel = sigma(eta, setup) / (minus * plus_eta
                                  * sigma(u - xi + eta, setup)
                                  * sigma(u + xi, setup))
    det = np.linalg.det(kernel)
    num = complex(np.prod(minus) * np.prod(plus_eta))
    den = 1.0 + 0.0j
    uf = np.asarray(sub.u, dtype=complex)
    xf = np.asarray(sub.xi, dtype=complex)
    for a in range(order):
        for b in range(a):
            den *= sigma(uf[a] - uf[b], setup) * sigma(uf[a] + uf[b] + eta, setup)
    for k in range(order):
        for l in range(k + 1, order):
            den *= sigma(xf[k] - xf[l], setup) * sigma(xf[k] + xf[l], setup)
    determinant_side = num * det / den
    return complex(permsum_side), complex(determinant_side)


def residue_estimate(func, center: complex, eps: float = 1e-5,
                     points: int = 4) -> complex:
    """Residue of a simple pole by a circular epsilon-ring average."""
    acc = 0.0 + 0.0j
    for k in range(points):
        z = eps * cmath.exp(2j * math.pi * k / points)
        acc += z * func(center + z)
    return acc / points


def pole_scan(order: int, spectral: SpectralConfig, bc: BoundaryConfig,
              setup: ModularSetup, floor: float = GENERICITY_FLOOR,
              eps: float = 1e-4, perturb_permsum_side: float = 1.0):
    """Classify candidate poles of (determinant side - permsum side).

    Checks the true candidate locations xi_i - eta and -xi_i, and the
    apparent points u_l and -u_l - eta (l < order) where the determinant
    side alone must stay bounded.  A point is regular when the ring-estimated
    residue is negligible against the on-ring magnitude scale eps*max|f|
    (scale-free: a simple pole gives |residue| ~ that scale, a regular
    function ~1e-12 of it).  ``perturb_permsum_side`` scales the
    permutation-sum side; a deliberate mismatch is the negative control.
    Returns a list of (location_label, location, is_regular).
    """
    def diff_at(u_last):
        sub = SpectralConfig(u=spectral.u[:order - 1] + (u_last,),
                             xi=spectral.xi[:order])
        b_val, f_val = pole_matching_pair(order, sub, bc, setup, floor)
        return f_val - perturb_permsum_side * b_val

    def f_side_at(u_last):
        sub = SpectralConfig(u=spectral.u[:order - 1] + (u_last,),
                             xi=spectral.xi[:order])
        return pole_matching_pair(order, sub, bc, setup, floor)[1]

    def ring_residue(func, z0):
        ring = [func(z0 + eps * cmath.exp(2j * math.pi * k / 4)) for k in range(4)]
        res = sum(eps * cmath.exp(2j * math.pi * k / 4) * ring[k]
                  for k in range(4)) / 4
        return res, max(abs(v) for v in ring)

    def diff_regular(z0):
        # regular iff the sides' (equal, nonzero) residues cancel in the
        # difference far below their own size
        res_d, _ = ring_residue(diff_at, z0)
        res_f, _ = ring_residue(f_side_at, z0)
        return abs(res_d) <= 1e-6 * max(abs(res_f), 1e-300)

    def side_regular(z0):
        # regular iff the ring residue is negligible against eps * max|f|,
        # the size a genuine simple pole would give it
        res, peak = ring_residue(f_side_at, z0)
        return abs(res) <= 1e-3 * max(eps * peak, 1e-300)

    out = []
    for i in range(order):
        z0 = spectral.xi[i] - setup.eta
        out.append((f"xi_{i + 1}-eta", z0, diff_regular(z0)))
        z1 = -spectral.xi[i]
        out.append((f"-xi_{i + 1}", z1, diff_regular(z1)))
    for l in range(order - 1):
        z2 = spectral.u[l]
        out.append((f"u_{l + 1}", z2, side_regular(z2)))
        z3 = -spectral.u[l] - setup.eta
        out.append((f"-u_{l + 1}-eta", z3, side_regular(z3)))
    return out


def f_quasi_period_residual(spectral: SpectralConfig, bc: BoundaryConfig,
                            setup: ModularSetup,
                            floor: float = GENERICITY_FLOOR) -> float:
    """|f(u+1) - f(u)| / scale for f = determinant side - permsum side.

    The scale is the larger side's magnitude (f itself vanishes identically,
    so the residual is measured relative to the functions being compared).
    """
    order = spectral.n

    def pair_at(u_last):
        sub = SpectralConfig(u=spectral.u[:order - 1] + (u_last,),
                             xi=spectral.xi[:order])
        return pole_matching_pair(order, sub, bc, setup, floor)

    u0 = spectral.u[order - 1]
    b0, f0 = pair_at(u0)
    b1, f1 = pair_at(u0 + 1.0)
    scale = max(abs(b0), abs(f0), abs(b1), abs(f1), 1e-300)
    return float(abs((f1 - b1) - (f0 - b0)) / scale)
