"""Hermitian form S(z,u) = sum_j p_j(z) conj(p_j(u)), its coefficient matrix,
triangular factor, Schur function and kernel.

S is assembled from the rational expansion with every (z - zeta_j) factor
cancelled analytically, so it can be evaluated anywhere, including at the
atoms and at the exterior roots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics as nx
from .dirichlet import DirichletData
from .errors import IllConditioned


@dataclass(frozen=True)
class HermForm:
    k: int
    C: np.ndarray  # coefficient of z^m conj(u)^n at C[m-1, n-1], m,n = 1..k
    P: np.ndarray  # upper triangular, rows are coefficient vectors of p_j over z^1..z^k


@dataclass(frozen=True)
class SchurData:
    P: np.ndarray
    q: np.ndarray  # denominator polynomial, ascending coefficients

    @property
    def k(self) -> int:
        return self.P.shape[0]

    def eval_components(self, z):
        """Row vector B(z) = (p_1/q, ..., p_k/q)."""
        zp = np.array([z ** m for m in range(1, self.k + 1)], dtype=complex)
        return (self.P @ zp) / nx.poly_eval(self.q, z)


def _weight_matrix(dd: DirichletData) -> np.ndarray:
    """W[j,i] = conj(B[j,i]) / (O'(zeta_j) conj(O'(zeta_i)))."""
    op = dd.fprime_at_zeta
    return np.conj(dd.B) / np.outer(op, np.conj(op))


def eval_S(dd: DirichletData, z, u):
    """Evaluate S at arbitrary complex points (scalars or broadcastable
    arrays); polynomial in z and conj(u) after cancellation."""
    z = np.asarray(z, dtype=complex)
    u = np.asarray(u, dtype=complex)
    scalar = z.ndim == 0 and u.ndim == 0
    p, q = dd.outer.p, dd.outer.q
    k = dd.measure.k
    W = _weight_matrix(dd)
    qz = nx.poly_eval(q, z)
    qu = nx.poly_eval(q, u)
    pz = nx.poly_eval(p, z)
    pu = nx.poly_eval(p, u)
    dz = np.stack([np.atleast_1d(nx.poly_eval(dd.deflated[j], z)) for j in range(k)])
    du = np.stack([np.atleast_1d(nx.poly_eval(dd.deflated[i], u)) for i in range(k)])
    cross = np.einsum("ji,j...,i...->...", W, dz, np.conj(du))
    out = qz * np.conj(qu) - pz * np.conj(pu) - (1.0 - z * np.conj(u)) * cross
    if scalar:
        return complex(np.asarray(out).reshape(-1)[0])
    return out


def extract_C(dd: DirichletData, radius: float = 0.7) -> HermForm:
    """Recover the coefficients of z^m conj(u)^n (m,n = 1..k) by
    interpolation on a tensor grid; doubles as a consistency check on the
    rational evaluation of S."""
    k = dd.measure.k
    for r in (radius, 1.3 * radius):
        nodes = r * np.exp(2j * np.pi * np.arange(k) / k + 0.37j)
        V = np.array([[zn ** m for m in range(1, k + 1)] for zn in nodes])
        cond = np.linalg.cond(V)
        if cond <= 1e10:
            break
    else:
        raise IllConditioned(f"interpolation nodes with condition {cond:.3e}")
    S_grid = eval_S(dd, nodes[:, None], nodes[None, :])
    # S_grid = V C V^H
    Y = nx.solve_linear(V, S_grid)            # Y = C V^H
    C = nx.solve_linear(V, Y.conj().T).conj().T
    C = 0.5 * (C + C.conj().T)
    # refit residual
    refit = V @ C @ V.conj().T
    scale = max(float(np.max(np.abs(S_grid))), 1e-300)
    if np.max(np.abs(refit - S_grid)) > 1e-9 * scale:
        raise IllConditioned("coefficient refit residual too large")
    P = factor_P(C)
    return HermForm(k, C, P)


def factor_P(C: np.ndarray) -> np.ndarray:
    """Upper triangular P with nonnegative diagonal such that the rows of P
    reproduce S: conj(C) = P^H P."""
    return nx.cholesky_herm(np.conj(C))


def eval_S_from_P(P: np.ndarray, z, u):
    k = P.shape[0]
    zp = np.array([np.asarray(z, dtype=complex) ** m for m in range(1, k + 1)])
    up = np.array([np.asarray(u, dtype=complex) ** m for m in range(1, k + 1)])
    pz = np.tensordot(P, zp, axes=(1, 0))
    pu = np.tensordot(P, up, axes=(1, 0))
    return np.sum(pz * np.conj(pu), axis=0)


def make_schur(dd: DirichletData, hf: HermForm) -> SchurData:
    return SchurData(hf.P, dd.outer.q)


def kernel_KB(sd: SchurData, z: complex, w: complex) -> complex:
    """(1 - B(z) B(w)^*) / (1 - z conj(w))."""
    bz = sd.eval_components(z)
    bw = sd.eval_components(w)
    return complex((1.0 - np.sum(bz * np.conj(bw))) / (1.0 - z * np.conj(w)))


def schur_sup_bound(sd: SchurData, radius: float = 0.999, n: int = 512) -> float:
    """Sampled sup of ||B(z)|| on the circle of the given radius."""
    zs = radius * np.exp(2j * np.pi * np.arange(n) / n)
    vals = [np.sqrt(np.sum(np.abs(sd.eval_components(z)) ** 2)) for z in zs]
    return float(np.max(vals))
