"""Subnormality decision for the Cauchy dual of the shift.

Two routes feed the verdict:

  * the pairwise zero test: when no product alpha_r conj(alpha_t) lies in
    [1, inf), the dual is subnormal iff S vanishes at every exterior root
    pair (r != t);
  * truncated positivity probes of the moment matrices indexed by l >= 1;
    only a violation is conclusive (positivity of every finite truncation
    is never certified by finitely many probes).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .errors import DegenerateAlphas
from .fejer import FejerRiesz
from .policy import NumericPolicy

NOT_SUBNORMAL = "NotSubnormal"
SUBNORMAL_NUMERIC = "SubnormalNumeric"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class PairEvidence:
    r: int
    t: int
    product: complex
    premise_ok: bool
    S_rt: complex = 0.0
    S_scale: float = 1.0


@dataclass(frozen=True)
class PsdProbe:
    l: int
    N: int
    min_eig: float
    trace: float


@dataclass(frozen=True)
class Verdict:
    decision: str
    pair_evidence: List[PairEvidence]
    psd_probes: List[PsdProbe]
    policy: NumericPolicy
    max_offdiag_norm: float = 0.0


def pair_premises(fr: FejerRiesz) -> List[PairEvidence]:
    """premise_ok iff alpha_r conj(alpha_t) stays off the ray [1, inf)."""
    out = []
    k = len(fr.alphas)
    for r in range(k):
        for t in range(k):
            if r == t:
                continue
            prod = complex(fr.alphas[r] * np.conj(fr.alphas[t]))
            on_ray = abs(prod.imag) <= 1e-10 and prod.real >= 1.0 - 1e-10
            out.append(PairEvidence(r, t, prod, not on_ray))
    return out


def offdiag_sums(fr: FejerRiesz, s_eval: Callable) -> List[PairEvidence]:
    """Attach S values at exterior-root pairs to the premise evidence."""
    k = len(fr.alphas)
    diag = np.array([s_eval(fr.alphas[r], fr.alphas[r]).real for r in range(k)])
    out = []
    for ev in pair_premises(fr):
        s_rt = complex(s_eval(fr.alphas[ev.r], fr.alphas[ev.t]))
        scale = float(np.sqrt(max(diag[ev.r], 1e-300) * max(diag[ev.t], 1e-300)))
        out.append(PairEvidence(ev.r, ev.t, ev.product, ev.premise_ok, s_rt, scale))
    return out


def _log_products(alphas: np.ndarray) -> np.ndarray:
    """a_r = prod_{t != r} (alpha_r - alpha_t), via summed complex logs to
    keep large k stable."""
    k = len(alphas)
    if k == 1:
        return np.ones(1, dtype=complex)
    diff = alphas[:, None] - alphas[None, :]
    if np.min(np.abs(diff) + np.eye(k)) <= 1e-9:
        raise DegenerateAlphas("exterior roots not pairwise distinct")
    logs = np.log(np.where(np.eye(k, dtype=bool), 1.0, diff))
    return np.exp(np.sum(np.where(np.eye(k, dtype=bool), 0.0, logs), axis=1))


def moment_truncation(fr: FejerRiesz, s_eval: Callable, l: int, N: int) -> np.ndarray:
    """N x N Hermitian truncation of the order-l moment matrix."""
    alphas = fr.alphas
    k = len(alphas)
    a = _log_products(alphas)
    S = np.array([[s_eval(alphas[r], alphas[t]) for t in range(k)] for r in range(k)],
                 dtype=complex)
    kappa = S / np.outer(a, np.conj(a))
    gamma = 1.0 - 1.0 / (alphas[:, None] * np.conj(alphas[None, :]))
    weight = kappa * gamma ** l
    ms = np.arange(N)
    V = (1.0 / alphas[None, :]) ** (ms[:, None] + 2)  # V[m, r] = alpha_r^{-(m+2)}
    M = V @ weight @ V.conj().T
    return 0.5 * (M + M.conj().T)


def psd_search(fr: FejerRiesz, s_eval: Callable, l_max: int, N: int,
               psd_tol: float = 1e-10, exhaustive: bool = False) -> List[PsdProbe]:
    """Probe truncations for l = 1..l_max; short-circuits on the first
    violation unless exhaustive."""
    probes = []
    for l in range(1, l_max + 1):
        M = moment_truncation(fr, s_eval, l, N)
        eigs = np.linalg.eigvalsh(M)
        tr = float(np.trace(M).real)
        probe = PsdProbe(l, N, float(eigs[0]), tr)
        probes.append(probe)
        if probe.min_eig < -psd_tol * max(abs(tr), 1e-300) and not exhaustive:
            break
    return probes


def decide(fr: FejerRiesz, s_eval: Callable,
           policy: Optional[NumericPolicy] = None,
           run_psd: bool = True, exhaustive_psd: bool = False) -> Verdict:
    policy = policy or NumericPolicy()
    evidence = offdiag_sums(fr, s_eval)
    premises_ok = all(ev.premise_ok for ev in evidence)
    norms = [abs(ev.S_rt) / ev.S_scale for ev in evidence]
    max_norm = max(norms) if norms else 0.0
    probes = []
    violation = False
    if run_psd and len(fr.alphas) >= 1:
        probes = psd_search(fr, s_eval, policy.l_max, policy.N_trunc,
                            exhaustive=exhaustive_psd)
        violation = any(p.min_eig < -policy.psd_tol * max(abs(p.trace), 1e-300)
                        for p in probes)
    if (premises_ok and max_norm > policy.zero_reject) or violation:
        decision = NOT_SUBNORMAL
    elif premises_ok and max_norm <= policy.zero_accept:
        decision = SUBNORMAL_NUMERIC
    else:
        decision = INCONCLUSIVE
    return Verdict(decision, evidence, probes, policy, float(max_norm))
