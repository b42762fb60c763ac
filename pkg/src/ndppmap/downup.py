"""Exact down-up walks, external fields, and spectral diagnostics.

The k<->l walk drops k-l elements uniformly, then re-completes
proportionally to mu.  At desk scale the transition matrix is materialized
row-stochastically over the support, so reversibility, the spectrum,
conductance and the Cheeger sandwich can all be checked exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import CapacityError, DomainError, InfeasibilityError, TrappedStateError
from .setdist import SetDistribution, as_set

CHAIN_STATE_CAP = 20000
CONDUCTANCE_STATE_CAP = 22


@dataclass
class ChainMatrix:
    states: list  # sorted size-k tuples carrying positive mass
    P: np.ndarray  # row-stochastic transition matrix
    pi: np.ndarray  # stationary density (normalized mu over states)


@dataclass
class FieldVector:
    """Per-element external field; 0 deletes an element, inf forces it."""

    lam: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        if np.any(lam < 0) or np.any(np.isnan(lam)):
            raise DomainError("field entries must be nonnegative")
        self.lam = lam


class FieldDistribution(SetDistribution):
    """(lambda * mu)(S) = mu(S) * prod_{i in S} lambda_i, with zero and
    infinite entries realized as support restriction."""

    def __init__(self, base: SetDistribution, lam: FieldVector):
        super().__init__(base.n, base.k)
        self.base = base
        self.lam = lam.lam
        self.forced = frozenset(np.flatnonzero(np.isinf(self.lam)).tolist())
        self.deleted = frozenset(np.flatnonzero(self.lam == 0.0).tolist())

    def value(self, S):
        S = as_set(S)
        sset = set(S)
        if not self.forced <= sset or sset & self.deleted:
            return 0.0
        factor = 1.0
        for i in S:
            if i not in self.forced:
                factor *= self.lam[i]
        return self.base.value(S) * factor


def apply_field(mu: SetDistribution, lam) -> FieldDistribution:
    """Reweight mu by the external field; errors out on empty support
    whenever the state space is small enough to enumerate."""
    if not isinstance(lam, FieldVector):
        lam = FieldVector(np.asarray(lam, dtype=float))
    if len(lam.lam) != mu.n:
        raise DomainError(f"field has {len(lam.lam)} entries, ground set has {mu.n}")
    out = FieldDistribution(mu, lam)
    if math.comb(mu.n, mu.k) <= CHAIN_STATE_CAP:
        if not any(
            out.value(S) > 0.0 for S in combinations(range(mu.n), mu.k)
        ):
            raise InfeasibilityError("field leaves no size-k subset with positive mass")
    return out


def build_downup(mu: SetDistribution, n, k, l) -> ChainMatrix:
    """Explicit transition matrix of the k<->l down-up walk on supp(mu).

    The matrix is the composition D_{k->l} U_{l->k} acting on k-sets, which is
    exactly the two-step drop/re-complete algorithm.
    """
    if not 0 <= l <= k <= n:
        raise DomainError(f"need 0 <= l <= k <= n, got n={n}, k={k}, l={l}")
    if math.comb(n, k) > CHAIN_STATE_CAP:
        raise CapacityError(f"C({n},{k}) exceeds chain cap {CHAIN_STATE_CAP}")
    states = [S for S in combinations(range(n), k) if mu.value(S) > 0.0]
    if not states:
        raise InfeasibilityError("mu has empty support on size-k subsets")
    m = len(states)
    w = np.array([mu.value(S) for S in states])
    pi = w / w.sum()
    if k == l:
        return ChainMatrix(states, np.eye(m), pi)
    by_core = {}
    for si, S in enumerate(states):
        for core in combinations(S, l):
            by_core.setdefault(core, []).append(si)
    P = np.zeros((m, m))
    inv_choose = 1.0 / math.comb(k, l)
    for core, idxs in by_core.items():
        weights = w[idxs]
        up = weights / weights.sum()
        for si in idxs:
            P[si, idxs] += inv_choose * up
    return ChainMatrix(states, P, pi)


def _symmetrized_spectrum(C: ChainMatrix):
    s = np.sqrt(C.pi)
    A = (s[:, None] * C.P) / s[None, :]
    A = 0.5 * (A + A.T)
    return np.linalg.eigvalsh(A)


def spectral_gap(C: ChainMatrix) -> float:
    """1 - lambda_2 of the transition matrix (via the reversible symmetrization)."""
    if len(C.states) < 2:
        return 1.0
    ev = _symmetrized_spectrum(C)
    return float(1.0 - ev[-2])


@dataclass
class ConductanceResult:
    exact: bool
    value: float | None  # exact bottleneck ratio when exact
    lower: float
    upper: float


def conductance(C: ChainMatrix, state_cap=CONDUCTANCE_STATE_CAP) -> ConductanceResult:
    """Exact min-cut bottleneck ratio when the state count permits the 2^m
    enumeration; otherwise an interval inverted from the Cheeger sandwich."""
    m = len(C.states)
    gap = spectral_gap(C)
    if m > state_cap:
        return ConductanceResult(False, None, gap / 2.0, math.sqrt(max(2.0 * gap, 0.0)))
    F = C.pi[:, None] * C.P  # ergodic flow
    rowflow = F.sum(axis=1)
    best = math.inf
    masks = np.arange(1, 2**m - 1, dtype=np.int64)
    for lo in range(0, len(masks), 1 << 16):
        chunk = masks[lo : lo + (1 << 16)]
        member = ((chunk[:, None] >> np.arange(m)) & 1).astype(float)
        pi_S = member @ C.pi
        keep = pi_S <= 0.5 + 1e-12
        if not np.any(keep):
            continue
        member = member[keep]
        pi_S = pi_S[keep]
        internal = np.einsum("ij,jk,ik->i", member, F, member)
        Q = member @ rowflow - internal
        phi = Q / pi_S
        best = min(best, float(phi.min()))
    if not math.isfinite(best):
        best = 0.0
    best = max(best, 0.0)
    return ConductanceResult(True, best, best, best)


def cheeger_ok(gap, cond: ConductanceResult, tol=1e-9):
    """Phi^2 / 2 <= 1 - lambda_2 <= 2 Phi, checked only when Phi is exact."""
    if not cond.exact:
        return True
    phi = cond.value
    return phi * phi / 2.0 <= gap + tol and gap <= 2.0 * phi + tol


def sample_walk(mu: SetDistribution, S0, l, steps, seed):
    """Seeded trajectory of the k<->l down-up walk started at S0.

    Each up-step enumerates the C(n-l, k-l) supersets of the retained core and
    samples proportionally to mu.  Reproducible bit-for-bit per seed.
    """
    S0 = as_set(S0)
    k = len(S0)
    if not 0 <= l <= k:
        raise DomainError(f"need 0 <= l <= k, got l={l}, k={k}")
    if mu.value(S0) <= 0.0:
        raise DomainError("walk must start in the support of mu")
    rng = np.random.default_rng(seed)
    traj = [S0]
    if l == k:
        return [S0] * (steps + 1)
    up_cache = {}
    cur = S0
    for _ in range(steps):
        keep_idx = rng.choice(k, size=l, replace=False)
        core = tuple(sorted(cur[i] for i in keep_idx))
        if core not in up_cache:
            rest = [i for i in range(mu.n) if i not in core]
            cands = [tuple(sorted(core + extra)) for extra in combinations(rest, k - l)]
            wts = np.array([max(mu.value(S), 0.0) for S in cands])
            total = wts.sum()
            up_cache[core] = (cands, wts / total) if total > 0.0 else (cands, None)
        cands, probs = up_cache[core]
        if probs is None:
            raise TrappedStateError(f"no positive-mass superset of {core}", state=core)
        cur = cands[rng.choice(len(cands), p=probs)]
        traj.append(cur)
    return traj


def tv_distance(p, q) -> float:
    """Half L1 distance between densities on the same enumerated support."""
    if isinstance(p, dict) or isinstance(q, dict):
        if not (isinstance(p, dict) and isinstance(q, dict)):
            raise DomainError("both densities must be dicts or both sequences")
        if set(p) != set(q):
            raise DomainError("mismatched supports")
        keys = sorted(p)
        pv = np.array([p[s] for s in keys], dtype=float)
        qv = np.array([q[s] for s in keys], dtype=float)
    else:
        pv = np.asarray(p, dtype=float)
        qv = np.asarray(q, dtype=float)
        if pv.shape != qv.shape:
            raise DomainError("mismatched supports")
    return 0.5 * float(np.abs(pv - qv).sum())


def empirical_density(traj, states):
    """Visit frequencies of `traj` over the enumerated `states`."""
    index = {S: i for i, S in enumerate(states)}
    counts = np.zeros(len(states))
    for S in traj:
        counts[index[S]] += 1.0
    return counts / counts.sum()


def chain_checks(C: ChainMatrix, n=None, k=None, l=None):
    """Row sums, reversibility, spectrum, stationarity, gap, Cheeger sandwich."""
    P, pi = C.P, C.pi
    row_err = float(np.max(np.abs(P.sum(axis=1) - 1.0)))
    F = pi[:, None] * P
    rev_err = float(np.max(np.abs(F - F.T)))
    ev = _symmetrized_spectrum(C)
    gap = spectral_gap(C)
    cond = conductance(C)
    stat_err = float(np.max(np.abs(pi @ P - pi)))
    report = {
        "n": n,
        "k": k,
        "l": l,
        "num_states": len(C.states),
        "row_sum_err": row_err,
        "reversibility_err": rev_err,
        "min_eigenvalue": float(ev[0]),
        "stationarity_err": stat_err,
        "gap": gap,
        "cheeger_ok": cheeger_ok(gap, cond),
    }
    if cond.exact:
        report["conductance"] = cond.value
    else:
        report["conductance_bounds"] = [cond.lower, cond.upper]
    report["ok"] = bool(
        row_err <= 1e-12
        and rev_err <= 1e-10
        and ev[0] >= -1e-9
        and stat_err <= 1e-10
        and report["cheeger_ok"]
    )
    return report
