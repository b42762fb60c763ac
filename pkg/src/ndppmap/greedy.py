"""Greedy initialization.

induced_greedy maximizes the superset marginal mu(S u {i}) at every step
and carries a crude C(n,k)-factor guarantee; standard_greedy is the classic
det(L_{S u i}) baseline kept to reproduce its failure on nonsymmetric
kernels (all odd minors of a skew block vanish).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError, InfeasibilityError
from .kernel import Kernel, principal_minor
from .setdist import SetDistribution, as_set


@dataclass
class GreedyTrace:
    picks: list = field(default_factory=list)  # (chosen index, marginal value)
    final_set: tuple = ()
    final_value: float = 0.0


def induced_greedy(mu: SetDistribution, n, k, zeta_g=1.0, ground=None) -> GreedyTrace:
    """Grow S one element at a time, maximizing the marginal mu(S u {i}).

    zeta_g = 1 takes the exact argmax (ties to the smallest index); zeta_g < 1
    accepts the smallest index whose marginal is within factor zeta_g of the
    best, the deterministic face of approximate maximization.
    """
    if not 0.0 < zeta_g <= 1.0:
        raise DomainError(f"zeta_g must lie in (0, 1], got {zeta_g}")
    ground = sorted(range(n) if ground is None else set(ground))
    if k > len(ground):
        raise DomainError(f"k={k} exceeds ground size {len(ground)}")
    trace = GreedyTrace()
    S = ()
    for _ in range(k):
        cands = [i for i in ground if i not in S]
        vals = [mu.marginal(as_set(S + (i,))) for i in cands]
        best = max(vals)
        if best <= 0.0:
            raise InfeasibilityError(
                f"all marginals vanish extending {S}; mu is zero on extensions"
            )
        if zeta_g >= 1.0:
            pick = next(i for i, v in zip(cands, vals) if v == best)
            val = best
        else:
            pick, val = next(
                (i, v) for i, v in zip(cands, vals) if v >= zeta_g * best
            )
        S = as_set(S + (pick,))
        trace.picks.append((pick, float(val)))
    trace.final_set = S
    trace.final_value = float(mu.value(S))
    return trace


def standard_greedy(K: Kernel, k) -> GreedyTrace:
    """Classic greedy on det(L_{S u i}); ties (including all-zero) take the
    smallest index, so it may end on a zero-determinant set."""
    trace = GreedyTrace()
    S = ()
    for _ in range(k):
        cands = [i for i in range(K.n) if i not in S]
        vals = [principal_minor(K, S + (i,)) for i in cands]
        best = max(vals)
        pick = next(i for i, v in zip(cands, vals) if v == best)
        S = as_set(S + (pick,))
        trace.picks.append((pick, float(best)))
    trace.final_set = S
    trace.final_value = principal_minor(K, S)
    return trace
