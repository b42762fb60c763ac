"""Unnormalized densities over size-k subsets, exposed as evaluation oracles."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from . import charpoly
from .kernel import Kernel, SubsetState, incremental_minor, principal_minor


def as_set(S):
    return tuple(sorted(int(i) for i in S))


class SetDistribution:
    """Evaluation oracle for an unnormalized density mu on size-k subsets of [n].

    Subclasses implement value(); marginal() defaults to brute-force
    enumeration of supersets and is overridden where a faster route exists.
    """

    def __init__(self, n, k):
        self.n = int(n)
        self.k = int(k)

    def value(self, S) -> float:
        raise NotImplementedError

    def marginal(self, Y) -> float:
        """sum of mu(S) over size-k supersets S of Y."""
        Y = as_set(Y)
        rest = [i for i in range(self.n) if i not in Y]
        total = 0.0
        for extra in combinations(rest, self.k - len(Y)):
            total += self.value(Y + extra)
        return total

    def support_states(self):
        return [
            S for S in combinations(range(self.n), self.k) if self.value(S) > 0.0
        ]


class KernelDistribution(SetDistribution):
    """mu(S) = det(L_S); marginals via the characteristic-polynomial route."""

    def __init__(self, kernel: Kernel, k):
        super().__init__(kernel.n, k)
        self.kernel = kernel

    def value(self, S):
        return principal_minor(self.kernel, S)

    def marginal(self, Y):
        return charpoly.superset_marginal(self.kernel, Y, self.k)

    def neighborhood_values(self, S, r, ground=None):
        """mu over the r-neighborhood of S, via Schur-complement increments.

        For each retained core Y = S \\ U1 a cached inverse of L_Y prices every
        completion D in O(|D| k^2 + |D|^3); singular cores fall back to direct
        determinants.
        """
        S = as_set(S)
        ground = range(self.n) if ground is None else ground
        outside = sorted(set(ground) - set(S))
        out = {}
        for s in range(0, min(r, len(S), len(outside)) + 1):
            for drop in combinations(S, s):
                core = tuple(i for i in S if i not in drop)
                state = SubsetState.from_indices(self.kernel, core)
                for add in combinations(outside, s):
                    T = tuple(sorted(core + add))
                    if T not in out:
                        out[T] = incremental_minor(state, self.kernel, add)
        return out


class TableDistribution(SetDistribution):
    """mu backed by an explicit table mapping sorted index tuples to masses."""

    def __init__(self, n, k, table):
        super().__init__(n, k)
        self.table = {as_set(S): float(v) for S, v in table.items()}

    def value(self, S):
        return self.table.get(as_set(S), 0.0)


class UniformDistribution(SetDistribution):
    def value(self, S):
        S = as_set(S)
        return 1.0 if len(S) == self.k and len(set(S)) == self.k else 0.0


def tabulate(mu: SetDistribution):
    """Freeze mu into a dict over all size-k subsets (desk scale only)."""
    return {
        S: mu.value(S) for S in combinations(range(mu.n), mu.k)
    }


def kernel_table(K: Kernel, k):
    """All size-k principal minors of K, keyed by sorted index tuple."""
    return {
        S: principal_minor(K, S) for S in combinations(range(K.n), k)
    }
