"""Independent checks: classical one-season recursions, exhaustive path
enumeration and seeded Monte Carlo.

Nothing here uses generating functions or the unit-disk roots.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, NetProfitViolation, OracleTooLarge
from .model import EPS_NPC, SeasonalModel
from .pmf import IntegerPMF

ENUM_CAP = 2_000_000
MC_CHUNK = 65_536
MC_CHUNK_DRAWS = 1 << 22  # uniforms held in memory per chunk


def homogeneous_finite_ruin(pmf: IntegerPMF, u: int, t: int) -> float:
    """Finite-time ruin ``psi(u, t)`` of the one-season model.

    ``psi(v, 1) = P(Z > v)`` and
    ``psi(v, s) = psi(v, 1) + sum_{k=0}^{v} psi(v + 1 - k, s - 1) P(Z = k)``.
    """
    if u < 0 or t < 1:
        raise InvalidArgument("need u >= 0 and t >= 1")
    top = u + t + 1
    z = pmf.padded(top + 1)
    sf = 1.0 - np.cumsum(z)  # P(Z > v), truncated mass counted as a large claim
    psi = sf[:top].copy()
    for s in range(2, t + 1):
        prev = psi
        psi = sf[:top].copy()
        for v in range(top - 1):
            psi[v] += np.dot(prev[v + 1: 0: -1][: v + 1], z[: v + 1])
    return float(psi[u])


def homogeneous_ultimate_ruin(pmf: IntegerPMF, u_max: int) -> np.ndarray:
    """Ultimate ruin ``psi(0..u_max)`` of the one-season model with ``E Z < 1``.

    ``psi(0) = E Z`` and, for ``u >= 1``,
    ``(1 - P(Z > 0)) psi(u) = sum_{j=1}^{u-1} P(Z > j) psi(u - j) + sum_{j>=u} P(Z > j)``.
    Tail probabilities are taken from the truncated support, so the neglected
    remainder of the last sum is at most of the order of ``pmf.tail_mass``.
    """
    if pmf.mean >= 1.0 - EPS_NPC:  # same critical band as ``classify``
        raise NetProfitViolation(f"E Z = {pmf.mean} is not below 1")
    z = pmf.padded(max(pmf.probs.size, u_max + 1) + 1)
    sf = np.concatenate((np.cumsum(z[::-1])[::-1][1:], [0.0]))  # P_trunc(Z > j)
    tail_sums = np.cumsum(sf[::-1])[::-1]  # sum_{i >= j} P(Z > i)
    psi = np.zeros(u_max + 1)
    psi[0] = pmf.mean
    for u in range(1, u_max + 1):
        acc = np.dot(sf[1:u], psi[u - 1:0:-1]) + tail_sums[u]
        psi[u] = acc / (1.0 - sf[0])
    return psi


@dataclass(frozen=True)
class MonteCarloEstimate:
    point: float
    half_width_95: float
    n_paths: int
    seed: int

    def covers(self, value: float, scale: float = 1.0) -> bool:
        return abs(self.point - value) <= scale * self.half_width_95


def _path_uniforms(seed: int, first: int, count: int, t: int) -> np.ndarray:
    """Uniforms for paths ``first..first+count-1``, ``t`` per path.

    Path ``i`` owns Philox counter block ``[i*b, (i+1)*b)`` with
    ``b = ceil(t/4)``, so its draws do not depend on how paths are chunked.
    """
    block = -(-t // 4)
    bg = np.random.Philox(key=seed)
    bg.advance(first * block)
    u = np.random.Generator(bg).random((count, 4 * block))
    return u[:, :t]


def mc_survival(model: SeasonalModel, u: int, t: int, n_paths: int, seed: int,
                chunk: int = MC_CHUNK) -> MonteCarloEstimate:
    """Fraction of simulated paths keeping ``W_u(n) > 0`` for ``n = 1..t``.

    Claims are drawn by inverse CDF from the truncated PMFs; a uniform landing
    in the truncated tail yields a claim one past the support.
    """
    if n_paths < 1:
        raise InvalidArgument("n_paths must be >= 1")
    n = model.n_seasons
    cdfs = [np.cumsum(c.probs) for c in model.claims]
    chunk = max(1, min(chunk, MC_CHUNK_DRAWS // max(t, 1)))
    alive_total = 0
    for first in range(0, n_paths, chunk):
        count = min(chunk, n_paths - first)
        unif = _path_uniforms(seed, first, count, t)
        w = np.full(count, u, dtype=np.int64)
        alive = np.ones(count, dtype=bool)
        for step in range(t):
            claim = np.searchsorted(cdfs[step % n], unif[:, step], side="right")
            w += 1 - claim
            alive &= w > 0
        alive_total += int(alive.sum())
    p = alive_total / n_paths
    return MonteCarloEstimate(p, 1.96 * math.sqrt(p * (1 - p) / n_paths), n_paths, seed)


def mc_survival_ultimate(model: SeasonalModel, u: int, n_paths: int, seed: int,
                         bound: float = 1e-4, t_cap: int = 20_000) -> MonteCarloEstimate:
    """Long-horizon proxy for ``phi(u)``.

    The horizon is the first ``T`` (doubling) at which the finite-time DP value
    is within ``bound`` of the ultimate value, so the estimate is approximate.
    """
    from .survival import survival_finite, survival_ultimate

    target = survival_ultimate(model, u).phi[u]
    t = 16
    while survival_finite(model, u, t)[u, t] - target >= bound:
        t *= 2
        if t > t_cap:
            raise OracleTooLarge(f"horizon above {t_cap} needed for a {bound} bound")
    return mc_survival(model, u, t, n_paths, seed)


def enum_survival_exact(model: SeasonalModel, u: int, t: int, cap: int = ENUM_CAP) -> float:
    """Exact ``phi(u, t)`` by enumerating every claim path.

    Each path contributes the product of its claim probabilities when all
    partial sums satisfy ``Z_1 + ... + Z_n <= u + n - 1``.
    """
    n = model.n_seasons
    supports = [np.flatnonzero(model.claims[s % n].probs) for s in range(t)]
    size = math.prod(len(s) for s in supports)
    if size > cap:
        raise OracleTooLarge(f"{size} paths exceed the enumeration cap {cap}")
    if t == 0:
        return 1.0
    paths = np.array(list(itertools.product(*supports)), dtype=np.int64).reshape(size, t)
    probs = np.ones(size)
    for s in range(t):
        probs *= model.claims[s % n].probs[paths[:, s]]
    limits = u + np.arange(t)
    ok = np.all(np.cumsum(paths, axis=1) <= limits, axis=1)
    return float(math.fsum(probs[ok]))
