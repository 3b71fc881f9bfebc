"""Probability mass functions on the non-negative integers and their PGFs.

Infinite-support laws are truncated at the smallest degree whose discarded
tail mass drops below ``eps_tail``; the discarded mass is kept on the object
so downstream code can bound its effect.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import stats

from .errors import DomainError, InvalidArgument, InvalidDistribution

DEFAULT_EPS_TAIL = 1e-14
MASS_TOL = 1e-12
# Truncated series are only trusted on (a hair beyond) the closed unit disk.
DISK_SLACK = 1e-9


@dataclass(frozen=True)
class IntegerPMF:
    """Law of a non-negative integer random variable.

    ``probs[j] = P(X = j)`` for ``j = 0..D``. ``mean`` is the truncated mean
    ``sum(j * probs[j])`` and ignores ``tail_mass``.
    """

    probs: np.ndarray
    tail_mass: float = 0.0
    mean: float = field(init=False)

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise InvalidDistribution("probs must be a non-empty 1-D array")
        if not np.all(np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0):
            raise InvalidDistribution("every probability must lie in [0, 1]")
        if not (self.tail_mass >= 0.0):
            raise InvalidDistribution("tail_mass must be non-negative")
        total = float(p.sum()) + self.tail_mass
        if abs(total - 1.0) > MASS_TOL:
            raise InvalidDistribution(f"total mass {total!r} is not 1")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "tail_mass", float(self.tail_mass))
        object.__setattr__(self, "mean", float(np.dot(np.arange(p.size), p)))

    @property
    def degree(self) -> int:
        return self.probs.size - 1

    @property
    def z0(self) -> float:
        return float(self.probs[0])

    def prob(self, j: int) -> float:
        """P(X = j), zero outside the stored support."""
        if 0 <= j < self.probs.size:
            return float(self.probs[j])
        return 0.0

    def padded(self, length: int) -> np.ndarray:
        """Probabilities as a length-``length`` array (zero padded or cut)."""
        out = np.zeros(length)
        k = min(length, self.probs.size)
        out[:k] = self.probs[:k]
        return out

    @property
    def min_support(self) -> int:
        return int(np.flatnonzero(self.probs)[0])

    def is_point_mass(self) -> bool:
        return self.tail_mass == 0.0 and np.count_nonzero(self.probs) == 1

    def __eq__(self, other):
        if not isinstance(other, IntegerPMF):
            return NotImplemented
        return self.tail_mass == other.tail_mass and np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash((self.probs.tobytes(), self.tail_mass))

    def __repr__(self):
        return f"IntegerPMF(degree={self.degree}, mean={self.mean:.6g}, tail_mass={self.tail_mass:.3g})"


def _trim(p: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(p)
    return p[: nz[-1] + 1]


def pmf_from_table(weights) -> IntegerPMF:
    """Normalize non-negative weights ``w[j]`` into a PMF on ``0..len(w)-1``."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise InvalidDistribution("weights must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(w)):
        raise InvalidDistribution("weights must be finite")
    if np.any(w < 0):
        raise InvalidDistribution("weights must be non-negative")
    total = w.sum()
    if total <= 0:
        raise InvalidDistribution("weights sum to zero")
    return IntegerPMF(_trim(w / total))


def point_mass(k: int) -> IntegerPMF:
    p = np.zeros(k + 1)
    p[k] = 1.0
    return IntegerPMF(p)


def pmf_poisson(lam: float, eps_tail: float = DEFAULT_EPS_TAIL) -> IntegerPMF:
    """Poisson(``lam``) truncated where the remaining tail is below ``eps_tail``."""
    if not (lam > 0) or not np.isfinite(lam):
        raise InvalidDistribution(f"Poisson rate must be positive, got {lam!r}")
    if not (0 < eps_tail < 1):
        raise InvalidArgument("eps_tail must lie in (0, 1)")
    dist = stats.poisson(lam)
    d = max(int(dist.isf(eps_tail)), 0)
    while dist.sf(d) >= eps_tail:
        d += 1
    while d > 0 and dist.sf(d - 1) < eps_tail:
        d -= 1
    probs = dist.pmf(np.arange(d + 1))
    return IntegerPMF(probs, tail_mass=float(dist.sf(d)))


def convolve(a: IntegerPMF, b: IntegerPMF) -> IntegerPMF:
    """Law of the sum of independent ``a`` and ``b``.

    Direct (non-FFT) convolution, so structural zeros stay exactly zero. The
    tail mass ``a.tail + b.tail`` is an upper bound on the discarded mass.
    """
    probs = np.convolve(a.probs, b.probs)
    np.clip(probs, 0.0, 1.0, out=probs)
    return IntegerPMF(probs, tail_mass=a.tail_mass + b.tail_mass)


def convolve_all(pmfs) -> IntegerPMF:
    pmfs = list(pmfs)
    out = pmfs[0]
    for p in pmfs[1:]:
        out = convolve(out, p)
    return out


def _check_domain(s):
    if np.max(np.abs(s)) > 1.0 + DISK_SLACK:
        raise DomainError("truncated PGF evaluated outside the closed unit disk")


def pgf_eval(p: IntegerPMF, s):
    """``sum_j probs[j] s**j`` by Horner's rule; ``s`` may be an array."""
    _check_domain(s)
    return P.polyval(s, p.probs)


def pgf_derivative(p: IntegerPMF, s, order: int = 1):
    """Exact ``order``-th derivative of the truncated PGF at ``s``."""
    if order < 1:
        raise InvalidArgument("derivative order must be >= 1")
    _check_domain(s)
    if order > p.degree:
        return 0.0 * np.asarray(s)
    return P.polyval(s, P.polyder(p.probs, m=order))
