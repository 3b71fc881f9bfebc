"""Roots of ``G_{S_N}(s) = s**N`` inside the open unit disk.

All roots of the truncated polynomial ``P(s) = G_{S_N}(s) - s**N`` are taken
from companion-matrix eigenvalues after dividing out the known root ``s = 1``
and any exact zero root. Interior candidates are clustered, each cluster is
Newton-refined on ``P`` (on ``P^(k-1)`` for a cluster of size ``k``), and the
multiplicity is confirmed by the vanishing lower derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import (
    InvalidArgument,
    ResourceLimitExceeded,
    RootCountMismatch,
    RootRefinementFailure,
)
from .model import Regime, SeasonalModel, classify


@dataclass(frozen=True)
class RootConfig:
    tol_root: float = 1e-10
    tol_boundary: float = 1e-8
    tol_cluster: float = 1e-6
    tol_mult: float = 1e-7
    max_poly_degree: int = 4096
    max_newton_iter: int = 100


@dataclass(frozen=True)
class DiskRoot:
    value: complex
    multiplicity: int
    residual: float

    @property
    def is_real(self) -> bool:
        return self.value.imag == 0.0


@dataclass(frozen=True)
class RootSet:
    roots: tuple
    candidates: tuple = field(default=(), repr=False)

    @property
    def total_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    @property
    def zero_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots if r.value == 0)

    def nonzero(self):
        return [r for r in self.roots if r.value != 0]

    def values(self) -> np.ndarray:
        """Roots repeated by multiplicity."""
        return np.array([r.value for r in self.roots for _ in range(r.multiplicity)], dtype=complex)

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)


def characteristic_poly(model: SeasonalModel) -> np.ndarray:
    """Coefficients (low to high) of ``G_{S_N}(s) - s**N`` on the truncated law."""
    n = model.n_seasons
    c = model.s_n.probs
    out = np.zeros(max(c.size - 1, n) + 1)
    out[: c.size] = c
    out[n] -= 1.0
    return out


def _newton(coeffs, x0, maxit):
    d = P.polyder(coeffs)
    x = x0
    for _ in range(maxit):
        fp = P.polyval(x, d)
        if fp == 0:
            break
        step = P.polyval(x, coeffs) / fp
        x = x - step
        if abs(step) <= 4 * np.finfo(float).eps * max(abs(x), 1.0):
            break
    return x


def _clusters(points, tol):
    """Single-linkage groups of indices whose points lie within ``tol``."""
    parent = list(range(len(points)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if abs(points[i] - points[j]) < tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(len(points)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _refine_cluster(poly, start, mult, cfg):
    target = P.polyder(poly, m=mult - 1) if mult > 1 else poly
    if abs(start.imag) < cfg.tol_cluster:
        x = complex(_newton(target, float(start.real), cfg.max_newton_iter))
    else:
        x = complex(_newton(target, complex(start), cfg.max_newton_iter))
    return x


def find_unit_disk_roots(model: SeasonalModel, cfg: RootConfig = RootConfig()) -> RootSet:
    """The ``N - 1`` roots (with multiplicity) of ``G_{S_N}(s) = s**N`` in ``|s| < 1``.

    An exact zero root (present when ``P(S_N = 0) = 0``) is reported with its
    multiplicity; all other roots are refined until ``|P(alpha)| < tol_root``.
    """
    n = model.n_seasons
    if n < 2:
        raise InvalidArgument("unit-disk roots are only needed for N >= 2")
    if classify(model).tag is not Regime.NET_PROFIT:
        raise InvalidArgument("unit-disk roots require the net profit condition")

    poly = characteristic_poly(model)
    if poly.size - 1 > cfg.max_poly_degree:
        raise ResourceLimitExceeded(
            f"polynomial degree {poly.size - 1} exceeds max_poly_degree={cfg.max_poly_degree}")
    zero_mult = int(np.flatnonzero(poly)[0])
    reduced, _ = P.polydiv(poly[zero_mult:], np.array([-1.0, 1.0]))
    candidates = P.polyroots(reduced) if reduced.size > 1 else np.array([], dtype=complex)
    candidates = np.asarray(candidates, dtype=complex)

    moduli = np.abs(candidates)
    expected = n - 1 - zero_mult
    on_boundary = np.abs(moduli - 1.0) <= cfg.tol_boundary
    interior = candidates[moduli < 1.0 - cfg.tol_boundary]
    if on_boundary.any() or interior.size != expected:
        raise RootCountMismatch(
            f"found {interior.size} interior roots and {int(on_boundary.sum())} on the unit "
            f"circle; expected {expected} interior roots",
            candidates=candidates, expected=expected)

    # (start, multiplicity) pairs; only one member of each conjugate pair is kept.
    groups = [(complex(np.mean(interior[g])), len(g)) for g in _clusters(interior, cfg.tol_cluster)]
    upper = [(c, k) for c, k in groups if c.imag > -cfg.tol_cluster]
    for _ in range(n):
        refined = [(_refine_cluster(poly, c, k, cfg), k) for c, k in upper]
        merged = _clusters([x for x, _ in refined], cfg.tol_cluster)
        if len(merged) == len(refined):
            break
        upper = [(refined[g[0]][0], sum(refined[i][1] for i in g)) for g in merged]

    roots = []
    for x, k in refined:
        if abs(x.imag) < cfg.tol_cluster:
            x = complex(x.real, 0.0)
        if not abs(x) < 1.0 - cfg.tol_boundary:
            raise RootRefinementFailure(f"refined root {x} left the unit disk")
        residual = float(abs(P.polyval(x, poly)))
        if not residual < cfg.tol_root:
            raise RootRefinementFailure(f"root {x} has residual {residual:.3e}")
        for order in range(1, k):
            d = abs(P.polyval(x, P.polyder(poly, m=order)))
            if not d < cfg.tol_mult:
                raise RootRefinementFailure(
                    f"root {x}: derivative of order {order} is {d:.3e}, "
                    f"multiplicity {k} not confirmed")
        roots.append(DiskRoot(x, k, residual))
        if x.imag != 0.0:
            roots.append(DiskRoot(x.conjugate(), k, residual))

    if zero_mult:
        roots.append(DiskRoot(0j, zero_mult, 0.0))
    roots.sort(key=lambda r: (r.value.real, r.value.imag))
    out = RootSet(tuple(roots), candidates=tuple(candidates))
    if out.total_multiplicity != n - 1:
        raise RootCountMismatch(
            f"multiplicities sum to {out.total_multiplicity}, expected {n - 1}",
            candidates=candidates, expected=n - 1)
    return out
