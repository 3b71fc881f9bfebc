"""Initial probabilities ``m0[k-1] = P(M_k = 0)`` of the seasonal maxima.

Unknowns are ordered ``m0^(1), ..., m0^(N)``. Each non-zero disk root
``alpha`` gives a row whose first entry is ``z0^(N)`` and whose entry for
``m0^(k+1)`` is ``z0^(k) * G_{Z_N + Z_1 + ... + Z_{k-1}}(alpha) / alpha**k``;
a root of multiplicity ``kappa`` also contributes the derivatives of orders
``1..kappa-1`` of those entries. Seasons with ``P(Z_k = 0) = 0`` contribute
the first-order relation ``m0^(k) = P(Z_k = 1) * m0^(k+1)`` in place of the
rows lost to the zero root. The last row is the mass identity
``m0^(1) z0^(N) + sum_k m0^(k+1) z0^(k) = N - E S_N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.optimize import brentq

from .errors import (
    InvalidArgument,
    NonProbabilisticSolution,
    RootCountMismatch,
    SingularInitialSystem,
)
from .model import Regime, SeasonalModel, classify
from .pmf import convolve, pgf_derivative, pgf_eval
from .roots import RootSet


@dataclass(frozen=True)
class RowTag:
    kind: str  # "root", "derivative", "degeneracy" or "mass"
    root: Optional[complex] = None
    order: int = 0
    season: Optional[int] = None
    part: Optional[str] = None  # "re"/"im" after conjugate splitting

    def describe(self) -> str:
        if self.kind == "mass":
            return "mass"
        if self.kind == "degeneracy":
            return f"degeneracy(season={self.season})"
        base = f"{self.kind}(alpha={self.root:.10g}"
        if self.kind == "derivative":
            base += f", l={self.order}"
        return base + (f", {self.part})" if self.part else ")")


@dataclass(frozen=True)
class InitialSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    row_provenance: tuple


@dataclass(frozen=True)
class InitialVector:
    m0: np.ndarray
    residual: float
    condition: float


def _leading_sums(model: SeasonalModel):
    """PMFs of ``Z_N + Z_1 + ... + Z_{k-1}`` for ``k = 1..N-1``."""
    claims = model.claims
    out = [claims[-1]]
    for k in range(2, model.n_seasons):
        out.append(convolve(out[-1], claims[k - 2]))
    return out


def _falling(a: int, j: int) -> float:
    out = 1.0
    for t in range(j):
        out *= a - t
    return out


def _shifted_derivative(g, alpha: complex, k: int, order: int) -> complex:
    """d^order/ds^order of ``G_g(s) * s**(-k)`` at ``alpha`` (Leibniz rule)."""
    total = 0j
    for i in range(order + 1):
        gi = pgf_eval(g, alpha) if i == 0 else pgf_derivative(g, alpha, i)
        j = order - i
        total += comb(order, i) * gi * _falling(-k, j) * alpha ** (-k - j)
    return complex(total)


def _root_row(model, sums, alpha, order):
    n = model.n_seasons
    row = np.zeros(n, dtype=complex)
    row[0] = model.claims[-1].z0 if order == 0 else 0.0
    for k in range(1, n):
        z0 = model.claims[k - 1].z0
        if z0 != 0.0:
            row[k] = z0 * _shifted_derivative(sums[k - 1], alpha, k, order)
    return row


def build_initial_system(model: SeasonalModel, roots: RootSet,
                         split_conjugates: bool = True) -> InitialSystem:
    """Assemble the square system whose solution is the initial vector.

    Row order: each root's row followed by its derivative rows (roots sorted
    as in ``roots``), then degeneracy rows by season, then the mass row. With
    ``split_conjugates`` a complex pair is replaced by the real and imaginary
    parts of one representative and the system is real.
    """
    n = model.n_seasons
    if n < 2 or classify(model).tag is not Regime.NET_PROFIT:
        raise InvalidArgument("initial system needs N >= 2 and the net profit condition")
    sums = _leading_sums(model)
    rows, tags = [], []

    for r in roots.nonzero():
        a = r.value
        if split_conjugates and a.imag < 0:
            continue
        for order in range(r.multiplicity):
            kind = "root" if order == 0 else "derivative"
            row = _root_row(model, sums, a, order)
            if split_conjugates and a.imag > 0:
                rows += [row.real, row.imag]
                tags += [RowTag(kind, a, order, part="re"), RowTag(kind, a, order, part="im")]
            else:
                rows.append(row.real if split_conjugates else row)
                tags.append(RowTag(kind, a, order))

    zero_z0 = [k for k in range(1, n + 1) if model.claims[k - 1].z0 == 0.0]
    for k in zero_z0:
        z1 = model.claims[k - 1].prob(1)
        if z1 == 0.0:
            raise SingularInitialSystem(
                f"season {k} has P(Z=0) = P(Z=1) = 0; only first-order degeneracy is supported",
                zero_z0=zero_z0)
        row = np.zeros(n)
        row[k - 1] += 1.0
        row[k % n] -= z1
        rows.append(row)
        tags.append(RowTag("degeneracy", season=k))

    mass = np.array([model.claims[-1].z0] + [model.claims[k - 1].z0 for k in range(1, n)])
    rows.append(mass)
    tags.append(RowTag("mass"))

    if len(rows) != n:
        raise SingularInitialSystem(
            f"assembled {len(rows)} equations for {n} unknowns "
            f"(zero-root multiplicity {roots.zero_multiplicity}, zero z0 seasons {zero_z0})",
            rank=len(rows), zero_z0=zero_z0)
    matrix = np.array(rows, dtype=float if split_conjugates else complex)
    rhs = np.zeros(n, dtype=matrix.dtype)
    rhs[-1] = n - model.mean_s_n
    matrix.flags.writeable = False
    rhs.flags.writeable = False
    return InitialSystem(matrix, rhs, tuple(tags))


def solve_initial_values(system: InitialSystem, tol_sys: float = 1e-10,
                         tol_prob: float = 1e-9) -> InitialVector:
    """LU solve with one round of iterative refinement.

    Entries are not clamped: anything outside ``[-tol_prob, 1 + tol_prob]``
    raises ``NonProbabilisticSolution``.
    """
    a, b = system.matrix, system.rhs
    zero_z0 = [t.season for t in system.row_provenance if t.kind == "degeneracy"]
    rank = int(np.linalg.matrix_rank(a))
    if rank < a.shape[0]:
        raise SingularInitialSystem("initial system is singular", rank=rank, zero_z0=zero_z0)
    cond = float(np.real(np.linalg.cond(a, 1)))
    if not np.isfinite(cond) or cond > 1e14:
        raise SingularInitialSystem(f"initial system is numerically singular (cond={cond:.3e})",
                                    rank=rank, zero_z0=zero_z0)
    lu = scipy.linalg.lu_factor(a)
    x = scipy.linalg.lu_solve(lu, b)
    x = x + scipy.linalg.lu_solve(lu, b - a @ x)
    if np.iscomplexobj(x):
        if np.max(np.abs(x.imag)) > tol_sys:
            raise NonProbabilisticSolution(f"complex solution with imaginary part {np.max(np.abs(x.imag)):.3e}")
    residual = float(np.max(np.abs(a @ x - b)))
    if not residual < tol_sys:
        raise SingularInitialSystem(f"residual {residual:.3e} exceeds {tol_sys:.1e}",
                                    rank=rank, zero_z0=zero_z0)
    x = np.real(x).astype(float)
    if np.any(x < -tol_prob) or np.any(x > 1 + tol_prob):
        raise NonProbabilisticSolution(f"initial values {x} are not probabilities")
    x.flags.writeable = False
    return InitialVector(x, residual, cond)


def mass_identity_defect(model: SeasonalModel, m0) -> float:
    n = model.n_seasons
    z0 = model.z0
    lhs = m0[0] * z0[n - 1] + sum(m0[k] * z0[k - 1] for k in range(1, n))
    return float(abs(lhs - (n - model.mean_s_n)))


def root_row_defects(model: SeasonalModel, roots: RootSet, m0) -> list:
    """``|row(alpha) . m0|`` for every non-zero simple-or-multiple root."""
    sums = _leading_sums(model)
    return [float(abs(_root_row(model, sums, r.value, 0) @ np.asarray(m0)))
            for r in roots.nonzero()]


def bi_seasonal_closed_form(model: SeasonalModel):
    """``(phi(0), phi(1))`` of a two-season model in closed form.

    Uses the unique root of ``G_{S_2}(s) = s**2`` in ``(-1, 0)``, located by
    bracketing independently of the general root finder.
    """
    if model.n_seasons != 2:
        raise InvalidArgument("closed form applies to two seasons only")
    if classify(model).tag is not Regime.NET_PROFIT:
        raise InvalidArgument("closed form requires E S_2 < 2")
    z1, z2 = model.claims
    gap = 2.0 - model.mean_s_n
    if z1.z0 > 0 and z2.z0 > 0:
        f = lambda s: pgf_eval(model.s_n, s) - s * s
        lo = f(-1.0)
        if not lo < 0:
            raise RootCountMismatch("G_{S_2}(s) - s^2 has no sign change on (-1, 0)")
        alpha = brentq(f, -1.0, 0.0, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)
        g = pgf_eval(z2, alpha)
        return gap * alpha / (alpha - g), gap / z2.z0 * g / (g - alpha)
    if z2.z0 == 0:
        return gap, gap / (z1.z0 * z2.prob(1))
    return 0.0, gap / z2.z0
