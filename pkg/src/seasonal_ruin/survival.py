"""Survival probabilities from the seasonal maxima, plus finite-horizon DP.

For ``u >= 1`` the ultimate survival probability is the distribution function
of the first maximum, ``phi(u) = P(M_1 <= u - 1)``; ``phi(0)`` comes from one
step of the main recursion over the first period, which is also kept as a
consistency identity for the whole table.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg
import scipy.signal

from .errors import (
    ConsistencyFailure,
    DegenerateRecursionFailure,
    InvalidArgument,
    NonProbabilisticSequence,
    ResourceLimitExceeded,
)
from .initvals import (
    InitialVector,
    build_initial_system,
    mass_identity_defect,
    solve_initial_values,
)
from .model import Regime, SeasonalModel, classify, degenerate_survival
from .roots import RootConfig, RootSet, characteristic_poly, find_unit_disk_roots

log = logging.getLogger(__name__)

PROB_TOL = 1e-9
TAIL_TARGET = 1e-6
MAX_N = 1 << 14
DP_WORK_CAP = 5e10


@dataclass(frozen=True)
class MSequence:
    """``m[k-1, n] = P(M_k = n)`` for ``n = 0..n_max``."""

    m: np.ndarray

    @property
    def n_max(self) -> int:
        return self.m.shape[1] - 1

    @property
    def deficit(self) -> np.ndarray:
        """``1 - sum_n m[k, n]`` per season; tends to 0 as ``n_max`` grows."""
        return 1.0 - self.m.sum(axis=1)


@dataclass
class SurvivalTable:
    u_max: int
    phi: np.ndarray
    regime: Regime
    finite: Optional[np.ndarray] = None  # finite[u, T], T = 0..t_max
    roots: Optional[RootSet] = None
    initial: Optional[InitialVector] = None
    msequence: Optional[MSequence] = field(default=None, repr=False)

    def check_monotone(self, tol: float = PROB_TOL) -> None:
        """Raise ``NonProbabilisticSequence`` if the table breaks monotonicity."""
        phi = self.phi
        if np.any(phi < -tol) or np.any(phi > 1 + tol) or np.any(np.diff(phi) < -tol):
            raise NonProbabilisticSequence("ultimate survival is not a non-decreasing probability")
        if self.finite is not None:
            ft = self.finite
            if np.any(np.diff(ft, axis=1) > tol) or np.any(np.diff(ft, axis=0) < -tol):
                raise NonProbabilisticSequence("finite-time survival is not monotone")
            if self.regime is Regime.NET_PROFIT and np.any(ft[: phi.size, -1] < phi[: ft.shape[0]] - tol):
                raise NonProbabilisticSequence("finite-time survival fell below ultimate survival")


def _step_matrix(model: SeasonalModel) -> np.ndarray:
    n = model.n_seasons
    a = np.zeros((n, n))
    for k, c in enumerate(model.claims):
        nxt = (k + 1) % n
        if c.z0 > 0:
            a[k, nxt] = c.z0
        else:
            a[k, k] += 1.0
            a[k, nxt] -= c.prob(1)
    return a


def _divide_root(a: np.ndarray, root: complex):
    """Quotient and remainder of ``a(s) / (s - root)``, coefficients low to high.

    Runs from the leading coefficient down, which is stable for ``|root| <= 1``.
    """
    m = a.size - 1
    b = np.zeros(m, dtype=complex)
    b[m - 1] = a[m]
    for i in range(m - 1, 0, -1):
        b[i - 1] = a[i] + root * b[i]
    return b, complex(a[0] + root * b[0])


def _series_numerator(model: SeasonalModel, m0: np.ndarray, k: int) -> np.ndarray:
    """``s**(N-1)`` times the boundary part of ``G_{M_k}`` with seasons rotated to start at ``k``."""
    n = model.n_seasons
    idx = [(j + k - n - 1) % n for j in range(1, n + 1)]
    cl = [model.claims[i] for i in idx]
    mm = [m0[i] for i in idx]
    num = np.zeros(model.s_n.probs.size + n, dtype=complex)
    num[n - 1] += mm[0] * cl[-1].z0
    g = cl[-1].probs
    for j in range(1, n):
        if j > 1:
            g = np.convolve(g, cl[j - 2].probs)
        num[n - 1 - j: n - 1 - j + g.size] += mm[j] * cl[j - 1].z0 * g
    return num


def _m_series(model, m0, roots, n_max):
    n = model.n_seasons
    den, _ = _divide_root(-characteristic_poly(model).astype(complex), 1.0)
    r = roots.zero_multiplicity
    den = den[r:]
    nonzero = [(x.value, x.multiplicity) for x in roots.nonzero()]
    for a, mult in nonzero:
        for _ in range(mult):
            den, _ = _divide_root(den, a)
    impulse = np.zeros(n_max + 1)
    impulse[0] = 1.0
    m = np.zeros((n, n_max + 1))
    for k in range(1, n + 1):
        num = _series_numerator(model, m0, k)
        if r and np.max(np.abs(num[:r])) > 1e-8:
            raise DegenerateRecursionFailure(
                f"numerator of G_M{k} does not vanish to order {r} at 0")
        num = num[r:]
        for a, mult in nonzero:
            for _ in range(mult):
                num, _ = _divide_root(num, a)
        m[k - 1] = scipy.signal.lfilter(num.real, den.real, impulse)
    return m


def _m_recursion(model, m0, n_max):
    n = model.n_seasons
    a = _step_matrix(model)
    if np.linalg.matrix_rank(a) < n:
        raise DegenerateRecursionFailure(
            "zero P(Z=0) pattern leaves the recursion underdetermined")
    lu = scipy.linalg.lu_factor(a)
    zs = [c.padded(n_max + 2) for c in model.claims]
    m = np.zeros((n, n_max + 1))
    m[:, 0] = m0
    rhs = np.zeros(n)
    for step in range(1, n_max + 1):
        for k in range(n):
            z, nxt = zs[k], (k + 1) % n
            if z[0] > 0:
                rhs[k] = m[k, step - 1] - np.dot(z[step:0:-1], m[nxt, :step])
                if step == 1:
                    rhs[k] -= m[nxt, 0] * z[0]
            else:
                rhs[k] = np.dot(z[step + 1:1:-1], m[nxt, :step])
        m[:, step] = scipy.linalg.lu_solve(lu, rhs)
    return m


def compute_m_sequence(model: SeasonalModel, m0, n_max: int,
                       tol: float = PROB_TOL, method: str = "series",
                       roots: Optional[RootSet] = None) -> MSequence:
    """``P(M_k = n)`` for ``n = 0..n_max`` from the initial vector.

    ``method="recursion"`` runs the coefficient recursion linking ``M_k`` and
    ``M_{k+1}``. With ``z0^(k) > 0`` the order-``n`` relation gives
    ``m_n^(k+1)`` directly. With ``z0^(k) = 0`` the order-``n + 1`` relation
    couples ``m_n^(k)`` and ``m_n^(k+1)``. Either way each step solves one
    fixed small system. The recursion has a mode growing like
    ``|alpha|**-n`` for the smallest disk root, so rounding error swamps it
    after a few dozen steps.

    ``method="series"`` (needs ``roots``) divides the disk roots out of the
    numerator and denominator of ``G_{M_k}`` and expands the quotient. The
    remaining poles lie outside the disk, so the expansion is stable.
    """
    n = model.n_seasons
    if n < 2:
        raise InvalidArgument("m-sequences are defined for N >= 2")
    m0 = np.asarray(getattr(m0, "m0", m0), dtype=float)
    if method == "series":
        if roots is None:
            raise InvalidArgument("the series method needs the disk roots")
        m = _m_series(model, m0, roots, n_max)
    elif method == "recursion":
        m = _m_recursion(model, m0, n_max)
    else:
        raise InvalidArgument(f"unknown method {method!r}")
    bad = (m < -tol) | (m > 1 + tol) | (np.cumsum(m, axis=1) > 1 + tol)
    if bad.any():
        step = int(np.flatnonzero(bad.any(axis=0))[0])
        raise NonProbabilisticSequence(
            f"P(M_k = {step}) left [0, 1] (values {m[:, step]})")
    m.flags.writeable = False
    return MSequence(m)


def main_recursion_rhs(model: SeasonalModel, phi, u: int) -> float:
    """Right side of the one-period recursion for ``phi(u)``.

    Sums ``P(Z_1=i_1)...P(Z_N=i_N) phi(u + N - sum(i))`` over claim vectors
    with ``i_1 + ... + i_t <= u + t - 1`` for every ``t``; needs ``phi`` up to
    index ``u + N``.
    """
    n = model.n_seasons
    w = np.ones(1)
    for t, c in enumerate(model.claims, start=1):
        w = np.convolve(w, c.probs)[: u + t]
    idx = u + n - np.arange(w.size)
    return float(np.dot(w, np.asarray(phi)[idx]))


def survival_from_msequence(model: SeasonalModel, mseq: MSequence, u_max: int) -> np.ndarray:
    n = model.n_seasons
    need = max(u_max, n)
    cum = np.concatenate(([np.nan], np.cumsum(mseq.m[0, :need])))
    cum[0] = main_recursion_rhs(model, cum, 0)
    return cum[: u_max + 1]


def _homogeneous_table(model, u_max):
    from .oracle import homogeneous_ultimate_ruin

    return 1.0 - homogeneous_ultimate_ruin(model.claims[0], u_max)


def survival_ultimate(model: SeasonalModel, u_max: int,
                      t_values: Optional[Sequence[int]] = None,
                      root_cfg: RootConfig = RootConfig(),
                      extend_tail: bool = False) -> SurvivalTable:
    """Ultimate-time survival ``phi(0..u_max)`` routed by the model's regime.

    ``t_values`` additionally fills the finite-time grid up to ``max(t_values)``.
    ``extend_tail`` lengthens the m-sequence until the unaccounted mass of
    ``M_1`` is below ``1e-6``.
    """
    if u_max < 0:
        raise InvalidArgument("u_max must be non-negative")
    cls = classify(model)
    n = model.n_seasons
    table = SurvivalTable(u_max, np.zeros(u_max + 1), cls.tag)
    if cls.tag is Regime.CRITICAL_DEGENERATE:
        table.phi = np.array([degenerate_survival(cls, u) for u in range(u_max + 1)], dtype=float)
    elif cls.tag is Regime.NET_PROFIT and cls.min_drift is not None:
        # deterministic walk: the first period holds the lowest surplus
        table.phi = (np.arange(u_max + 1) + cls.min_drift >= 1).astype(float)
    elif cls.tag is Regime.NET_PROFIT and n == 1:
        table.phi = _homogeneous_table(model, u_max)
    elif cls.tag is Regime.NET_PROFIT:
        roots = find_unit_disk_roots(model, root_cfg)
        init = solve_initial_values(build_initial_system(model, roots))
        n_max = max(u_max, n)
        mseq = compute_m_sequence(model, init, n_max, roots=roots)
        while extend_tail and mseq.deficit[0] > TAIL_TARGET and n_max < MAX_N:
            n_max *= 2
            mseq = compute_m_sequence(model, init, n_max, roots=roots)
        log.debug("m-sequence deficit %s at n_max=%d", mseq.deficit, n_max)
        table.phi = survival_from_msequence(model, mseq, u_max)
        table.roots, table.initial, table.msequence = roots, init, mseq
    if t_values:
        table.finite = survival_finite(model, u_max, max(t_values))
    return table


def survival_finite(model: SeasonalModel, u_max: int, t_max: int) -> np.ndarray:
    """``phi(u, T)`` for ``u = 0..u_max`` and ``T = 0..t_max`` (column 0 is 1).

    Forward DP on ``P(alive at step n, W_u(n) = w)``. Surplus never exceeds
    ``u + T`` so the state space is exact; claim mass beyond the truncated
    support counts as ruin, making the result a lower bound within
    ``T * tail_mass``.
    """
    if u_max < 0 or t_max < 0:
        raise InvalidArgument("u_max and t_max must be non-negative")
    n = model.n_seasons
    width = u_max + t_max + 1
    support = max(c.probs.size for c in model.claims)
    work = float(u_max + 1) * width * t_max * min(support, width)
    if work > DP_WORK_CAP:
        raise ResourceLimitExceeded(f"finite-time grid needs ~{work:.2e} operations")
    p = np.zeros((u_max + 1, width))
    p[np.arange(u_max + 1), np.arange(u_max + 1)] = 1.0
    out = np.ones((u_max + 1, t_max + 1))
    for step in range(1, t_max + 1):
        z = model.claims[(step - 1) % n].probs
        new = np.zeros_like(p)
        for j in np.flatnonzero(z[: width + 1]):
            pj = z[j]
            if j == 0:
                new[:, 1:] += pj * p[:, :-1]
            else:
                new[:, 1: width - j + 1] += pj * p[:, j:]
        p = new
        out[:, step] = p.sum(axis=1)
    return out


@dataclass(frozen=True)
class ConsistencyReport:
    max_recursion_defect: float
    recursion_defects: tuple
    finite_gap: Optional[tuple] = None  # phi(u, t_max) - phi(u)
    mass_identity_defect: Optional[float] = None


def consistency_check(model: SeasonalModel, table: SurvivalTable,
                      tol: float = 1e-8) -> ConsistencyReport:
    """Re-check ``phi`` against the one-period recursion for ``u = 0..u_max - N``."""
    n = model.n_seasons
    phi = table.phi
    defects = tuple(abs(phi[u] - main_recursion_rhs(model, phi, u))
                    for u in range(0, table.u_max - n + 1))
    worst = max(defects, default=0.0)
    gap = None
    if table.finite is not None:
        gap = tuple(float(x) for x in table.finite[:, -1] - phi)
    mass = None
    if table.initial is not None:
        mass = mass_identity_defect(model, table.initial.m0)
    report = ConsistencyReport(float(worst), tuple(float(d) for d in defects), gap, mass)
    if worst > tol:
        raise ConsistencyFailure(f"main recursion defect {worst:.3e} exceeds {tol:.1e}")
    return report


def round_display(x: float) -> str:
    """Three decimals, except values that would round to 1 keep more digits."""
    if x >= 1.0:  # rounding error can push a certain event a few ulps above 1
        return "1"
    s = f"{x:.3f}"
    if s != "1.000":
        return s
    for digits in range(4, 16):
        s = f"{x:.{digits}f}"
        if not s.startswith("1."):
            return s
    return f"{x:.16f}"
