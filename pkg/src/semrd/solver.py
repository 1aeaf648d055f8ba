"""Alternating-minimization solver for the three-constraint conditional
rate-distortion problem.

The problem: over conditional pmfs t(x1h, x2h, sh | x1, x2, y), minimize
I(X1, X2; X1h, X2h, Sh | Y) subject to

    E d1(X1, X1h) <= D1,   E d2(X2, X2h) <= D2,   E d's(X1, Sh) <= Ds,

where d's is the posterior-averaged semantic distortion (already a plain
table over observation x reproduction symbols by the time it reaches this
module). The semantic target Ds is consumed raw; no scalar transform is
applied here.

Approach
--------
For fixed nonnegative multipliers (l1, l2, ls) the Lagrangian decomposes into
one classical rate-distortion problem per side-information value y, on the
composite source alphabet X1 x X2 and composite reproduction alphabet
X1h x X2h x Sh with per-letter cost l1*d1 + l2*d2 + ls*d's. Each per-y
problem is solved by alternating minimization between the reproduction
marginal q_y and the channel t_y (t_y proportional to q_y * exp(-cost), cost
in nats). Sharing one multiplier triple across all y realizes the optimal
distortion allocation across side-information values, because each per-y
rate-distortion surface is convex.

Two numerical details matter:

* Stopping uses an optimality certificate in addition to the per-iteration
  Lagrangian decrease. With c(h) = sum_x p(x) W(x,h) / Z(x) (the
  multiplicative marginal update), convexity gives
  F(q) - min F <= max_h c(h) - 1; the iteration stops only once this bound is
  below ``cert_tol``. Plain decrease-based stopping can freeze a warm-started
  run far from the new fixed point.

* The multiplier search is a per-coordinate bisection inside a small
  Gauss-Seidel loop. A constraint whose target is reachable at zero rate cost
  (given the other constraints) is detected by re-attaching its reproduction
  coordinate as a deterministic function of the remaining reproductions and
  y; such coordinates keep multiplier 0 and the attachment is applied to the
  returned channel. If a bisection bracket collapses onto a jump of the
  distortion-vs-multiplier map (a linear segment of the rate surface), the
  two endpoint channels are mixed; the mixture is optimal for the common
  multiplier and meets the target exactly.

Exponent underflow is handled by shifting each cost row by its maximum before
exponentiation. Rates are returned in ``problem.log_base`` units; multipliers
are natural-log based (they appear inside exp).
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BracketingError,
    InfeasibleDistortionError,
    ProbabilityError,
    SolverError,
)
from .prob import Alphabet, DistortionMatrix, JointPMF, _check_log_base

_COORDS = (0, 1, 2)


@dataclass(frozen=True)
class SolverOptions:
    """Tunables for the alternating minimization and the multiplier search.

    ``tol`` is the per-iteration Lagrangian-decrease threshold (nats);
    ``cert_tol`` the optimality-certificate threshold that must hold as well.
    ``constraint_tol`` is the distortion-matching tolerance of the multiplier
    bisection, ``rate_tol`` the acceptable complementary-slackness residual
    (same units as the returned rate). ``init_seed`` adds a deterministic
    multiplicative jitter to the uniform initialization; None means exactly
    uniform.

    The iteration cap leaves headroom for the slow regime where a
    reproduction atom sits near its support threshold: the certificate then
    decays sublinearly and a warm-started run can legitimately need a few
    tens of thousands of iterations.
    """

    max_iters: int = 50000
    tol: float = 1e-10
    cert_tol: float = 1e-12
    stall_cert: float = 1e-8
    stall_drift_tol: float = 1e-12
    constraint_tol: float = 1e-9
    rate_tol: float = 1e-6
    lambda_cap: float = 1e8
    max_rounds: int = 8
    init_seed: int | None = None

    def __post_init__(self) -> None:
        if self.tol <= 0 or self.cert_tol <= 0 or self.constraint_tol <= 0:
            raise ProbabilityError("solver tolerances must be positive")
        if self.max_iters < 1 or self.max_rounds < 1:
            raise ProbabilityError("iteration limits must be >= 1")


DEFAULT_OPTIONS = SolverOptions()


@dataclass(frozen=True)
class RDProblem:
    """One solver instance: source law, reproduction alphabets, distortions."""

    source: JointPMF  # axes (x1, x2, y)
    repro_alphabets: tuple[Alphabet, Alphabet, Alphabet]  # (x1h, x2h, sh)
    d1: DistortionMatrix  # x1 x x1h
    d2: DistortionMatrix  # x2 x x2h
    ds_mod: DistortionMatrix  # x1 x sh (posterior-averaged semantic table)
    log_base: float = 2.0

    def __post_init__(self) -> None:
        _check_log_base(self.log_base)
        if len(self.source.axes) != 3:
            raise ProbabilityError(
                f"source must have exactly 3 axes (observation, background, side info); "
                f"got {self.source.axis_names}"
            )
        repro = tuple(self.repro_alphabets)
        if len(repro) != 3:
            raise ProbabilityError("repro_alphabets must be a triple")
        object.__setattr__(self, "repro_alphabets", repro)
        names = self.source.axis_names + tuple(a.name for a in repro)
        if len(set(names)) != 6:
            raise ProbabilityError(f"source and reproduction axis names must be distinct: {names}")
        x1, x2, _y = self.source.axes
        pairs = (
            ("d1", self.d1, x1, repro[0]),
            ("d2", self.d2, x2, repro[1]),
            ("ds_mod", self.ds_mod, x1, repro[2]),
        )
        for label, d, src, rep in pairs:
            if d.source_axis != src or d.repro_axis != rep:
                raise ProbabilityError(
                    f"{label} alphabets {d.source_axis.name}x{d.repro_axis.name} do not match "
                    f"problem axes {src.name}x{rep.name}"
                )

    @property
    def axis_names(self) -> tuple[str, ...]:
        return self.source.axis_names + tuple(a.name for a in self.repro_alphabets)


@dataclass(frozen=True)
class RDQuery:
    """Target distortions. ``ds`` is the raw semantic target; the constraint
    enforced is E d's(X1, Sh) <= ds."""

    d1: float
    d2: float
    ds: float

    def __post_init__(self) -> None:
        for name in ("d1", "d2", "ds"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)) or v < 0.0:
                raise ProbabilityError(f"query {name} must be finite and >= 0, got {v!r}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.d1, self.d2, self.ds)


@dataclass(frozen=True)
class RDPoint:
    """A solved point: rate (log_base units/symbol), exact achieved
    distortions under ``channel``, the multipliers used (natural-log based),
    and solver diagnostics. ``cs_residual`` bounds |rate - optimum| via
    complementary slackness."""

    rate: float
    achieved: tuple[float, float, float]
    multipliers: tuple[float, float, float]
    channel: JointPMF
    iterations: int
    converged: bool
    cs_residual: float = 0.0


@dataclass(frozen=True)
class SurfaceCell:
    index: tuple[int, ...]
    query: RDQuery
    point: RDPoint | None
    error: str | None = None


@dataclass(frozen=True)
class RDSurface:
    grid_axes: tuple[tuple[str, tuple[float, ...]], ...]
    points: tuple[SurfaceCell, ...]


class _Workspace:
    """Flattened tensors for one problem: P[y, x] conditionals over the
    composite source index x = (x1, x2), cost tables c_i[x, h] over the
    composite reproduction index h = (x1h, x2h, sh)."""

    def __init__(self, problem: RDProblem):
        self.problem = problem
        x1, x2, y = problem.source.axes
        h1, h2, hs = problem.repro_alphabets
        self.nx1, self.nx2, self.ny = x1.size, x2.size, y.size
        self.nh1, self.nh2, self.nhs = h1.size, h2.size, hs.size
        self.nx = self.nx1 * self.nx2
        self.nh = self.nh1 * self.nh2 * self.nhs

        src = problem.source.probs  # (nx1, nx2, ny)
        p_y_full = src.sum(axis=(0, 1))
        self.y_idx = np.where(p_y_full > 0.0)[0]
        if self.y_idx.size == 0:
            raise ProbabilityError("source has no side-information mass")
        self.p_y = p_y_full[self.y_idx]
        flat = np.moveaxis(src, 2, 0).reshape(self.ny, self.nx)[self.y_idx]
        self.P = flat / self.p_y[:, None]
        self.Pw = self.p_y[:, None] * self.P

        shape5 = (self.nx1, self.nx2, self.nh1, self.nh2, self.nhs)
        c1 = np.broadcast_to(problem.d1.values[:, None, :, None, None], shape5)
        c2 = np.broadcast_to(problem.d2.values[None, :, None, :, None], shape5)
        cs = np.broadcast_to(problem.ds_mod.values[:, None, None, None, :], shape5)
        self.costs = tuple(np.ascontiguousarray(c.reshape(self.nx, self.nh)) for c in (c1, c2, cs))
        # per-coordinate small tables indexed by composite x, used by attachments
        d1x = np.broadcast_to(problem.d1.values[:, None, :], (self.nx1, self.nx2, self.nh1))
        d2x = np.broadcast_to(problem.d2.values[None, :, :], (self.nx1, self.nx2, self.nh2))
        dsx = np.broadcast_to(problem.ds_mod.values[:, None, :], (self.nx1, self.nx2, self.nhs))
        self.coord_costs = tuple(
            np.ascontiguousarray(d.reshape(self.nx, -1)) for d in (d1x, d2x, dsx)
        )
        self.h_sizes = (self.nh1, self.nh2, self.nhs)

    # ---- alternating minimization -------------------------------------

    def initial_marginal(self, seed: int | None) -> np.ndarray:
        ny = len(self.p_y)
        Q = np.full((ny, self.nh), 1.0 / self.nh)
        if seed is not None:
            rng = np.random.default_rng(seed)
            Q = Q * (1.0 + 1e-3 * rng.uniform(-1.0, 1.0, size=Q.shape))
            Q /= Q.sum(axis=1, keepdims=True)
        return Q

    def ba(
        self,
        lam: Sequence[float],
        opts: SolverOptions,
        Q0: np.ndarray | None = None,
    ) -> tuple[np.ndarray, np.ndarray, int, bool]:
        """Minimize the Lagrangian at fixed multipliers.

        Returns (T, Q, iterations, converged) with T[y, x, h] the conditional
        channel and Q[y, h] its output marginal.
        """
        e = -(lam[0] * self.costs[0] + lam[1] * self.costs[1] + lam[2] * self.costs[2])
        shift = e.max(axis=1)
        W = np.exp(e - shift[:, None])
        Wt = W.T.copy()
        P, p_y = self.P, self.p_y
        Q = self.initial_marginal(opts.init_seed) if Q0 is None else Q0
        F_prev = math.inf
        it = 0
        converged = False
        d_checkpoint = None
        while it < opts.max_iters:
            it += 1
            Z = Q @ Wt  # (ny, nx)
            G = P / Z
            c = G @ W  # (ny, nh)
            F = -float(np.dot(p_y, (P * (np.log(Z) + shift[None, :])).sum(axis=1)))
            if F > F_prev + 1e-11 * (1.0 + abs(F)):
                raise SolverError(
                    f"Lagrangian increased from {F_prev!r} to {F!r} at iteration {it}"
                )
            cert = float(np.dot(p_y, np.maximum(c.max(axis=1) - 1.0, 0.0)))
            small_step = F_prev - F < opts.tol
            Q = Q * c
            Q /= Q.sum(axis=1, keepdims=True)
            if small_step and cert < opts.cert_tol:
                converged = True
                break
            if small_step and cert < opts.stall_cert and it % 500 == 0:
                # sublinear regime: an atom at its support threshold regrows at a
                # vanishing rate. The certificate already bounds the remaining
                # Lagrangian gap; accept once the distortion readings are still.
                Zc = Q @ Wt
                Tc = Q[:, None, :] * W[None, :, :] / Zc[:, :, None]
                d_now = self.distortions(Tc)
                if d_checkpoint is not None and all(
                    abs(a - b) < opts.stall_drift_tol for a, b in zip(d_now, d_checkpoint)
                ):
                    converged = True
                    break
                d_checkpoint = d_now
            F_prev = F
        Z = Q @ Wt
        T = Q[:, None, :] * W[None, :, :] / Z[:, :, None]
        return T, Q, it, converged

    # ---- per-channel statistics ----------------------------------------

    def distortions(self, T: np.ndarray) -> tuple[float, float, float]:
        return tuple(float(np.einsum("yx,yxh,xh->", self.Pw, T, c)) for c in self.costs)

    def rate_nats(self, T: np.ndarray) -> float:
        Q = np.einsum("yx,yxh->yh", self.P, T)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = T / np.maximum(Q[:, None, :], 1e-300)
            lg = np.where(T > 0.0, np.log(np.maximum(ratio, 1e-300)), 0.0)
        return max(float(np.einsum("yx,yxh->", self.Pw, T * lg)), 0.0)

    # ---- attachments -----------------------------------------------------

    def _attachment_parts(self, T: np.ndarray, coord: int):
        ny = len(self.p_y)
        ax = 2 + coord  # h-axis position inside the (ny, nx, nh1, nh2, nhs) view
        J5 = (self.Pw[:, :, None] * T).reshape(ny, self.nx, *self.h_sizes)
        Jm = J5.sum(axis=ax)  # (ny, nx, <other two h axes>)
        ed = np.einsum("yxab,xk->yabk", Jm, self.coord_costs[coord])
        return ax, ed

    def attachment_value(self, T: np.ndarray, coord: int) -> float:
        """Best E d_coord over deterministic re-attachments of that
        reproduction coordinate as a function of (other reproductions, y)."""
        _, ed = self._attachment_parts(T, coord)
        return float(ed.min(axis=3).sum())

    def attach(self, T: np.ndarray, coord: int) -> np.ndarray:
        """Apply the best deterministic re-attachment; does not change the
        conditional mutual information."""
        ax, ed = self._attachment_parts(T, coord)
        ny = len(self.p_y)
        best = ed.argmin(axis=3)  # (ny, a, b)
        nk = self.h_sizes[coord]
        onehot = np.eye(nk)[best]  # (ny, a, b, nk)
        T5 = T.reshape(ny, self.nx, *self.h_sizes)
        collapsed = T5.sum(axis=ax)  # (ny, nx, a, b)
        mixed = np.einsum("yxab,yabk->yxabk", collapsed, onehot)
        T5_new = np.moveaxis(mixed, 4, ax)
        return np.ascontiguousarray(T5_new.reshape(ny, self.nx, self.nh))

    # ---- floors ---------------------------------------------------------

    def absolute_floor(self, coord: int) -> float:
        """Distortion floor with full observation knowledge (max-rate limit)."""
        p_x = self.Pw.sum(axis=0)
        return float((p_x * self.coord_costs[coord].min(axis=1)).sum())

    def zero_rate_floor(self, coord: int) -> float:
        """Best distortion with reproductions depending on y alone."""
        ed = np.einsum("yx,xk->yk", self.Pw, self.coord_costs[coord])
        return float(ed.min(axis=1).sum())

    # ---- assembly ---------------------------------------------------------

    def assemble_joint(self, T: np.ndarray) -> JointPMF:
        """Full joint over (x1, x2, y, x1h, x2h, sh) induced by the channel."""
        full = np.zeros((self.ny, self.nx, self.nh))
        full[self.y_idx] = self.Pw[:, :, None] * T
        shaped = full.reshape(self.ny, self.nx1, self.nx2, self.nh1, self.nh2, self.nhs)
        shaped = np.moveaxis(shaped, 0, 2)  # -> (x1, x2, y, h1, h2, hs)
        prob = self.problem
        axes = prob.source.axes + prob.repro_alphabets
        total = shaped.sum()
        if abs(total - 1.0) > 1e-9:
            raise SolverError(f"assembled joint mass {total!r} drifted from 1")
        return JointPMF(axes, shaped / total)


def _point_from_channel(
    ws: _Workspace,
    T: np.ndarray,
    lam: Sequence[float],
    iterations: int,
    converged: bool,
    targets: Sequence[float] | None = None,
) -> RDPoint:
    problem = ws.problem
    joint = ws.assemble_joint(T)
    names = problem.axis_names
    rate = joint.conditional_mutual_information(
        (names[0], names[1]), (names[3], names[4], names[5]), (names[2],), problem.log_base
    )
    achieved = (
        joint.expected_distortion(problem.d1, names[0], names[3]),
        joint.expected_distortion(problem.d2, names[1], names[4]),
        joint.expected_distortion(problem.ds_mod, names[0], names[5]),
    )
    cs = 0.0
    if targets is not None:
        ln_base = math.log(problem.log_base)
        cs = sum(l * abs(t - a) for l, t, a in zip(lam, targets, achieved)) / ln_base
    return RDPoint(
        rate=rate,
        achieved=achieved,
        multipliers=tuple(float(l) for l in lam),
        channel=joint,
        iterations=iterations,
        converged=converged,
        cs_residual=cs,
    )


def ba_fixed_multipliers(
    problem: RDProblem,
    lambda1: float,
    lambda2: float,
    lambda_s: float,
    opts: SolverOptions = DEFAULT_OPTIONS,
) -> RDPoint:
    """Solve the Lagrangian problem at fixed multipliers (natural-log based).

    Returns the fixed point's rate and exact achieved distortions. No slack
    re-attachment is applied here; coordinates with zero multiplier keep
    whatever (rate-free) reproduction the alternating minimization settles on.
    """
    lam = (float(lambda1), float(lambda2), float(lambda_s))
    if any(not math.isfinite(l) or l < 0.0 for l in lam):
        raise ProbabilityError(f"multipliers must be finite and >= 0, got {lam}")
    ws = _Workspace(problem)
    T, _Q, it, converged = ws.ba(lam, opts)
    return _point_from_channel(ws, T, lam, it, converged)


class _MultiplierSearch:
    """Gauss-Seidel bisection over the three multipliers for one query."""

    def __init__(self, ws: _Workspace, query: RDQuery, opts: SolverOptions):
        self.ws = ws
        self.opts = opts
        self.targets = query.as_tuple()
        self.lam = [0.0, 0.0, 0.0]
        self.Q: np.ndarray | None = None
        self.T: np.ndarray | None = None
        self.dist: tuple[float, float, float] | None = None
        self.iterations = 0
        self.all_converged = True
        self._reroute_tried: set[int] = set()

    def _solve(self) -> tuple[float, float, float]:
        Q0 = None
        if self.Q is not None:
            # re-seed dead atoms so support can be rediscovered after lambda moves
            Q0 = (1.0 - 1e-9) * self.Q + 1e-9 / self.ws.nh
        T, Q, it, conv = self.ws.ba(self.lam, self.opts, Q0=Q0)
        self.T, self.Q = T, Q
        self.iterations += it
        self.all_converged &= conv
        self.dist = self.ws.distortions(T)
        return self.dist

    def _mix_endpoints(self, coord: int, lo: float, hi: float, target: float) -> None:
        self.lam[coord] = lo
        d_lo = self._solve()
        T_lo = self.T
        self.lam[coord] = hi
        d_hi = self._solve()
        if d_lo[coord] <= target or d_lo[coord] - d_hi[coord] <= 0.0:
            return  # lo side already feasible (or no jump); keep hi solution
        theta = (d_lo[coord] - target) / (d_lo[coord] - d_hi[coord])
        theta = min(max(theta, 0.0), 1.0)
        self.T = theta * self.T + (1.0 - theta) * T_lo
        self.Q = np.einsum("yx,yxh->yh", self.ws.P, self.T)
        self.dist = self.ws.distortions(self.T)

    def _slack_at_zero(self, coord: int, target: float) -> bool:
        """With lam[coord] pinned to 0, can a free re-attachment meet the target?"""
        self.lam[coord] = 0.0
        self._solve()
        return self.ws.attachment_value(self.T, coord) <= target + self.opts.constraint_tol

    def _pinned_reroute(self, coord: int, target: float) -> bool:
        """Pin lam[coord] to 0, rebalance the other multipliers, then retry
        the attachment test.

        Handles the dual ridge where two constraints share a source symbol:
        Gauss-Seidel states with this coordinate's multiplier positive can be
        rate-optimal yet creep toward the complementary-slack endpoint one
        small step per round. Rebalancing the other multipliers first lets
        the slack test see the endpoint directly. Attempted at most once per
        coordinate; a failed attempt restores the previous state.
        """
        if coord in self._reroute_tried:
            return False
        self._reroute_tried.add(coord)
        saved = (
            list(self.lam),
            None if self.T is None else self.T.copy(),
            None if self.Q is None else self.Q.copy(),
            self.dist,
        )
        self.lam[coord] = 0.0
        for other in _COORDS:
            if other != coord:
                self._bisect_coord(other, allow_reroute=False)
        self.lam[coord] = 0.0
        self._solve()
        if self.ws.attachment_value(self.T, coord) <= target + self.opts.constraint_tol:
            return True
        self.lam[:] = saved[0]
        self.T, self.Q, self.dist = saved[1], saved[2], saved[3]
        return False

    def _bisect_coord(self, coord: int, allow_reroute: bool = True) -> bool:
        """Adjust lam[coord]; returns True when the coordinate is active.

        A coordinate whose constraint already reads tight at its current
        positive multiplier is kept: tight constraints with nonnegative
        multipliers form a KKT point of the convex problem, so the outer
        loop's whole-round verification is the only consistency check needed.
        """
        ctol = self.opts.constraint_tol
        target = self.targets[coord]
        lam_prev = self.lam[coord]
        lo = hi = None
        if lam_prev > 0.0:
            d = self._solve()
            if abs(d[coord] - target) <= ctol:
                return True
            if d[coord] > target:  # need a larger multiplier; expand upward
                lo, hi = lam_prev, lam_prev * 2.0
            else:
                # over-satisfied at a positive multiplier: usually another
                # multiplier now covers this constraint for free, so try the
                # slack route before hunting for a smaller bracket
                if self._slack_at_zero(coord, target):
                    return False
                if allow_reroute and self._pinned_reroute(coord, target):
                    return False
                hi = lam_prev
                probe = lam_prev / 4.0
                while probe > 1e-12:
                    self.lam[coord] = probe
                    d = self._solve()
                    if abs(d[coord] - target) <= ctol:
                        return True
                    if d[coord] > target:
                        lo = probe
                        break
                    hi = probe
                    probe /= 4.0
                if lo is None:
                    lo = 0.0
        else:
            if self._slack_at_zero(coord, target):
                return False
            lo, hi = 0.0, 1.0
        while True:
            self.lam[coord] = hi
            d = self._solve()
            if d[coord] <= target + ctol:
                break
            lo = hi
            hi *= 4.0
            if hi > self.opts.lambda_cap:
                raise BracketingError(
                    f"could not bracket constraint {coord}: target {target}, "
                    f"achieved {d[coord]} at multiplier {lo}, "
                    f"full-information floor {self.ws.absolute_floor(coord)}"
                )
        if d[coord] >= target - ctol:
            return True
        for _ in range(200):
            if hi - lo <= 1e-12 * max(1.0, hi):
                self._mix_endpoints(coord, lo, hi, target)
                return True
            mid = 0.5 * (lo + hi)
            self.lam[coord] = mid
            d = self._solve()
            if abs(d[coord] - target) <= ctol:
                return True
            if d[coord] > target:
                lo = mid
            else:
                hi = mid
        raise BracketingError(f"bisection failed to converge for constraint {coord}")

    def run(self) -> tuple[list[bool], float]:
        active = [False, False, False]
        violation = math.inf
        for rnd in range(self.opts.max_rounds):
            lam_before = list(self.lam)
            for coord in _COORDS:
                active[coord] = self._bisect_coord(coord)
            violation = 0.0
            for coord in _COORDS:
                if active[coord]:
                    violation = max(violation, abs(self.dist[coord] - self.targets[coord]))
                else:
                    att = self.ws.attachment_value(self.T, coord)
                    violation = max(violation, max(0.0, att - self.targets[coord]))
            moved = max(abs(a - b) for a, b in zip(lam_before, self.lam))
            settled = rnd > 0 and moved <= 1e-7 * max(1.0, max(self.lam))
            if violation <= 5.0 * self.opts.constraint_tol and settled:
                break
        return active, violation


def solve_rd_point(
    problem: RDProblem,
    query: RDQuery,
    opts: SolverOptions = DEFAULT_OPTIONS,
) -> RDPoint:
    """Minimum rate meeting the query's three expected-distortion targets.

    Targets at or above the zero-rate distortion of a coordinate leave that
    constraint slack (zero multiplier). Targets below the full-information
    floor raise :class:`InfeasibleDistortionError`. The returned channel's
    achieved distortions satisfy the query up to ``opts.constraint_tol``.
    """
    ws = _Workspace(problem)
    targets = query.as_tuple()
    for coord in _COORDS:
        floor = ws.absolute_floor(coord)
        if targets[coord] < floor - 1e-12:
            raise InfeasibleDistortionError(
                f"constraint {coord}: target {targets[coord]} is below the "
                f"full-information floor {floor}"
            )
    if all(targets[c] >= ws.zero_rate_floor(c) - 1e-15 for c in _COORDS):
        # zero rate: reproductions depend on y alone
        T = np.full((len(ws.p_y), ws.nx, ws.nh), 1.0 / ws.nh)
        for coord in _COORDS:
            T = ws.attach(T, coord)
        return _point_from_channel(ws, T, (0.0, 0.0, 0.0), 0, True, targets)

    search = _MultiplierSearch(ws, query, opts)
    active, violation = search.run()
    T = search.T
    for coord in _COORDS:
        if not active[coord]:
            T = ws.attach(T, coord)
    point = _point_from_channel(
        ws, T, search.lam, search.iterations, search.all_converged, targets
    )
    ok = (
        search.all_converged
        and violation <= 5.0 * opts.constraint_tol
        and point.cs_residual <= opts.rate_tol
        and all(point.achieved[c] <= targets[c] + 10.0 * opts.constraint_tol for c in _COORDS)
    )
    if point.converged != ok:
        point = replace(point, converged=ok)
    return point


def semantic_rd(
    joint_sx1: JointPMF,
    ds: DistortionMatrix,
    Ds: float,
    opts: SolverOptions = DEFAULT_OPTIONS,
) -> RDPoint:
    """Semantic-only rate: reconstruct just the latent variable, no side
    information, observation unconstrained.

    Builds the posterior-averaged distortion from ``joint_sx1`` and solves the
    single-source special case (background and side-information axes
    degenerate, observation constraint vacuous).
    """
    from .semantic import modified_distortion

    ds_mod = modified_distortion(joint_sx1, ds)
    x1_alpha = ds_mod.source_axis
    reserved = {"bg", "si", "bg_hat", "obs_hat"}
    if x1_alpha.name in reserved or ds.repro_axis.name in reserved:
        raise ProbabilityError(f"axis names {reserved} are reserved by semantic_rd")
    p_x1 = joint_sx1.marginalize((x1_alpha.name,)).probs
    bg = Alphabet("bg", 1, ("*",))
    si = Alphabet("si", 1, ("*",))
    obs_hat = Alphabet("obs_hat", 1, ("*",))
    bg_hat = Alphabet("bg_hat", 1, ("*",))
    source = JointPMF((x1_alpha, bg, si), p_x1.reshape(-1, 1, 1))
    problem = RDProblem(
        source=source,
        repro_alphabets=(obs_hat, bg_hat, ds.repro_axis),
        d1=DistortionMatrix.zero(x1_alpha, obs_hat),
        d2=DistortionMatrix.zero(bg, bg_hat),
        ds_mod=ds_mod,
        log_base=2.0,
    )
    return solve_rd_point(problem, RDQuery(0.0, 0.0, Ds), opts)


def _grid_queries(
    grid: Mapping[str, Sequence[float]]
) -> tuple[tuple[tuple[str, tuple[float, ...]], ...], list[tuple[tuple[int, ...], RDQuery]]]:
    keys = ("d1", "d2", "ds")
    if set(grid.keys()) != set(keys):
        raise ProbabilityError(f"grid must have exactly the keys {keys}, got {tuple(grid.keys())}")
    axes = tuple((k, tuple(float(v) for v in grid[k])) for k in keys)
    if any(len(vals) == 0 for _k, vals in axes):
        raise ProbabilityError("empty grid")
    cells = []
    for idx in itertools.product(*(range(len(vals)) for _k, vals in axes)):
        q = RDQuery(*(axes[j][1][idx[j]] for j in range(3)))
        cells.append((idx, q))
    return axes, cells


def _solve_cell(args) -> SurfaceCell:
    problem, idx, query, opts = args
    try:
        return SurfaceCell(idx, query, solve_rd_point(problem, query, opts))
    except (ProbabilityError, InfeasibleDistortionError, SolverError) as exc:
        return SurfaceCell(idx, query, None, error=f"{type(exc).__name__}: {exc}")


def sweep_surface(
    problem: RDProblem,
    grid: Mapping[str, Sequence[float]],
    opts: SolverOptions = DEFAULT_OPTIONS,
    workers: int | None = None,
) -> RDSurface:
    """Solve one point per grid cell (Cartesian product of the three target
    lists). Per-cell failures are returned as flagged cells, not raised.

    Cells are independent; ``workers`` > 1 evaluates them in separate
    processes with identical per-cell results to a serial run.
    """
    axes, cells = _grid_queries(grid)
    args = [(problem, idx, q, opts) for idx, q in cells]
    if workers is not None and workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_solve_cell, args, chunksize=max(1, len(args) // (4 * workers))))
    else:
        out = [_solve_cell(a) for a in args]
    return RDSurface(grid_axes=axes, points=tuple(out))
