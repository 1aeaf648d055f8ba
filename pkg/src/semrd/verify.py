"""Cross-module verification suites.

Three suites back the ``semrd verify`` command and the acceptance tests:

* ``closed_vs_ba_suite`` -- the numerical solver against every closed-form
  evaluator on grids inside the proven regions, plus a recorded (never
  asserted) comparison on the integer model's semantically-bound subregion,
  where the literal expression is an open transcription question.
* ``channels_suite`` -- the explicit achievability constructions: induced
  source laws, exact distortions, and rates against the closed forms.
* ``properties_suite`` -- structural properties of the solver and the
  probability core: monotonicity, midpoint convexity, separability under the
  observation-side Markov chain, distortion equivalence, information
  identities.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from . import sources
from .closed_form import (
    classification_region_bound,
    rate_classification,
    rate_conditionally_independent,
    rate_correlated,
    semantic_binary_rd,
)
from .prob import Alphabet, BinarySourceSpec, DistortionMatrix, JointPMF, make_dsbs
from .semantic import check_distortion_equivalence, ds0, modified_distortion
from .solver import RDQuery, SolverOptions, semantic_rd, solve_rd_point
from .errors import RegionError, SemrdError
from .test_channels import (
    build_classification_channel,
    build_correlated_binary_channel,
    classification_source_marginal,
    correlated_noise_law,
    correlated_q_vector,
    verify_achievability,
)

BINARY_P = 0.25


@dataclass
class Check:
    name: str
    passed: bool
    residual: float | None = None
    tolerance: float | None = None
    recorded_only: bool = False
    details: dict = field(default_factory=dict)


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed or c.recorded_only for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [dataclasses.asdict(c) for c in self.checks],
        }

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.checks:
            status = "RECORDED" if c.recorded_only else ("PASS" if c.passed else "FAIL")
            res = "" if c.residual is None else f" residual={c.residual:.3e}"
            tol = "" if c.tolerance is None else f" tol={c.tolerance:.0e}"
            lines.append(f"[{status}] {self.suite}/{c.name}{res}{tol}")
        lines.append(f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'}")
        return lines


# ---------------------------------------------------------------------------
# closed form vs solver


def independent_grid_check(
    shape: tuple[int, int, int] = (3, 3, 2),
    tol: float = 2e-3,
    opts: SolverOptions | None = None,
) -> Check:
    """Solver vs the independent-parts closed form on an indicator-active grid."""
    opts = opts or SolverOptions()
    spec = BinarySourceSpec.conditionally_independent(BINARY_P, BINARY_P, BINARY_P)
    problem = sources.conditionally_independent_problem(spec)
    d1_grid = np.linspace(0.02, 0.23, shape[0])
    d2_grid = np.linspace(0.02, 0.23, shape[1])
    ds_grid = np.linspace(0.26, 0.49, shape[2])
    worst = 0.0
    n = 0
    for d1 in d1_grid:
        for d2 in d2_grid:
            for ds in ds_grid:
                expected = rate_conditionally_independent(spec, float(d1), float(d2), float(ds))
                point = solve_rd_point(problem, RDQuery(float(d1), float(d2), float(ds)), opts)
                worst = max(worst, abs(point.rate - expected))
                n += 1
    return Check("independent_parts_grid", worst < tol, worst, tol, details={"points": n})


def _q_valid(p1: float, p2: float, d1: float, d2: float) -> bool:
    try:
        correlated_q_vector(p1, p2, d1, d2)
        return True
    except (RegionError, SemrdError):
        return False


def _correlated_region_points(n_points: int, seed: int = 7) -> list[tuple[float, float, float]]:
    """Deterministic sample of the correlated model's proven region with the
    observation target binding (d1 <= transformed semantic target) and the
    companion noise construction valid (nonnegative reproduction-noise law).

    The construction goes invalid on part of the documented region (see
    ``q_nonnegativity_scan``); the closed form is certified tight only on the
    valid part, so grids that assert tightness sample from it."""
    rng = np.random.default_rng(seed)
    spec = BinarySourceSpec.correlated(BINARY_P, BINARY_P, BINARY_P)
    cap = spec.p1 * spec.p2
    pts = []
    while len(pts) < n_points:
        d1 = float(rng.uniform(0.004, cap * 0.98))
        d2 = float(rng.uniform(0.02, spec.p1 * 0.95))
        # keep ds0 >= d1 with margin so the construction's first coordinate is d1
        lo = BINARY_P + d1 * (1.0 - 2.0 * BINARY_P) + 0.01
        if lo >= 0.5:
            continue
        ds = float(rng.uniform(lo, 0.5))
        if not _q_valid(spec.p1, spec.p2, d1, d2):
            continue
        pts.append((d1, d2, ds))
    return pts


def correlated_grid_check(
    n_points: int = 8, tol: float = 2e-3, opts: SolverOptions | None = None
) -> Check:
    opts = opts or SolverOptions()
    spec = BinarySourceSpec.correlated(BINARY_P, BINARY_P, BINARY_P)
    problem = sources.correlated_problem(spec)
    worst = 0.0
    for d1, d2, ds in _correlated_region_points(n_points):
        expected = rate_correlated(spec, d1, d2, ds)
        point = solve_rd_point(problem, RDQuery(d1, d2, ds), opts)
        worst = max(worst, abs(point.rate - expected))
    return Check("correlated_grid", worst < tol, worst, tol, details={"points": n_points})


def correlated_outside_construction_report(
    n_points: int = 4, opts: SolverOptions | None = None
) -> Check:
    """Recorded-only: solver vs the closed form on documented-region points
    where the noise construction is invalid (negative reproduction-noise
    entries). The expression is a valid lower bound there, but the solver
    (cross-checked against an independent convex program) sits strictly
    above it, so no tolerance is asserted."""
    opts = opts or SolverOptions()
    spec = BinarySourceSpec.correlated(BINARY_P, BINARY_P, BINARY_P)
    problem = sources.correlated_problem(spec)
    pts = [
        (0.0625, 0.25, 0.5),
        (0.05, 0.25, 0.45),
        (0.0625, 0.20, 0.40),
        (0.05, 0.23, 0.45),
        (0.04, 0.24, 0.42),
        (0.06, 0.22, 0.48),
    ][:n_points]
    gaps = {}
    worst = 0.0
    for d1, d2, ds in pts:
        assert not _q_valid(spec.p1, spec.p2, min(d1, ds0(ds, spec.p)), d2)
        formula = rate_correlated(spec, d1, d2, ds)
        point = solve_rd_point(problem, RDQuery(d1, d2, ds), opts)
        gap = point.rate - formula
        gaps[f"d1={d1},d2={d2},ds={ds}"] = {
            "solver_rate": point.rate,
            "closed_form_lower_bound": formula,
            "gap_bits": gap,
        }
        worst = max(worst, abs(gap))
    return Check(
        "correlated_formula_outside_construction",
        True,
        worst,
        None,
        recorded_only=True,
        details=gaps,
    )


def classification_points(
    n_points: int, p: float = BINARY_P, p2: float = BINARY_P, n_alpha: int = 8
) -> list[tuple[float, float, float]]:
    """Points of the integer model's region with the observation target
    binding (d1 <= transformed semantic target)."""
    bound = classification_region_bound(p2, n_alpha)
    d1_values = np.linspace(0.02, min(bound, 0.38), n_points)
    pts = []
    for i, d1 in enumerate(d1_values):
        d2 = 0.1 if i % 2 == 0 else 0.35
        ds = min(p + (1.0 - 2.0 * p) * float(d1) + 0.03, 0.499)
        pts.append((float(d1), d2, ds))
    return pts


def classification_grid_check(
    n_points: int = 4, tol: float = 5e-3, opts: SolverOptions | None = None
) -> Check:
    opts = opts or SolverOptions()
    p, p2, n_alpha = BINARY_P, BINARY_P, 8
    problem = sources.classification_problem(p, p2, n_alpha)
    worst = 0.0
    for d1, d2, ds in classification_points(n_points):
        assert ds0(ds, p) >= d1
        expected = rate_classification(p, p2, n_alpha, d1, d2, ds)
        point = solve_rd_point(problem, RDQuery(d1, d2, ds), opts)
        worst = max(worst, abs(point.rate - expected))
    return Check("classification_grid", worst < tol, worst, tol, details={"points": n_points})


def classification_switched_report(
    n_points: int = 3, opts: SolverOptions | None = None
) -> Check:
    """Recorded-only comparison on the subregion where the semantic target is
    the binding one. The literal expression keeps the raw observation target
    in its linear term there; whether that is the true rate is open, so gaps
    are reported, never asserted."""
    opts = opts or SolverOptions()
    p, p2, n_alpha = BINARY_P, BINARY_P, 8
    problem = sources.classification_problem(p, p2, n_alpha)
    gaps = {}
    worst = 0.0
    d1_values = np.linspace(0.2, 0.42, n_points)
    for d1 in d1_values:
        ds = p + (1.0 - 2.0 * p) * (float(d1) - 0.15)  # transformed target d1 - 0.15 < d1
        d2 = 0.1
        formula = rate_classification(p, p2, n_alpha, float(d1), d2, ds)
        point = solve_rd_point(problem, RDQuery(float(d1), d2, ds), opts)
        gap = point.rate - formula
        gaps[f"d1={d1:.3f},ds={ds:.4f}"] = {
            "solver_rate": point.rate,
            "literal_formula": formula,
            "gap_bits": gap,
        }
        worst = max(worst, abs(gap))
    return Check(
        "classification_semantic_bound_subregion",
        True,
        worst,
        None,
        recorded_only=True,
        details=gaps,
    )


def semantic_rate_check(
    points_per_p: int = 6,
    p_values: tuple[float, ...] = (0.05, 0.1, 0.25),
    tol: float = 1e-3,
    opts: SolverOptions | None = None,
) -> Check:
    opts = opts or SolverOptions()
    worst = 0.0
    n = 0
    for p in p_values:
        joint = sources.semantic_observation_joint(p)
        ds_table = DistortionMatrix.hamming(
            Alphabet.binary(sources.S), Alphabet.binary(sources.S_HAT)
        )
        for ds in np.linspace(p + 0.01, 0.49, points_per_p):
            expected = semantic_binary_rd(p, float(ds))
            point = semantic_rd(joint, ds_table, float(ds), opts)
            worst = max(worst, abs(point.rate - expected))
            n += 1
    return Check("semantic_rate", worst < tol, worst, tol, details={"points": n})


def closed_vs_ba_suite(
    t2_shape: tuple[int, int, int] = (3, 3, 2),
    t3_points: int = 8,
    t4_points: int = 4,
    t4_switched: int = 3,
    semantic_points_per_p: int = 6,
    opts: SolverOptions | None = None,
) -> SuiteReport:
    checks = [
        independent_grid_check(t2_shape, opts=opts),
        correlated_grid_check(t3_points, opts=opts),
        correlated_outside_construction_report(opts=opts),
        classification_grid_check(t4_points, opts=opts),
        classification_switched_report(t4_switched, opts=opts),
        semantic_rate_check(semantic_points_per_p, opts=opts),
    ]
    return SuiteReport("closed-vs-ba", checks)


# ---------------------------------------------------------------------------
# achievability channels


def correlated_channel_checks(n_points: int = 20, seed: int = 11) -> list[Check]:
    spec = BinarySourceSpec.correlated(BINARY_P, BINARY_P, BINARY_P)
    source = sources.correlated_source(spec.p1, spec.p2)
    ds_table = modified_distortion(
        sources.semantic_observation_joint(spec.p),
        DistortionMatrix.hamming(Alphabet.binary(sources.S), Alphabet.binary(sources.S_HAT)),
    )
    d1_tab = DistortionMatrix.hamming(source.axes[0], Alphabet.binary(sources.X1_HAT))
    d2_tab = DistortionMatrix.hamming(source.axes[1], Alphabet.binary(sources.X2_HAT))
    worst = {
        "simplex": 0.0,
        "marginal": 0.0,
        "distortion": 0.0,
        "semantic_slack": 0.0,
        "rate": 0.0,
    }
    points = _correlated_region_points(n_points, seed=seed)
    for d1, d2, ds in points:
        ch = build_correlated_binary_channel(spec.p, spec.p1, spec.p2, d1, d2, ds)
        expected = rate_correlated(spec, d1, d2, ds)
        rep = verify_achievability(
            ch.joint, source, expected, d1=d1_tab, d2=d2_tab, ds_mod=ds_table
        )
        worst["simplex"] = max(worst["simplex"], abs(float(ch.q.sum()) - 1.0))
        worst["marginal"] = max(worst["marginal"], rep.marginal_residual)
        worst["distortion"] = max(
            worst["distortion"], abs(rep.achieved[0] - d1), abs(rep.achieved[1] - d2)
        )
        target_sem = (1.0 - d1) * spec.p + d1 * (1.0 - spec.p)
        worst["semantic_slack"] = max(
            worst["semantic_slack"],
            abs(rep.achieved[2] - target_sem),
            max(0.0, rep.achieved[2] - ds),
        )
        worst["rate"] = max(worst["rate"], rep.rate_gap)
    details = {"points": n_points}
    return [
        Check("correlated_q_simplex", worst["simplex"] < 1e-12, worst["simplex"], 1e-12, details=details),
        Check("correlated_source_marginal", worst["marginal"] < 1e-12, worst["marginal"], 1e-12, details=details),
        Check("correlated_distortions_exact", worst["distortion"] < 1e-12, worst["distortion"], 1e-12, details=details),
        Check("correlated_semantic_distortion", worst["semantic_slack"] < 1e-12, worst["semantic_slack"], 1e-12, details=details),
        Check("correlated_rate_match", worst["rate"] < 1e-9, worst["rate"], 1e-9, details=details),
    ]


def classification_channel_checks(n_points: int = 20) -> list[Check]:
    p2, n_alpha = BINARY_P, 8
    declared = classification_source_marginal(p2, n_alpha)
    d1_tab = DistortionMatrix.hamming(
        Alphabet.integers(sources.X1, n_alpha), Alphabet.integers(sources.X1_HAT, n_alpha)
    )
    bound = classification_region_bound(p2, n_alpha)
    worst = {"marginal": 0.0, "distortion": 0.0, "rate": 0.0}
    d1_values = np.linspace(0.0, bound * 0.995, n_points)
    for d1 in d1_values:
        ch = build_classification_channel(p2, n_alpha, float(d1))
        expected = (
            _hb(p2) + math.log2(n_alpha / 2) - _hb(float(d1)) - float(d1) * math.log2(n_alpha - 1)
        )
        rep = verify_achievability(ch.joint, declared, expected, d1=d1_tab)
        worst["marginal"] = max(worst["marginal"], rep.marginal_residual)
        worst["distortion"] = max(worst["distortion"], abs(rep.achieved[0] - float(d1)))
        worst["rate"] = max(worst["rate"], rep.rate_gap)
    details = {"points": n_points}
    return [
        Check("classification_source_marginal", worst["marginal"] < 1e-12, worst["marginal"], 1e-12, details=details),
        Check("classification_distortion_exact", worst["distortion"] < 1e-12, worst["distortion"], 1e-12, details=details),
        Check("classification_rate_match", worst["rate"] < 1e-9, worst["rate"], 1e-9, details=details),
    ]


def _hb(q: float) -> float:
    if q <= 0.0 or q >= 1.0:
        return 0.0
    return -(q * math.log2(q) + (1 - q) * math.log2(1 - q))


def noise_law_check(n_points: int = 20, seed: int = 13) -> Check:
    """Induced XOR-noise marginal of the constructed channel equals the
    product-form law, for random parameters where the construction exists."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    done = 0
    while done < n_points:
        p1 = float(rng.uniform(0.1, 0.45))
        p2 = float(rng.uniform(0.1, 0.45))
        cap = p1 * p2
        d1 = float(rng.uniform(0.001, cap * 0.98))
        d2 = float(rng.uniform(0.01, p1 * 0.95))
        p = 0.2
        lo = p + d1 * (1 - 2 * p) + 0.005
        ds = float(rng.uniform(lo, min(0.5, lo + 0.2)))
        if not _q_valid(p1, p2, d1, d2):
            continue
        ch = build_correlated_binary_channel(p, p1, p2, d1, d2, ds)
        # noise pair law: z_i = y xor x_i
        probs = ch.joint.marginalize((sources.X1, sources.X2, sources.Y)).probs
        law = np.zeros(4)
        for x1 in range(2):
            for x2 in range(2):
                for y in range(2):
                    law[(y ^ x1) * 2 + (y ^ x2)] += probs[x1, x2, y]
        worst = max(worst, float(np.abs(law - correlated_noise_law(p1, p2)).max()))
        done += 1
    return Check("xor_noise_law", worst < 1e-12, worst, 1e-12, details={"points": n_points})


def q_nonnegativity_scan(grid_n: int = 25) -> Check:
    """Recorded-only scan of the documented region for negative entries in
    the reproduction-noise law. The region definition does not guarantee the
    construction exists everywhere: for the standard symmetric parameters a
    band near the background-distortion cap already fails, so counterexamples
    are reported with the worst entry rather than asserted away."""
    spec = BinarySourceSpec.correlated(BINARY_P, BINARY_P, BINARY_P)
    cap = spec.p1 * spec.p2
    bad = 0
    total = 0
    worst_entry = 0.0
    worst_point = None
    for d1 in np.linspace(1e-4, cap, grid_n):
        for d2 in np.linspace(1e-4, spec.p1 - 1e-4, grid_n):
            total += 1
            denom = (1 - 2 * d1) * (1 - 2 * d2)
            u, v = (1 - spec.p2) - d1, spec.p2 - d1
            a = (1 - spec.p1 - spec.p2 + 2 * spec.p1 * spec.p2) - d2
            b = (spec.p1 + spec.p2 - 2 * spec.p1 * spec.p2) - d2
            w = spec.p2 * (1 - 2 * spec.p1) * (1 - spec.p2)
            q = np.array([u * a + w, u * b - w, v * a - w, v * b + w]) / denom
            if float(q.min()) < -1e-12:
                bad += 1
                if q.min() < worst_entry:
                    worst_entry = float(q.min())
                    worst_point = (float(d1), float(d2))
    return Check(
        "q_nonnegativity_scan",
        True,
        abs(worst_entry),
        None,
        recorded_only=True,
        details={
            "region_points_scanned": total,
            "points_with_negative_entries": bad,
            "worst_entry": worst_entry,
            "worst_point_d1_d2": worst_point,
            "p1": spec.p1,
            "p2": spec.p2,
        },
    )


def channels_suite(n_correlated: int = 20, n_classification: int = 20) -> SuiteReport:
    checks = correlated_channel_checks(n_correlated)
    checks.extend(classification_channel_checks(n_classification))
    checks.append(noise_law_check())
    checks.append(q_nonnegativity_scan())
    return SuiteReport("channels", checks)


# ---------------------------------------------------------------------------
# structural properties


def monotonicity_check(
    points_per_axis: int = 5, slack: float = 1e-6, opts: SolverOptions | None = None
) -> Check:
    """Rates non-increasing along each target coordinate."""
    opts = opts or SolverOptions()
    spec = BinarySourceSpec.correlated(BINARY_P, BINARY_P, BINARY_P)
    problem = sources.correlated_problem(spec)
    base = (0.04, 0.12, 0.33)
    grids = {
        0: np.linspace(0.01, 0.3, points_per_axis),
        1: np.linspace(0.02, 0.4, points_per_axis),
        2: np.linspace(0.26, 0.49, points_per_axis),
    }
    worst = -math.inf
    for coord, values in grids.items():
        prev = None
        for v in values:
            q = list(base)
            q[coord] = float(v)
            rate = solve_rd_point(problem, RDQuery(*q), opts).rate
            if prev is not None:
                worst = max(worst, rate - prev)
            prev = rate
    return Check("solver_monotonicity", worst <= slack, max(worst, 0.0), slack)


def convexity_check(
    n_pairs: int = 6, slack: float = 2e-3, seed: int = 5, opts: SolverOptions | None = None
) -> Check:
    """Midpoint convexity of the solved rate over random query pairs."""
    opts = opts or SolverOptions()
    rng = np.random.default_rng(seed)
    spec = BinarySourceSpec.conditionally_independent(BINARY_P, BINARY_P, BINARY_P)
    problem = sources.conditionally_independent_problem(spec)
    worst = -math.inf
    for _ in range(n_pairs):
        qa = (rng.uniform(0.02, 0.45), rng.uniform(0.02, 0.45), rng.uniform(0.27, 0.49))
        qb = (rng.uniform(0.02, 0.45), rng.uniform(0.02, 0.45), rng.uniform(0.27, 0.49))
        qm = tuple((a + b) / 2 for a, b in zip(qa, qb))
        ra = solve_rd_point(problem, RDQuery(*qa), opts).rate
        rb = solve_rd_point(problem, RDQuery(*qb), opts).rate
        rm = solve_rd_point(problem, RDQuery(*qm), opts).rate
        worst = max(worst, rm - (ra + rb) / 2)
    return Check("solver_midpoint_convexity", worst <= slack, max(worst, 0.0), slack)


def random_chain_problem(rng: np.random.Generator):
    """Random binary source with the observation and background independent
    given side information, as a solver instance."""
    p_y = float(rng.uniform(0.3, 0.7))
    p2 = float(rng.uniform(0.05, 0.45))  # observation | side info crossover
    p3 = float(rng.uniform(0.05, 0.45))  # background | side info crossover
    p_sem = float(rng.uniform(0.05, 0.4))
    probs = np.zeros((2, 2, 2))
    for y, w in enumerate((1.0 - p_y, p_y)):
        for x1 in range(2):
            for x2 in range(2):
                probs[x1, x2, y] = (
                    w
                    * ((1 - p2) if x1 == y else p2)
                    * ((1 - p3) if x2 == y else p3)
                )
    source = JointPMF(
        (Alphabet.binary(sources.X1), Alphabet.binary(sources.X2), Alphabet.binary(sources.Y)),
        probs,
    )
    x1, x2, _ = source.axes
    h1, h2 = Alphabet.binary(sources.X1_HAT), Alphabet.binary(sources.X2_HAT)
    from .solver import RDProblem

    problem = RDProblem(
        source=source,
        repro_alphabets=(h1, h2, Alphabet.binary(sources.S_HAT)),
        d1=DistortionMatrix.hamming(x1, h1),
        d2=DistortionMatrix.hamming(x2, h2),
        ds_mod=modified_distortion(
            make_dsbs(p_sem, sources.S, sources.X1),
            DistortionMatrix.hamming(Alphabet.binary(sources.S), Alphabet.binary(sources.S_HAT)),
        ),
    )
    return problem, p_sem


def separability_check(
    n_sources: int = 5, tol: float = 2e-3, seed: int = 23, opts: SolverOptions | None = None
) -> Check:
    """Joint rate equals the sum of the two reduced-problem rates whenever the
    observation and background are independent given side information."""
    opts = opts or SolverOptions()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_sources):
        problem, p_sem = random_chain_problem(rng)
        d1 = float(rng.uniform(0.02, 0.3))
        d2 = float(rng.uniform(0.02, 0.3))
        ds = float(rng.uniform(p_sem + 0.02, 0.49))
        joint_rate = solve_rd_point(problem, RDQuery(d1, d2, ds), opts).rate
        obs = solve_rd_point(
            sources.observation_side_problem(problem), RDQuery(d1, 0.0, ds), opts
        ).rate
        bg = solve_rd_point(
            sources.background_side_problem(problem), RDQuery(0.0, d2, 0.0), opts
        ).rate
        worst = max(worst, abs(joint_rate - (obs + bg)))
    return Check("separability", worst < tol, worst, tol, details={"sources": n_sources})


def equivalence_check(n_joints: int = 100, tol: float = 1e-10, seed: int = 3) -> Check:
    """|E ds(S, Sh) - E d's(X1, Sh)| on random latent-chain joints."""
    rng = np.random.default_rng(seed)
    s = Alphabet.binary("s")
    worst = 0.0
    for _ in range(n_joints):
        n_x1 = int(rng.integers(2, 5))
        n_sh = int(rng.integers(2, 4))
        x1 = Alphabet("x1", n_x1)
        w = Alphabet("w", 2)
        sh = Alphabet("s_hat", n_sh)
        obs_joint = rng.dirichlet(np.ones(n_x1 * 2 * n_sh)).reshape(n_x1, 2, n_sh)
        post = rng.uniform(0.05, 0.95, size=n_x1)
        probs = np.zeros((2, n_x1, 2, n_sh))
        probs[0] = obs_joint * post[:, None, None]
        probs[1] = obs_joint * (1.0 - post)[:, None, None]
        joint = JointPMF((s, x1, w, sh), probs / probs.sum())
        ds_tab = DistortionMatrix(s, sh, rng.uniform(0.0, 1.0, size=(2, n_sh)))
        worst = max(worst, check_distortion_equivalence(joint, ds_tab))
    return Check("distortion_equivalence", worst < tol, worst, tol, details={"joints": n_joints})


def information_identity_check(n_pmfs: int = 50, tol: float = 1e-10, seed: int = 17) -> Check:
    """Chain rule and symmetry of the information measures on random pmfs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_pmfs):
        sizes = rng.integers(2, 4, size=3)
        axes = tuple(Alphabet(n, int(k)) for n, k in zip(("a", "b", "c"), sizes))
        probs = rng.dirichlet(np.ones(int(np.prod(sizes)))).reshape(tuple(sizes))
        j = JointPMF(axes, probs)
        lhs = j.mutual_information(("a",), ("b", "c"))
        rhs = j.mutual_information(("a",), ("c",)) + j.conditional_mutual_information(
            ("a",), ("b",), ("c",)
        )
        worst = max(worst, abs(lhs - rhs))
        sym = abs(
            j.conditional_mutual_information(("a",), ("b",), ("c",))
            - j.conditional_mutual_information(("b",), ("a",), ("c",))
        )
        worst = max(worst, sym)
    return Check("information_identities", worst < tol, worst, tol, details={"pmfs": n_pmfs})


def properties_suite(
    mono_points: int = 5,
    convexity_pairs: int = 6,
    separability_sources: int = 3,
    equivalence_joints: int = 100,
    opts: SolverOptions | None = None,
) -> SuiteReport:
    checks = [
        monotonicity_check(mono_points, opts=opts),
        convexity_check(convexity_pairs, opts=opts),
        separability_check(separability_sources, opts=opts),
        equivalence_check(equivalence_joints),
        information_identity_check(),
    ]
    return SuiteReport("properties", checks)


SUITES = {
    "closed-vs-ba": closed_vs_ba_suite,
    "channels": channels_suite,
    "properties": properties_suite,
}


def run_suite(name: str) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name]()
