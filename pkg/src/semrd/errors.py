"""Exception hierarchy shared across the toolkit."""


class SemrdError(Exception):
    """Base class for all toolkit errors."""


class ProbabilityError(SemrdError, ValueError):
    """Invalid pmf, alphabet, or distortion-table input."""


class AlphabetMismatchError(ProbabilityError):
    """Axes or distortion tables refer to incompatible alphabets."""


class InfeasibleDistortionError(SemrdError, ValueError):
    """Requested distortion lies below the achievable floor (no code attains it)."""


class RegionError(SemrdError, ValueError):
    """Closed-form expression queried outside its proven validity region.

    The numerical solver remains applicable; callers doing figure/sweep work
    should route such points to `semrd.solver.solve_rd_point`.
    """


class SolverError(SemrdError, RuntimeError):
    """Numerical failure inside the alternating-minimization solver."""


class ConfigError(SemrdError, ValueError):
    """Sweep/figure configuration violates its schema.

    Messages carry the offending field path, e.g. ``params.p: must lie in
    [0, 0.5]``.
    """


class BracketingError(SolverError):
    """Multiplier search could not bracket the target distortion."""
