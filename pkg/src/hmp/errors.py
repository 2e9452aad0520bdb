"""Exception types shared across the package."""


class HmpError(Exception):
    """Base class for all package-specific errors."""


class NonConvergence(HmpError):
    """Equilibrium relaxation ran out of iterations before reaching tolerance."""


class BranchViolation(HmpError):
    """The equilibrium flow crossed the determinant floor (left the stable branch)."""


class SingularHessian(HmpError):
    """State-block Hessian could not be factorized or its determinant fell below the floor."""


class ScenarioInfeasible(HmpError):
    """No rollout completed in any optimizer iteration; the scene admits no feasible policy."""


class ParseError(HmpError):
    """Scenario input was not structurally readable (bad JSON, wrong container types)."""


class ValidationError(HmpError):
    """Scenario content failed schema validation; the message names the offending field."""


class UnknownPreset(HmpError):
    """Requested preset name is not registered."""
