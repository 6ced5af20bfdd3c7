"""Exception types shared across the package."""


class ZenoError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(ZenoError):
    """An input violates a documented invariant (bad density, bad config, ...)."""


class ConfigError(ZenoError):
    """A config/plan file could not be parsed or is inconsistent."""


class StepDiverged(ZenoError):
    """Integration left the physical region or produced non-finite values.

    Carries the failure time and the partial trajectory recorded up to the
    last accepted step.
    """

    def __init__(self, time, partial=None, detail=""):
        self.time = time
        self.partial = partial
        msg = f"integration diverged at t = {time:.6g} ns"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class MissingMomenta(ZenoError):
    """The operation requires a trajectory that carries conjugate momenta."""


class DegenerateNormalization(ZenoError):
    """Post-selection probability vanished; the conditional state is undefined."""


class DimensionMismatch(ZenoError):
    """Operator and state dimensions are inconsistent."""


class PlaneLeavingInteraction(ZenoError):
    """The interaction has b != 0, so the y-z-plane angle reduction is invalid."""


class Infeasible(ZenoError):
    """No frozen angle exists for this interaction at the requested ratio."""


class DegenerateInteraction(ZenoError):
    """The interaction produces no measurement drift (a+c = 0 or 4d^2+(a-c)^2 = 0)."""


class NoConvergence(ZenoError):
    """A root search failed to converge from the given seed."""
