"""Exception types shared across the package."""


class SizeLimitError(ValueError):
    """A matrix or photon number exceeds a documented hard limit."""


class CapacityError(SizeLimitError):
    """The requested Fock basis would exceed the enumeration guard."""


class DegeneratePostselectionError(ValueError):
    """The collision-free postselection mass is numerically zero."""


class UndefinedVisibilityError(ValueError):
    """The classical two-photon rate vanishes, so visibility is undefined."""


class NonConvergenceError(RuntimeError):
    """No fit restart reduced the objective below the penalty floor."""
