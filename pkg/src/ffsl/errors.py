"""Exception hierarchy shared by the solver modules."""


class FFSLError(Exception):
    """Base class for all errors raised by this package."""


class GridError(FFSLError, ValueError):
    """Invalid grid parameters."""


class StencilError(FFSLError, ValueError):
    """Reconstruction stencil does not fit on the grid, or unsupported order."""


class DomainError(FFSLError, ValueError):
    """An integration interval or flux tube spans the whole periodic domain."""


class ModelError(FFSLError, ValueError):
    """Diffusivity or velocity model returned unusable values."""


class ConvergenceError(FFSLError, RuntimeError):
    """An iterative displacement solve did not converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SearchWindowError(FFSLError, RuntimeError):
    """The largest-root scan found no sign change inside its window."""

    def __init__(self, message, window=None):
        super().__init__(message)
        self.window = window


class IntegrationError(FFSLError, RuntimeError):
    """The reference ODE integrator failed."""
