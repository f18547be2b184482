"""Exception types shared across the library."""


class DomainError(ValueError):
    """An argument lies outside the closed unit disc (or an open sub-disc)."""


class DivergenceError(ArithmeticError):
    """A quadrature refinement diagnostic failed to stabilize (divergent integral)."""


class ConfigError(ValueError):
    """A run configuration is malformed or inconsistent."""
