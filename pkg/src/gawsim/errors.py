"""Exception types shared across the package."""


class LayoutError(ValueError):
    """A waveguide layout violates a geometric or rate constraint."""


class NumericalFailure(RuntimeError):
    """A numerical invariant was violated (state positivity, trace drift,
    non-Hermitian residue in a composed network, ...)."""
