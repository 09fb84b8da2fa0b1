class RadialMultiplierError(Exception):
    """Base class for all errors raised by the library."""


class InvalidAlgebraError(RadialMultiplierError, ValueError):
    """Malformed tracial algebra, or two objects over different algebras."""


class InvalidBimoduleError(RadialMultiplierError, ValueError):
    """Actions that do not commute, are not homomorphic, or a map that is not modular."""


class DeformationError(RadialMultiplierError, ValueError):
    """The deformation operator violates a required hypothesis."""

    def __init__(self, message: str, flag: str | None = None) -> None:
        super().__init__(message)
        self.flag: str | None = flag


class PositivityError(RadialMultiplierError, ValueError):
    """D⁽ⁿ⁾ has an eigenvalue below the positivity tolerance."""

    def __init__(self, level: int, eigenvalue: float, tol: float) -> None:
        super().__init__(f"D^({level}) has eigenvalue {eigenvalue:.3e} < -{tol:.1e}; the deformation does not define an inner product")
        self.level: int = level
        self.eigenvalue: float = eigenvalue


class TruncationError(RadialMultiplierError, ValueError):
    """A level or degree outside the truncated Fock space."""


class NotInClassError(RadialMultiplierError, ValueError):
    """The class norm of a radial function did not converge."""


class ReducedWordError(RadialMultiplierError, ValueError):
    """Letters that are not alternating or not mean-zero."""


class SpecificationError(RadialMultiplierError, ValueError):
    """A JSON specification could not be parsed or validated."""


class PermutationError(RadialMultiplierError, ValueError):
    """Permutations, words or compositions of incompatible degrees."""
