"""Custom exceptions for the eqcoin package.

Provides structured error handling for invalid coin and state parameters,
matrix property violations and numerical failures, allowing callers to
catch specific exception types and access details like the offending
parameter name.
"""

__all__ = [
    "EqcoinError",
    "EqcoinParameterError",
    "EqcoinDimensionError",
    "EqcoinMatrixError",
    "EqcoinConvergenceError",
    "EqcoinPreconditionError",
    "EqcoinConfigError",
]


class EqcoinError(Exception):
    """Base exception for all eqcoin errors.

    All exceptions raised by the eqcoin package inherit from this class,
    making it easy to catch all library-specific errors.

    Example:
        try:
            coin = balanced_coin(0.5, 0.5, 0.0)
        except EqcoinError as e:
            print(f"eqcoin error: {e}")
    """

    pass


class EqcoinParameterError(EqcoinError):
    """Raised when a constructor or operation receives an invalid parameter.

    Covers modulus and normalization violations, zero amplitudes where a
    nonzero one is required, negative step counts and unknown names.

    Attributes:
        message: Human-readable error description.
        parameter: Name of the offending parameter (e.g. ``"alpha"``).

    Example:
        try:
            coin = balanced_coin(1.0, 0.7071, 0.0)
        except EqcoinParameterError as e:
            if e.parameter == "alpha":
                print("alpha must have modulus 1/sqrt(2)")
    """

    def __init__(self, message: str, parameter: str) -> None:
        """Initialize the parameter error.

        Args:
            message: Description of what is wrong with the value.
            parameter: Name of the parameter that failed validation.
        """
        super().__init__(message)
        self.message = message
        self.parameter = parameter

    def __str__(self) -> str:
        """Return formatted error string with the parameter name."""
        return f"[{self.parameter}] {self.message}"

    def __repr__(self) -> str:
        """Return detailed representation for debugging."""
        return f"EqcoinParameterError(message={self.message!r}, parameter={self.parameter!r})"


class EqcoinDimensionError(EqcoinError):
    """Raised when array shapes or subsystem dimensions do not match.

    Example:
        try:
            partial_trace(rho, dims=[3, 3], keep=0)
        except EqcoinDimensionError:
            print("dims must multiply to the matrix size")
    """

    pass


class EqcoinMatrixError(EqcoinError):
    """Raised when a matrix lacks a required property.

    Attributes:
        message: Human-readable error description.
        property_name: One of ``"hermitian"``, ``"unitary"``, ``"trace"``
            or ``"positive"``.
    """

    def __init__(self, message: str, property_name: str) -> None:
        super().__init__(message)
        self.message = message
        self.property_name = property_name

    def __str__(self) -> str:
        return f"[{self.property_name}] {self.message}"

    def __repr__(self) -> str:
        return (
            f"EqcoinMatrixError(message={self.message!r}, "
            f"property_name={self.property_name!r})"
        )


class EqcoinConvergenceError(EqcoinError):
    """Raised when the Jacobi eigensolver runs out of sweeps.

    Attributes:
        message: Human-readable error description.
        sweeps: Number of sweeps performed before giving up.
    """

    def __init__(self, message: str, sweeps: int) -> None:
        super().__init__(message)
        self.message = message
        self.sweeps = sweeps


class EqcoinPreconditionError(EqcoinError):
    """Raised when valid inputs do not meet an operation's precondition.

    Example:
        try:
            verify_inner_products(HADAMARD, state1, state2)
        except EqcoinPreconditionError:
            print("both states must belong to the coin's ensemble")
    """

    pass


class EqcoinConfigError(EqcoinError):
    """Raised when environment configuration is missing or malformed.

    Example:
        try:
            seed = get_default_seed(use_fallback=False)
        except EqcoinConfigError:
            print("Please set EQCOIN_SEED environment variable")
    """

    pass
