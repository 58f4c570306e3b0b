from abc import abstractmethod
from typing import Dict, Optional, Type
from overrides import overrides, EnforceOverrides


class A2NChainError(Exception, EnforceOverrides):
    def code(self) -> int:
        """Return the process exit code the CLI should use for this error"""
        return 1  # Identity or reconciliation failure

    def message(self) -> str:
        return ", ".join(str(a) for a in self.args)

    @classmethod
    @abstractmethod
    def name(cls) -> str:
        """Return the error name"""
        pass


class InvalidConfigurationError(A2NChainError):
    @overrides
    def code(self) -> int:
        return 2

    @classmethod
    @overrides
    def name(cls) -> str:
        return "InvalidConfiguration"


class InvalidParameterError(A2NChainError):
    @overrides
    def code(self) -> int:
        return 2

    @classmethod
    @overrides
    def name(cls) -> str:
        return "InvalidParameter"


class DimensionMismatchError(A2NChainError):
    @overrides
    def code(self) -> int:
        return 2

    @classmethod
    @overrides
    def name(cls) -> str:
        return "DimensionMismatch"


class InadmissibleConfigurationError(A2NChainError):
    @overrides
    def code(self) -> int:
        return 2

    @classmethod
    @overrides
    def name(cls) -> str:
        return "InadmissibleConfiguration"


class ResourceCapExceededError(A2NChainError):
    @overrides
    def code(self) -> int:
        return 3

    @classmethod
    @overrides
    def name(cls) -> str:
        return "ResourceCapExceeded"


class IdentityFailureError(A2NChainError):
    @classmethod
    @overrides
    def name(cls) -> str:
        return "IdentityFailure"


class ConvergenceError(A2NChainError):
    residual: Optional[float]

    def __init__(self, msg: str, residual: Optional[float] = None):
        if residual is None:
            super().__init__(msg)
        else:
            super().__init__(msg, residual)
        self.residual = residual

    @classmethod
    @overrides
    def name(cls) -> str:
        return "Convergence"


class PoleError(A2NChainError):
    @classmethod
    @overrides
    def name(cls) -> str:
        return "Pole"


class DegenerateIdentityError(A2NChainError):
    @classmethod
    @overrides
    def name(cls) -> str:
        return "DegenerateIdentity"


class DecompositionError(A2NChainError):
    @classmethod
    @overrides
    def name(cls) -> str:
        return "Decomposition"


error_types: Dict[str, Type[A2NChainError]] = {
    "InvalidConfiguration": InvalidConfigurationError,
    "InvalidParameter": InvalidParameterError,
    "DimensionMismatch": DimensionMismatchError,
    "InadmissibleConfiguration": InadmissibleConfigurationError,
    "ResourceCapExceeded": ResourceCapExceededError,
    "IdentityFailure": IdentityFailureError,
    "Convergence": ConvergenceError,
    "Pole": PoleError,
    "DegenerateIdentity": DegenerateIdentityError,
    "Decomposition": DecompositionError,
}
