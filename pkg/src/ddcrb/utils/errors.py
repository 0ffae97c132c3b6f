from typing import Any


class DdCrbError(Exception):
    """Base class for every error raised by the toolkit."""


class DimensionError(DdCrbError, ValueError):
    pass


class DomainError(DdCrbError, ValueError):
    pass


class SingularFimError(DdCrbError):
    """The Fisher information matrix cannot be inverted.

    `fim` is the offending matrix and `zero_entry` names the diagonal entry
    that vanished ('i_tau_tau' or 'i_nu_nu'), or is None when both diagonal
    entries are nonzero and the determinant collapsed through the coupling term.
    """

    def __init__(self, message: str, fim: Any = None, zero_entry: str | None = None):
        super().__init__(message)
        self.fim = fim
        self.zero_entry = zero_entry


class ScenarioError(DdCrbError):
    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key
