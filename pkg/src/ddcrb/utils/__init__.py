from .errors import DdCrbError, DimensionError, DomainError, SingularFimError, ScenarioError
from .validators import require_positive, require_non_negative, require_between, require_int_at_least
from .concurrency import ordered_map

__all__ = [
    'DdCrbError', 'DimensionError', 'DomainError', 'SingularFimError', 'ScenarioError',
    'require_positive', 'require_non_negative', 'require_between', 'require_int_at_least',
    'ordered_map',
]
