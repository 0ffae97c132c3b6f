from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from ..utils import DimensionError, DomainError, require_between, require_int_at_least, require_positive


@dataclass(frozen=True, eq=False)
class Precoders:
    """Common precoder plus one private precoder per user; stream symbols are unit power."""
    p_common: npt.NDArray[np.complex128]
    p_private: tuple[npt.NDArray[np.complex128], ...]
    p_tot: float = field(init=False)

    def __post_init__(self) -> None:
        length = self.p_common.shape
        if len(length) != 1:
            raise DimensionError(f"common precoder must be a vector, got shape {length}")
        for k, p in enumerate(self.p_private):
            if p.shape != length:
                raise DimensionError(f"private precoder {k} has shape {p.shape}, expected {length}")
        total = float(np.vdot(self.p_common, self.p_common).real)
        total += sum(float(np.vdot(p, p).real) for p in self.p_private)
        if total <= 0:
            raise DomainError("total precoder power must be > 0")
        object.__setattr__(self, 'p_tot', total)

    @property
    def users(self) -> int:
        return len(self.p_private)

    @property
    def n_dd(self) -> int:
        return self.p_common.shape[0]

    def private_matrix(self) -> npt.NDArray[np.complex128]:
        """N_dd x K matrix with the private precoders as columns."""
        if not self.p_private:
            return np.zeros((self.n_dd, 0), dtype=np.complex128)
        return np.column_stack(self.p_private)


def _unit_direction(n_dd: int, rng: np.random.Generator) -> npt.NDArray[np.complex128]:
    v = rng.standard_normal(n_dd) + 1j * rng.standard_normal(n_dd)
    return v / np.linalg.norm(v)


def random_precoders(
    n_dd: int,
    users: int,
    rng: np.random.Generator,
    total_power: float = 1.0,
    common_fraction: float = 0.5,
) -> Precoders:
    """Random directions; common stream gets common_fraction of the power, privates share the rest equally."""
    require_int_at_least('rsma.users', users, 0)
    require_positive('rsma.total_power', total_power)
    require_between('rsma.common_fraction', common_fraction, 0.0, 1.0)

    p_common = np.sqrt(total_power * common_fraction) * _unit_direction(n_dd, rng)
    private_power = total_power * (1 - common_fraction) / users if users else 0.0
    p_private = tuple(np.sqrt(private_power) * _unit_direction(n_dd, rng) for _ in range(users))
    return Precoders(p_common=p_common, p_private=p_private)
