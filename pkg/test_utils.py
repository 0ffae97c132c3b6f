"""Tests for the value checks, the error types and the ordered thread-pool map."""
import threading
import time

import numpy as np
import pytest

from src.ddcrb.config import settings
from src.ddcrb.config.settings import _env_threads
from src.ddcrb.utils import (
    DdCrbError, DimensionError, DomainError, ScenarioError, SingularFimError,
    ordered_map, require_between, require_int_at_least, require_non_negative, require_positive,
)


class TestValidators:
    def test_positive(self):
        assert require_positive('x', np.float64(2.5)) == 2.5
        for bad in (0, -1.0, float('nan'), float('inf')):
            with pytest.raises(DomainError, match='x must be > 0'):
                require_positive('x', bad)

    def test_non_negative(self):
        assert require_non_negative('x', 0) == 0.0
        with pytest.raises(DomainError):
            require_non_negative('x', -1e-300)

    def test_between(self):
        assert require_between('theta', 1, 0.0, 1.0) == 1.0
        assert require_between('theta', np.float32(0.5), 0, 1) == 0.5
        with pytest.raises(DomainError, match=r'theta must be within \[0.0, 1.0\]'):
            require_between('theta', 1.0001, 0.0, 1.0)

    def test_int_at_least(self):
        assert require_int_at_least('m', np.int64(4), 1) == 4
        assert require_int_at_least('m', 3.0, 1) == 3
        for bad in (0, 2.5, True):
            with pytest.raises(DomainError):
                require_int_at_least('m', bad, 1)


class TestErrors:
    def test_hierarchy(self):
        assert issubclass(DimensionError, ValueError)
        assert issubclass(DomainError, DdCrbError)
        assert issubclass(SingularFimError, DdCrbError)

    def test_payloads(self):
        error = SingularFimError('singular', fim='F', zero_entry='i_nu_nu')
        assert (error.fim, error.zero_entry) == ('F', 'i_nu_nu')
        assert ScenarioError('bad', 'grid.m').key == 'grid.m'


class TestOrderedMap:
    def test_keeps_input_order(self):
        def slow_square(v: int) -> int:
            time.sleep(0.01 * (5 - v))
            return v * v

        assert ordered_map(slow_square, range(5), workers=5) == [0, 1, 4, 9, 16]

    def test_serial_when_one_worker(self):
        threads = set()

        def record(v: int) -> int:
            threads.add(threading.get_ident())
            return v

        assert ordered_map(record, [1, 2, 3], workers=1) == [1, 2, 3]
        assert threads == {threading.get_ident()}

    def test_empty(self):
        assert ordered_map(lambda v: v, []) == []

    def test_errors_propagate(self):
        def fail(v: int) -> int:
            raise DomainError(f'bad {v}')

        with pytest.raises(DomainError):
            ordered_map(fail, [1, 2], workers=2)

    def test_nested_maps_respect_thread_cap(self, monkeypatch):
        monkeypatch.setattr(settings, 'THREADS', 2)
        lock = threading.Lock()
        running = 0
        peak = 0

        def inner(v: int) -> int:
            nonlocal running, peak
            with lock:
                running += 1
                peak = max(peak, running)
            time.sleep(0.02)
            with lock:
                running -= 1
            return v

        result = ordered_map(lambda v: sum(ordered_map(inner, range(4))), range(4))
        assert result == [6] * 4
        assert peak <= 2


class TestSettings:
    def test_defaults(self):
        assert settings.SINGULAR_RTOL > 0
        assert settings.FD_NU_STEP > 0
        assert settings.CSV_FLOAT_FORMAT.startswith('%')

    @pytest.mark.parametrize('raw, expected', [('', None), ('  ', None), ('1', 1), ('8', 8)])
    def test_threads_from_env(self, monkeypatch, raw, expected):
        monkeypatch.setenv('DD_CRB_THREADS', raw)
        assert _env_threads('DD_CRB_THREADS') == expected

    @pytest.mark.parametrize('raw', ['0', '-2', 'four'])
    def test_threads_rejects_non_positive(self, monkeypatch, raw):
        monkeypatch.setenv('DD_CRB_THREADS', raw)
        with pytest.raises(ValueError):
            _env_threads('DD_CRB_THREADS')
