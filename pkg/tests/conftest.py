import contextlib
import time

import pytest


@pytest.fixture
def criterion(capsys):
    """Context manager printing one PASS/FAIL line for an acceptance criterion."""

    @contextlib.contextmanager
    def run(label):
        start = time.perf_counter()
        try:
            yield
        except BaseException as e:
            with capsys.disabled():
                print(f"\nFAIL  {label}  ({time.perf_counter() - start:.2f}s): {type(e).__name__}: {e}")
            raise
        with capsys.disabled():
            print(f"\nPASS  {label}  ({time.perf_counter() - start:.2f}s)")

    return run
