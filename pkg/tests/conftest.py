import mpmath as mp
import pytest

from twistlab.funceq import zeta2_datum
from twistlab.twist import divisor_stream


@pytest.fixture(autouse=True)
def working_precision_128():
    """All tests run at the package's default 128-bit working precision."""
    old = mp.mp.prec
    mp.mp.prec = 128
    yield
    mp.mp.prec = old


@pytest.fixture(scope="session")
def zeta2():
    return zeta2_datum()


@pytest.fixture(scope="session")
def divisors():
    return divisor_stream()
