import os
import tempfile

# keep test runs from writing msd.log into the working tree
os.environ.setdefault("MSD_LOG_FILE", os.path.join(tempfile.gettempdir(), "msd-tests.log"))

import pytest

from utility.curves import torus_curve
from utility.kirby import TREFOIL_FRONT, TSTAR_RP2_FRONT, UNKNOT_FRONT, compile_front, parse_front
from utility.palf import compile_palf, enumerate_genus1, palf_from_preset
from utility.surface import genus2_surface, torus_surface


@pytest.fixture
def torus():
    return torus_surface()


@pytest.fixture
def genus2():
    return genus2_surface()


@pytest.fixture
def slope(torus):
    """slope(p, q) -> the (p, q) curve on the torus preset."""
    return lambda p, q: torus_curve(torus, p, q)


@pytest.fixture(scope="session")
def tstar_s2():
    """The genus-1 bisection of the disk bundle of Euler number -2."""
    return enumerate_genus1(2)


@pytest.fixture(scope="session")
def lantern_diagram():
    """Doubled 4-holed sphere with the four boundary twists as sectors."""
    return compile_palf(palf_from_preset("4-holed-sphere", ["a", "b", "c", "d"]))


@pytest.fixture(scope="session")
def unknot_compiled():
    return compile_front(parse_front(UNKNOT_FRONT))


@pytest.fixture(scope="session")
def trefoil_compiled():
    return compile_front(parse_front(TREFOIL_FRONT))


@pytest.fixture(scope="session")
def rp2_compiled():
    return compile_front(parse_front(TSTAR_RP2_FRONT))
