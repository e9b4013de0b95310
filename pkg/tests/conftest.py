import pytest

from affine_frames.geometry import Domain, LatticeSpectrum

I = Domain.interval(0, 1)
Z = LatticeSpectrum([[1]])


@pytest.fixture
def unit():
    return I


@pytest.fixture
def integers():
    return Z


def lattice(step, offsets=None):
    """``step * Z + offsets`` in one dimension."""
    offs = None if offsets is None else [[o] for o in offsets]
    return LatticeSpectrum([[step]], offs)
