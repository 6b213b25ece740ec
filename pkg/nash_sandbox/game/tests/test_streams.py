import numpy as np
import pytest
from numpy.testing import assert_equal

from nash_sandbox.game import (SampleStream, GRADIENT, ACTIVATION,
                               UPDATE_SETS, RUN)


def test_stream_args():
    """Test stream argument checks"""
    pytest.raises(TypeError, SampleStream, 1.5)
    pytest.raises(ValueError, SampleStream, -1)
    pytest.raises(ValueError, SampleStream, 2 ** 64)
    pytest.raises(ValueError, SampleStream, 0, (1, -2))
    # a 64-bit entry would alias the three-word key (3, 0, 1)
    pytest.raises(ValueError, SampleStream, 0, (3, 2 ** 32))
    assert SampleStream(0, (RUN, 2 ** 32 - 1)).key == (RUN, RUN)


def test_stream_determinism():
    """Test identical keys give identical draws and distinct keys differ"""
    a = SampleStream(42, (0, GRADIENT, 1, 3)).generator.random(100)
    b = SampleStream(42).spawn(0, GRADIENT).spawn(1, 3).generator.random(100)
    assert_equal(a, b)
    c = SampleStream(42, (0, ACTIVATION, 1, 3)).generator.random(100)
    d = SampleStream(43, (0, GRADIENT, 1, 3)).generator.random(100)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)
    # streams are (nearly) uncorrelated
    x = SampleStream(7, (0,)).generator.random(10000)
    y = SampleStream(7, (1,)).generator.random(10000)
    assert abs(np.corrcoef(x, y)[0, 1]) < 4. / np.sqrt(10000)


def test_run_streams_disjoint():
    """Test run-level streams differ from every trajectory stream"""
    shared = SampleStream(5, (RUN, UPDATE_SETS)).generator.random(50)
    for traj in range(8):
        root = SampleStream(5, (traj,))
        for stream in (root, root.spawn(UPDATE_SETS)):
            assert not np.array_equal(shared, stream.generator.random(50))
