import numpy as np
import pytest

from usbeam import RfFrame, fetch_delayed, signed_sqrt


def make_frame(samples, fs=100e6, f0=3e6, c=1540.0):
    return RfFrame(samples=np.asarray(samples, dtype=float), fs=fs, f0=f0, c=c)


def test_frame_validation():
    with pytest.raises(ValueError):
        make_frame(np.zeros((4, 8)), fs=5e6, f0=3e6)  # fs <= 2 f0
    with pytest.raises(ValueError):
        make_frame(np.array([[np.nan, 0.0]]))
    with pytest.raises(ValueError):
        make_frame(np.zeros(8))  # not 2-D


def test_signed_sqrt_reference_values():
    assert signed_sqrt(0.0) == 0.0
    assert signed_sqrt(4.0) == 2.0
    assert signed_sqrt(-4.0) == -2.0
    assert signed_sqrt(0.25) == 0.5


def test_signed_sqrt_properties():
    rng = np.random.default_rng(7)
    x = rng.uniform(-100.0, 100.0, 500)
    s = signed_sqrt(x)
    assert np.array_equal(np.sign(s), np.sign(x))
    assert np.allclose(s * s, np.abs(x), rtol=1e-12)
    assert np.allclose(s * np.abs(s), x, rtol=1e-12)
    # odd function
    assert np.array_equal(signed_sqrt(-x), -s)


def test_fetch_integer_delay_is_exact():
    samples = np.arange(24, dtype=float).reshape(2, 12)
    frame = make_frame(samples)
    out = fetch_delayed(frame, np.array([7.0, 3.0]))
    assert out[0] == samples[0, 7]
    assert out[1] == samples[1, 3]


def test_fetch_midpoint_interpolation():
    samples = np.zeros((1, 12))
    samples[0, 7] = 2.0
    samples[0, 8] = 4.0
    frame = make_frame(samples)
    assert fetch_delayed(frame, np.array([7.5]))[0] == pytest.approx(3.0)


def test_fetch_out_of_window_yields_zero():
    frame = make_frame(np.ones((3, 10)))
    out = fetch_delayed(frame, np.array([20.0, -5.0, 9.0]))
    assert out[0] == 0.0
    assert out[1] == 0.0
    assert out[2] == 1.0


def test_fetch_linear_in_frame():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(4, 50))
    b = rng.normal(size=(4, 50))
    d = rng.uniform(-2, 52, size=4)
    alpha, beta = 2.5, -1.25
    fa = fetch_delayed(make_frame(a), d)
    fb = fetch_delayed(make_frame(b), d)
    fab = fetch_delayed(make_frame(alpha * a + beta * b), d)
    assert np.allclose(fab, alpha * fa + beta * fb, rtol=1e-12, atol=1e-12)


def test_fetch_block_shape():
    rng = np.random.default_rng(5)
    frame = make_frame(rng.normal(size=(6, 40)))
    block = rng.uniform(0, 39, size=(13, 6))
    out = fetch_delayed(frame, block)
    assert out.shape == (13, 6)
    # each row matches the vector path
    for r in range(13):
        assert np.array_equal(out[r], fetch_delayed(frame, block[r]))


def test_fetch_rejects_wrong_element_count():
    frame = make_frame(np.zeros((4, 10)))
    with pytest.raises(ValueError):
        fetch_delayed(frame, np.zeros(3))
