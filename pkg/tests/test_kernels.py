"""The numba kernels and the pure-numpy fallbacks must agree exactly."""

import os
import subprocess
import sys

import numpy as np
import pytest

from shiftspace import context_free_shift, even_shift
from shiftspace.kernels import _numpy

try:
    from shiftspace.kernels import _numba
except ImportError:  # pragma: no cover
    _numba = None

needs_numba = pytest.mark.skipif(_numba is None, reason="numba not installed")


def _all_codes(base, length):
    return np.arange(base ** length, dtype=np.int64)


def test_decode_digits_roundtrip():
    codes = _all_codes(3, 4)
    digits = _numpy.decode_digits(codes, 4, 3)
    back = digits[:, 0]
    for j in range(1, 4):
        back = back * 3 + digits[:, j]
    assert (back == codes).all()


@needs_numba
def test_dfa_filter_backends_agree():
    ev = even_shift()
    trans, start, accept = ev.scanner()
    codes = _all_codes(2, 10)
    a = _numpy.dfa_filter(codes, 10, 2, trans, start, accept)
    b = _numba.dfa_filter(codes, 10, 2, trans, start, accept)
    assert (a == b).all()
    assert a.sum() == 232  # |L_10| of the even shift


@needs_numba
def test_subset_filter_backends_agree():
    ev = even_shift()
    masks = ev.presentation.step_masks()
    full = np.uint64((1 << ev.presentation.n_states) - 1)
    codes = _all_codes(2, 9)
    a = _numpy.subset_filter(codes, 9, 2, masks, full, full)
    b = _numba.subset_filter(codes, 9, 2, masks, full, full)
    assert (a == b).all()


@needs_numba
def test_marker_filter_backends_agree():
    from shiftspace.transforms import MarkerCollapsedOracle
    cf = context_free_shift()
    oracle = MarkerCollapsedOracle(cf)
    for length in (3, 5, 8):
        trans, start, accept = cf.scanner(length // 4 + 2)
        codes = _all_codes(4, length)
        args = (codes, length, 4, oracle.sel_class, oracle.data_class,
                trans, start, accept)
        a = _numpy.marker_filter(*args)
        b = _numba.marker_filter(*args)
        assert (a == b).all()
        assert a.any() and not a.all()


def _sizes_in_subprocess(env_value):
    script = (
        "import shiftspace as s\n"
        "from shiftspace.kernels import BACKEND\n"
        "sel = s.selector_shift(s.disjoint_union(s.full_shift(['0','1']),"
        " s.full_shift(['0','1'])))\n"
        "mk = s.star_collapse(s.marker_interleave(s.context_free_shift()))\n"
        "print(BACKEND)\n"
        "print(s.complexity_sequence(s.even_shift(), 10))\n"
        "print(s.complexity_sequence(sel, 6))\n"
        "print(s.complexity_sequence(mk, 8))\n")
    env = dict(os.environ)
    env.pop("SHIFTSPACE_PURE_NUMPY", None)
    if env_value is not None:
        env["SHIFTSPACE_PURE_NUMPY"] = env_value
    out = subprocess.run([sys.executable, "-c", script], check=True,
                         capture_output=True, text=True, env=env)
    return out.stdout.splitlines()


def test_pure_numpy_flag_switches_backend_not_results():
    plain = _sizes_in_subprocess(None)
    pure = _sizes_in_subprocess("1")
    assert pure[0] == "numpy"
    if _numba is not None:
        assert plain[0] == "numba"
    assert plain[1:] == pure[1:]


def test_flag_zero_means_default():
    assert _sizes_in_subprocess("0")[1:] == _sizes_in_subprocess(None)[1:]
