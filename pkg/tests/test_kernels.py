from __future__ import annotations

import numpy as np
import pytest

from k3verify import kernels
from k3verify.delsarte import COVERS, fiber_rows
from k3verify.exactnum import Fq

BACKENDS = sorted(kernels.BACKENDS)


def test_compiled_backend_is_default_when_built():
    if "cython" in kernels.BACKENDS:
        assert kernels.default_backend() == "cython"
    else:
        assert kernels.default_backend() == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.set_default_backend("fortran")


@pytest.mark.parametrize("p,r", [(17, 1), (3, 2), (5, 2)])
def test_jacobi_histogram_parity(p, r):
    F = Fq(p, r)
    n = F.q - 1
    args = (n, F.add_table, F.neg_table, F.log_table % n, F.neg(1))
    ref = kernels.jacobi_histogram(*args, backend="python")
    for b in BACKENDS:
        for threads in (1, 3, 8):
            assert np.array_equal(kernels.jacobi_histogram(*args, threads=threads, backend=b), ref)


@pytest.mark.parametrize("q,n", [(13, 4), (17, 8), (9, 4)])
def test_fermat_parity(q, n):
    F = Fq(3, 2) if q == 9 else Fq(q)
    pown = np.array([F.pow(x, n) for x in range(F.q)], dtype=np.int32)
    ref = kernels.fermat_projective_count(F.add_table, pown, backend="python")
    for b in BACKENDS:
        for threads in (1, 2, 5):
            assert kernels.fermat_projective_count(F.add_table, pown, threads=threads, backend=b) == ref


def test_fiber_count_parity():
    F = Fq(17)
    rows = fiber_rows(COVERS[(4, "0", 8)].weierstrass(), F)
    args = (rows, F.add_table, F.mul_table, F.sqrt_counts(), F.from_int(4))
    ref = kernels.fiber_counts(*args, backend="python")
    for b in BACKENDS:
        for threads in (1, 4, 32):
            assert np.array_equal(kernels.fiber_counts(*args, threads=threads, backend=b), ref)


def test_switching_default_backend():
    old = kernels.default_backend()
    try:
        kernels.set_default_backend("python")
        assert kernels.default_backend() == "python"
    finally:
        kernels.set_default_backend(old)
