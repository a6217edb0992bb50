"""Backend selection for the finite-field counting kernels.

The compiled extension ``_ckernels`` is used when it imports; otherwise the
pure-Python ``_pykernels`` fallback. Work can be split over threads: the
compiled loops release the GIL, and every kernel returns exact integers, so
results do not depend on the thread count.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None

BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

_default = "cython" if _ckernels is not None else "python"


def default_backend() -> str:
    return _default


def set_default_backend(name: str) -> None:
    global _default
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    _default = name


def _module(backend: str | None) -> ModuleType:
    name = backend or _default
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    return BACKENDS[name]


def _chunks(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, hi - lo))
    step, extra = divmod(hi - lo, parts)
    out, cur = [], lo
    for i in range(parts):
        nxt = cur + step + (1 if i < extra else 0)
        out.append((cur, nxt))
        cur = nxt
    return out


def _run(fn, lo, hi, threads):
    spans = _chunks(lo, hi, threads)
    if len(spans) == 1:
        return [fn(*spans[0])]
    with ThreadPoolExecutor(max_workers=len(spans)) as pool:
        return list(pool.map(lambda s: fn(*s), spans))


def fiber_counts(coefs, add, mul, sqcount, four, *, threads=1, backend=None):
    mod = _module(backend)
    parts = _run(lambda a, b: mod.fiber_counts(coefs, add, mul, sqcount, four, a, b),
                 0, len(coefs), threads)
    return sum(parts[1:], parts[0])


def jacobi_histogram(n, add, neg, logmod, minus_one, *, threads=1, backend=None):
    mod = _module(backend)
    parts = _run(lambda a, b: mod.jacobi_histogram(n, add, neg, logmod, minus_one, a, b),
                 1, len(add), threads)
    return sum(parts[1:], parts[0])


def fermat_projective_count(add, pown, *, threads=1, backend=None):
    mod = _module(backend)
    parts = _run(lambda a, b: mod.fermat_projective_count(add, pown, a, b),
                 0, 4 * len(add), threads)
    return int(sum(parts))
