"""Hot loops over bitmask hyperaddition tables.

Every table handed to these kernels is an ``(n, n)`` array of ``uint64`` where
bit ``i`` of ``add[a, b]`` is set when element ``i`` lies in ``a + b``.  Each
kernel exists twice: a numba ``@njit`` loop and a vectorised numpy version.
The numba path is used when numba imports cleanly and ``HYPERFIELD_NO_NUMBA``
is unset (or ``0``); both paths must return identical results.
"""

from __future__ import annotations

import os

import numpy as np

NO_WITNESS = (-1, -1, -1)

_flag = os.environ.get("HYPERFIELD_NO_NUMBA", "").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError("numba disabled by HYPERFIELD_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised with the env flag
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


BACKEND = "numba" if HAVE_NUMBA else "numpy"


# -- numba kernels ----------------------------------------------------------


@njit(cache=True)
def _set_plus_elem_nb(add, mask, c):
    out = np.uint64(0)
    i = 0
    one = np.uint64(1)
    while mask:
        if mask & one:
            out |= add[i, c]
        mask >>= one
        i += 1
    return out


@njit(cache=True)
def assoc_witness_nb(add):
    n = add.shape[0]
    for a in range(n):
        for b in range(n):
            ab = add[a, b]
            for c in range(n):
                left = _set_plus_elem_nb(add, ab, c)
                right = _set_plus_elem_nb(add, add[b, c], a)
                if left != right:
                    return a, b, c
    return -1, -1, -1


@njit(cache=True)
def distrib_witness_nb(add, mul):
    n = add.shape[0]
    one = np.uint64(1)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                mask = add[b, c]
                scaled = np.uint64(0)
                i = 0
                while mask:
                    if mask & one:
                        scaled |= one << np.uint64(mul[a, i])
                    mask >>= one
                    i += 1
                if scaled != add[mul[a, b], mul[a, c]]:
                    return a, b, c
    return -1, -1, -1


@njit(cache=True)
def reversibility_witness_nb(add, neg):
    # x in y+z  =>  z in x + (-y); elements with undefined negative are skipped
    n = add.shape[0]
    one = np.uint64(1)
    for x in range(n):
        for y in range(n):
            if neg[y] < 0:
                continue
            for z in range(n):
                if (add[y, z] >> np.uint64(x)) & one:
                    if not (add[x, neg[y]] >> np.uint64(z)) & one:
                        return x, y, z
    return -1, -1, -1


@njit(cache=True)
def brute_first_nb(add, mul, nvals, nvars, eq_ptr, t_coef, t_var, covers, full):
    """Lexicographically first nonzero assignment solving every equation."""
    vals = np.zeros(nvars, np.int64)
    k = eq_ptr.shape[0] - 1
    while True:
        i = nvars - 1
        while i >= 0:
            vals[i] += 1
            if vals[i] < nvals:
                break
            vals[i] = 0
            i -= 1
        if i < 0:
            return False, vals
        ok = True
        for e in range(k):
            state = np.uint64(1)
            for t in range(eq_ptr[e], eq_ptr[e + 1]):
                state = _set_plus_elem_nb(add, state, mul[t_coef[t], vals[t_var[t]]])
            if covers:
                ok = state == full
            else:
                ok = (state & np.uint64(1)) != np.uint64(0)
            if not ok:
                break
        if ok:
            return True, vals


# -- numpy fallbacks --------------------------------------------------------


def _bits(add):
    """``M[a, b, i]`` is True when ``i`` lies in ``a + b``."""
    n = add.shape[0]
    shifts = np.arange(n, dtype=np.uint64)
    return ((add[:, :, None] >> shifts) & np.uint64(1)).astype(bool)


def _first(bad):
    hits = np.argwhere(bad)
    if len(hits) == 0:
        return NO_WITNESS
    return tuple(int(v) for v in hits[0])


def assoc_witness_np(add):
    n = add.shape[0]
    member = _bits(add)
    left = np.zeros((n, n, n), dtype=np.uint64)
    right = np.zeros((n, n, n), dtype=np.uint64)
    zero = np.uint64(0)
    for i in range(n):
        # (a+b)+c collects add[i, c] for every i in a+b
        left |= np.where(member[:, :, i, None], add[i][None, None, :], zero)
        # a+(b+c) collects add[a, i] for every i in b+c
        right |= np.where(member[None, :, :, i], add[:, i][:, None, None], zero)
    return _first(left != right)


def distrib_witness_np(add, mul):
    n = add.shape[0]
    member = _bits(add)
    scaled = np.zeros((n, n, n), dtype=np.uint64)
    one = np.uint64(1)
    for i in range(n):
        img = one << mul[:, i].astype(np.uint64)
        scaled |= np.where(member[None, :, :, i], img[:, None, None], np.uint64(0))
    expected = add[mul[:, :, None], mul[:, None, :]]
    return _first(scaled != expected)


def reversibility_witness_np(add, neg):
    n = add.shape[0]
    member = _bits(add)  # [y, z, x]
    ok_neg = neg >= 0
    back = add[:, np.where(ok_neg, neg, 0)]  # back[x, y] = x + (-y)
    z_in = ((back[:, :, None] >> np.arange(n, dtype=np.uint64)) & np.uint64(1)).astype(bool)
    # bad[x, y, z]: x in y+z but z not in x+(-y)
    bad = member.transpose(2, 0, 1) & ~z_in & ok_neg[None, :, None]
    return _first(bad)


def brute_first_np(add, mul, nvals, nvars, eq_ptr, t_coef, t_var, covers, full, chunk=1 << 16):
    total = nvals ** nvars
    k = len(eq_ptr) - 1
    weights = nvals ** np.arange(nvars - 1, -1, -1, dtype=np.int64)
    start = 1
    while start < total:
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        vals = (idx[:, None] // weights[None, :]) % nvals
        ok = np.ones(len(idx), dtype=bool)
        for e in range(k):
            state = np.ones(len(idx), dtype=np.uint64)
            for t in range(eq_ptr[e], eq_ptr[e + 1]):
                terms = mul[t_coef[t], vals[:, t_var[t]]]
                new = np.zeros_like(state)
                for i in range(nvals):
                    has = ((state >> np.uint64(i)) & np.uint64(1)).astype(bool)
                    new |= np.where(has, add[i, terms], np.uint64(0))
                state = new
            ok &= (state == full) if covers else (state & np.uint64(1)).astype(bool)
        hit = np.flatnonzero(ok)
        if len(hit):
            return True, vals[hit[0]].astype(np.int64)
        start += chunk
    return False, np.zeros(nvars, dtype=np.int64)


if HAVE_NUMBA:
    assoc_witness = assoc_witness_nb
    distrib_witness = distrib_witness_nb
    reversibility_witness = reversibility_witness_nb
    brute_first = brute_first_nb
else:
    assoc_witness = assoc_witness_np
    distrib_witness = distrib_witness_np
    reversibility_witness = reversibility_witness_np
    brute_first = brute_first_np
