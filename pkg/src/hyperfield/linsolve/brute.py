"""Exhaustive reference solver."""

from __future__ import annotations

from typing import Optional

import numpy as np

from hyperfield import _kernels
from hyperfield.core import HyperfieldError
from hyperfield.linsolve.system import COVERS, LinearSystem

BRUTE_CAP = 10**8


class CapExceededError(HyperfieldError):
    pass


def pack(S: LinearSystem, order) -> tuple:
    """CSR-style arrays of the equations over variable positions in ``order``."""
    pos = {v: i for i, v in enumerate(order)}
    eq_ptr = [0]
    coefs, vars_ = [], []
    for eq in S.equations:
        for c, v in eq:
            coefs.append(c)
            vars_.append(pos[v])
        eq_ptr.append(len(coefs))
    return (
        np.array(eq_ptr, dtype=np.int64),
        np.array(coefs, dtype=np.int64),
        np.array(vars_, dtype=np.int64),
    )


def brute_solve(S: LinearSystem, cap: int = BRUTE_CAP) -> Optional[dict]:
    """Lexicographically first nontrivial solution over the active variables.

    Variables are ordered by id; the last one varies fastest.  Raises
    :class:`CapExceededError` when ``|F|^n`` exceeds ``cap``.
    """
    F = S.field
    order = sorted(S.active)
    total = F.size ** len(order)
    if total > cap:
        raise CapExceededError(f"{F.size}^{len(order)} = {total} candidates exceeds cap {cap}")
    if not order:
        return None
    eq_ptr, coefs, vars_ = pack(S, order)
    found, vals = _kernels.brute_first(
        F.add_table,
        np.ascontiguousarray(F.mul_table),
        F.size,
        len(order),
        eq_ptr,
        coefs,
        vars_,
        S.semantics == COVERS,
        np.uint64(F.full_mask),
    )
    if not found:
        return None
    return {v: int(x) for v, x in zip(order, vals)}
