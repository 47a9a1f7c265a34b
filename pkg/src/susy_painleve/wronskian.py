"""Wronskian determinants with analytically closed derivatives.

The m-th derivative of a k x k Wronskian is a signed sum of determinants
whose row orders are obtained by bumping one row at a time (rows equal to
an existing order cancel).  Row orders are tracked as multiset-free
tuples, so any derivative order works for any k.  Columns are scaled by
their largest entry before the LU determinant to keep Gaussian-type
growth away from overflow; scalings cancel in every ratio of determinants
sharing the same columns.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def derivative_rowsets(k, m):
    """Mapping {tuple(sorted row orders): integer coefficient} for W^(m)."""
    terms = {tuple(range(k)): 1}
    for _ in range(m):
        nxt = {}
        for rows, coeff in terms.items():
            for i in range(k):
                bumped = rows[i] + 1
                if bumped in rows:
                    continue
                new = tuple(sorted(rows[:i] + (bumped,) + rows[i + 1 :]))
                # determinant rows stay sorted, bumping keeps order (no sign)
                nxt[new] = nxt.get(new, 0) + coeff
        terms = nxt
    return terms


class ConstantOne:
    """Stand-in for the empty Wronskian W() = 1."""

    def derivs(self, x, m):
        out = np.zeros(m + 1, dtype=complex)
        out[0] = 1.0
        return out


class WronskianJet:
    """W(f_1, ..., f_k) together with as many x-derivatives as requested."""

    def __init__(self, funcs):
        self.funcs = list(funcs)

    @property
    def k(self):
        return len(self.funcs)

    def derivs(self, x, m):
        k = self.k
        if k == 0:
            return ConstantOne().derivs(x, m)
        max_order = k - 1 + m
        cols = [f.derivatives(x, max_order) for f in self.funcs]
        scales = np.array([max(np.max(np.abs(c)), 1e-300) for c in cols])
        scaled = [c / s for c, s in zip(cols, scales)]
        log_scale = float(np.sum(np.log(scales)))
        out = np.zeros(m + 1, dtype=complex)
        for order in range(m + 1):
            acc = 0j
            for rows, coeff in derivative_rowsets(k, order).items():
                mat = np.array([[scaled[c][r] for c in range(k)] for r in rows])
                acc += coeff * np.linalg.det(mat)
            out[order] = acc * math.exp(log_scale) if abs(log_scale) < 600 else acc * np.exp(log_scale)
        return out


def log_derivatives(wder):
    """(ln W)', (ln W)'', (ln W)''' from [W, W', W'', W'''].

    Returns as many log-derivatives as the input length allows.
    """
    w = wder[0]
    if w == 0:
        raise ZeroDivisionError("Wronskian vanishes at the evaluation point")
    r = wder / w
    out = []
    if len(wder) > 1:
        out.append(r[1])
    if len(wder) > 2:
        out.append(r[2] - r[1] ** 2)
    if len(wder) > 3:
        out.append(r[3] - 3.0 * r[1] * r[2] + 2.0 * r[1] ** 3)
    if len(wder) > 4:
        out.append(
            r[4] - 4.0 * r[1] * r[3] - 3.0 * r[2] ** 2 + 12.0 * r[1] ** 2 * r[2] - 6.0 * r[1] ** 4
        )
    return tuple(out)


def pair_wronskian_derivs(A, B, x, m):
    """Derivatives of the 2x2 Wronskian W(A, B) = A B' - B A'.

    A and B expose .derivs(x, order); the Leibniz expansion of A B^(1+q)
    keeps everything analytic.
    """
    a = A.derivs(x, m + 1)
    b = B.derivs(x, m + 1)
    out = np.zeros(m + 1, dtype=complex)
    for p in range(m + 1):
        acc = 0j
        for q in range(p + 1):
            c = math.comb(p, q)
            acc += c * (a[q] * b[1 + p - q] - b[q] * a[1 + p - q])
        out[p] = acc
    return out
