"""Betti numbers over GF(2): simplicial complexes via sparse column
reduction, and 2-D occupancy grids via labeling plus an Euler count.

Columns are kept as Python sets of row indices and reduced by symmetric
difference against a pivot table (pivot = largest row index).  Boundary
ranks are computed from the top dimension down so that pivot rows of the
(k+1)-boundary clear columns of the k-boundary before they are reduced.
"""
from __future__ import annotations

import numpy as np
from scipy import ndimage

from .complexes import SimplicialComplex


def rank_gf2(columns, skip=frozenset()):
    """Rank of a GF(2) matrix given as an iterable of row-index sets.

    skip lists column positions known to reduce to zero (cleared by a
    higher boundary); they are not processed.  Returns (rank, pivot_rows).
    """
    pivots = {}
    rank = 0
    for j, col in enumerate(columns):
        if j in skip:
            continue
        col = set(col)
        while col:
            p = max(col)
            other = pivots.get(p)
            if other is None:
                pivots[p] = col
                rank += 1
                break
            col ^= other
    return rank, set(pivots)


def _grouped(simplices):
    by_dim = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(tuple(s))
    for k in by_dim:
        by_dim[k] = sorted(set(by_dim[k]))
    return by_dim


def betti_simplicial(cx, up_to=None, validate=True):
    """Betti numbers of a face-closed simplicial complex over GF(2).

    Accepts a SimplicialComplex or a bare simplex list.  With up_to=k only
    (b_0, ..., b_k) are returned (and only the boundaries through dimension
    k+1 are reduced).
    """
    if isinstance(cx, SimplicialComplex):
        simplices = cx.simplices
    else:
        simplices = [tuple(sorted(s)) for s in cx]
    if not simplices:
        return (0,)
    by_dim = _grouped(simplices)
    top = max(by_dim)
    out_top = top if up_to is None else min(up_to, top)
    need = min(top, out_top + 1)

    if validate:
        index_all = set(simplices)
        for s in simplices:
            for d in range(len(s)):
                if len(s) > 1 and s[:d] + s[d + 1:] not in index_all:
                    raise ValueError(f"complex is not face-closed at {s}")

    positions = {k: {s: i for i, s in enumerate(by_dim[k])} for k in by_dim}
    ranks = {k: 0 for k in range(top + 2)}
    cleared = frozenset()
    for k in range(need, 0, -1):
        if k not in by_dim:
            cleared = frozenset()
            continue
        pos = positions[k - 1]
        cols = ([pos[s[:d] + s[d + 1:]] for d in range(len(s))]
                for s in by_dim[k])
        ranks[k], pivot_rows = rank_gf2(cols, skip=cleared)
        cleared = pivot_rows
    betti = []
    for k in range(out_top + 1):
        n_k = len(by_dim.get(k, []))
        betti.append(n_k - ranks[k] - ranks[k + 1])
    return tuple(betti)


def betti_grid_2d(occupancy):
    """(b0, b1) of a 2-D occupancy grid, viewing each occupied cell as a
    closed unit square (so components are 8-connected) and counting holes
    through the Euler characteristic V - E + F of the union."""
    occ = np.asarray(occupancy)
    if occ.ndim != 2:
        raise ValueError("occupancy grid must be 2-D")
    occ = occ > 0.5
    if not occ.any():
        return (0, 0)
    b0 = int(ndimage.label(occ, structure=np.ones((3, 3), dtype=int))[1])
    p = np.zeros((occ.shape[0] + 2, occ.shape[1] + 2), dtype=bool)
    p[1:-1, 1:-1] = occ
    corners = p[:-1, :-1] | p[:-1, 1:] | p[1:, :-1] | p[1:, 1:]
    edges_x = p[:-1, 1:-1] | p[1:, 1:-1]
    edges_y = p[1:-1, :-1] | p[1:-1, 1:]
    chi = (int(corners.sum()) - int(edges_x.sum()) - int(edges_y.sum())
           + int(occ.sum()))
    return (b0, b0 - chi)


def betti_of_field(field, up_to=1):
    """Betti numbers of the occupied region of a 2-D GridField."""
    b = betti_grid_2d(field.values)
    return b[:up_to + 1]
