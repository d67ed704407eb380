"""Projective covers, minimal resolutions, Ext groups and constructive lifts.

For a monomial algebra the radical of a module is the sum of the arrow
images, which makes projective covers cheap; Ext is computed from the
minimal projective resolution as cocycles modulo coboundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import matmul
from .modules import (
    Module,
    Morphism,
    compose,
    coordinates_in_hom,
    direct_sum,
    flatten,
    hom_basis,
    identity_morphism,
    is_surjective,
    kernel,
    path_action,
    projective_module,
    stack_cols,
    zero_module,
    zero_morphism,
)


class IncompatibleSquare(ValueError):
    """The lifting problem's square does not commute (or has mismatched corners)."""


def radical(m: Module) -> tuple[Module, Morphism]:
    """The submodule generated by all arrow images, with its inclusion."""
    p = m.algebra.p
    nv = m.algebra.vertex_count
    spans = []
    for v in range(nv):
        cols = [
            matmul(m.maps[i], linalg.identity(m.dims[a.source]), p)
            for i, a in enumerate(m.algebra.quiver.arrows)
            if a.target == v
        ]
        stacked = linalg.hstack(cols, m.dims[v])
        spans.append(linalg.column_space_basis(stacked, p))
    dims = [b.shape[1] for b in spans]
    maps = []
    for a in m.algebra.quiver.arrows:
        pushed = matmul(m.map_by_name(a.name), spans[a.source], p)
        sol = linalg.solve(spans[a.target], pushed, p)
        if sol is None:
            raise AssertionError("arrow image escaped the radical span")
        maps.append(sol)
    rad = Module(m.algebra, dims, maps)
    return rad, Morphism(rad, m, spans)


def projective_cover(m: Module) -> Morphism:
    """The minimal surjection P(top M) -> M; the zero map for the zero module."""
    algebra = m.algebra
    if m.total_dim == 0:
        return zero_morphism(zero_module(algebra), m)
    p = algebra.p
    rad, incl = radical(m)
    summands: list[Module] = []
    generators: list[tuple[int, np.ndarray]] = []  # (vertex, chosen generator vector)
    for v in range(algebra.vertex_count):
        span = incl.maps[v]
        _, pivots, _ = linalg.rref(span.T, p)
        pivot_set = set(pivots)
        for j in range(m.dims[v]):
            if j in pivot_set:
                continue
            vec = linalg.zeros(m.dims[v], 1)
            vec[j, 0] = 1
            summands.append(projective_module(algebra, v))
            generators.append((v, vec))
    total, _inj, _proj = direct_sum(algebra, summands)
    components = []
    for proj_mod, (v, vec) in zip(summands, generators):
        maps = []
        for w in range(algebra.vertex_count):
            idxs = algebra.basis_indices(v, w)
            cols = [path_action(m, algebra.basis[bi], vec) for bi in idxs]
            maps.append(linalg.hstack(cols, m.dims[w]))
        components.append(Morphism(proj_mod, m, maps))
    cover = stack_cols(total, components) if components else zero_morphism(total, m)
    if not is_surjective(cover):
        raise AssertionError("projective cover failed to be surjective")
    return cover


@dataclass
class Resolution:
    """A truncated minimal projective resolution.

    terms[0] = (P_0, augmentation P_0 -> M); for i >= 1,
    terms[i] = (P_i, differential P_i -> P_{i-1}).  `complete` is True when
    the last syzygy vanished, so the resolution is the whole story.
    """

    module: Module
    terms: list[tuple[Module, Morphism]]
    complete: bool

    @property
    def length(self) -> int:
        return len(self.terms) - 1


def resolve(m: Module, length: int) -> Resolution:
    """Minimal projective resolution out to `length` differentials."""
    if length < 0:
        raise ValueError("length must be nonnegative")
    cache = m.algebra.cache("resolution")
    res: Resolution | None = cache.get(m.key())
    if res is None:
        aug = projective_cover(m)
        res = Resolution(m, [(aug.source, aug)], complete=aug.source.total_dim == m.total_dim == 0)
        cache[m.key()] = res
    while res.length < length and not res.complete:
        last_p, last_d = res.terms[-1]
        syz, incl = kernel(last_d)
        if syz.total_dim == 0:
            res.complete = True
            break
        cover = projective_cover(syz)
        res.terms.append((cover.source, compose(incl, cover)))
    return res


def syzygy(m: Module, i: int = 1) -> Module:
    """The i-th syzygy of m (kernel of the i-th differential)."""
    res = resolve(m, i - 1)
    if res.length < i - 1:
        return zero_module(m.algebra)
    return kernel(res.terms[i - 1][1])[0]


@dataclass
class ExtGroup:
    """Ext^degree(M, N) presented by cocycle representatives."""

    degree: int
    dim: int
    cocycle_basis: list[Morphism]


def _hom_map_matrix(basis_src: list[Morphism], basis_tgt: list[Morphism], precompose: Morphism, p: int):
    """Matrix (in Hom-bases) of h -> h o precompose."""
    if not basis_src:
        return linalg.zeros(len(basis_tgt), 0)
    cols = []
    for h in basis_src:
        composite = compose(h, precompose)
        coords = coordinates_in_hom(basis_tgt, composite)
        if coords is None:
            raise AssertionError("composite escaped the Hom space")
        cols.append(coords[:, 0] if coords.size else np.zeros(0, dtype=np.int64))
    return np.column_stack(cols) if cols else linalg.zeros(len(basis_tgt), 0)


def ext_dim(m: Module, n: Module, degree: int) -> ExtGroup:
    """Ext^degree(M, N) with a basis of cocycle coset representatives."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    p = m.algebra.p
    res = resolve(m, degree + 1)
    if res.length < degree:
        return ExtGroup(degree, 0, [])
    p_deg = res.terms[degree][0]
    basis_deg = hom_basis(p_deg, n)
    if not basis_deg:
        return ExtGroup(degree, 0, [])
    # incoming coboundaries from Hom(P_{degree-1}, N)
    basis_prev = hom_basis(res.terms[degree - 1][0], n)
    d_deg = res.terms[degree][1]
    in_matrix = _hom_map_matrix(basis_prev, basis_deg, d_deg, p)
    # outgoing differential to Hom(P_{degree+1}, N)
    if res.length >= degree + 1:
        p_next, d_next = res.terms[degree + 1]
        basis_next = hom_basis(p_next, n)
        out_cols = []
        for h in basis_deg:
            composite = compose(h, d_next)
            coords = coordinates_in_hom(basis_next, composite)
            if coords is None:
                raise AssertionError("composite escaped the Hom space")
            out_cols.append(coords[:, 0] if coords.size else np.zeros(0, dtype=np.int64))
        out_matrix = np.column_stack(out_cols) if out_cols else linalg.zeros(0, len(basis_deg))
    else:
        out_matrix = linalg.zeros(0, len(basis_deg))
    cocycles = linalg.kernel_basis(out_matrix, p)  # columns: coords in basis_deg
    img_rank = linalg.rank(in_matrix, p)
    dim = cocycles.shape[1] - img_rank
    # coset representatives: cocycle columns extending the coboundary span
    from .modules import combine

    reps: list[Morphism] = []
    span = in_matrix
    current = img_rank
    for j in range(cocycles.shape[1]):
        cand = cocycles[:, j : j + 1]
        stacked = np.hstack([span, cand])
        if linalg.rank(stacked, p) > current:
            span = stacked
            current += 1
            reps.append(combine(basis_deg, cocycles[:, j]))
    if len(reps) != dim:
        raise AssertionError("cocycle representative extraction miscounted")
    return ExtGroup(degree, dim, reps)


def find_lift(i: Morphism, p_map: Morphism, top: Morphism, bottom: Morphism) -> Morphism | None:
    """Solve lam o i = top and p o lam = bottom for lam: B -> C.

    Raises IncompatibleSquare when the square does not commute; returns
    None when the linear system has no solution.
    """
    if i.source.key() != top.source.key() or p_map.target.key() != bottom.target.key():
        raise IncompatibleSquare("corners of the square do not match")
    if i.target.key() != bottom.source.key() or p_map.source.key() != top.target.key():
        raise IncompatibleSquare("corners of the square do not match")
    if compose(p_map, top).key() != compose(bottom, i).key():
        raise IncompatibleSquare("square does not commute")
    p = i.algebra.p
    basis = hom_basis(i.target, p_map.source)
    t_flat = flatten(top)
    b_flat = flatten(bottom)
    if not basis:
        lam = zero_morphism(i.target, p_map.source)
        if compose(lam, i).key() == top.key() and compose(p_map, lam).key() == bottom.key():
            return lam
        return None
    rows = []
    for h in basis:
        rows.append(np.concatenate([flatten(compose(h, i)), flatten(compose(p_map, h))]))
    system = np.column_stack(rows)
    rhs = np.concatenate([t_flat, b_flat]).reshape(-1, 1)
    sol = linalg.solve(system, rhs, p)
    if sol is None:
        return None
    from .modules import combine

    return combine(basis, sol[:, 0])
