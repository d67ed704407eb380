"""Finite-dimensional representations of a monomial quiver algebra.

A Module assigns a vector space dimension to every vertex and an exact
matrix to every arrow; a Morphism is a tuple of vertex matrices commuting
with the arrow actions.  All values are immutable after construction and
every operation is a pure function, so everything can be shared freely
between threads; the per-algebra caches are plain dicts and are safe for
the usual confined / read-mostly usage.
"""

from __future__ import annotations

import itertools
import zlib
from dataclasses import dataclass

import numpy as np

from . import linalg
from .budgets import UNDECIDED, Budget
from .linalg import key_bytes, matmul
from .quivers import Algebra, Path


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured cap."""

    def __init__(self, message: str, dim_vector=None):
        super().__init__(message)
        self.dim_vector = dim_vector


class Module:
    """A representation: per-vertex dimensions plus per-arrow matrices."""

    __slots__ = ("algebra", "dims", "maps", "_key", "_label")

    def __init__(self, algebra: Algebra, dims, maps=None, label: str = ""):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.vertex_count:
            raise ValueError("dimension vector length does not match the vertex count")
        if any(d < 0 for d in self.dims):
            raise ValueError("dimensions must be nonnegative")
        p = algebra.p
        built = []
        for idx, a in enumerate(algebra.quiver.arrows):
            shape = (self.dims[a.target], self.dims[a.source])
            if maps is None or maps[idx] is None:
                built.append(linalg.zeros(*shape))
            else:
                m = linalg.normalize(maps[idx], p)
                if m.shape != shape:
                    raise ValueError(
                        f"arrow {a.name}: matrix shape {m.shape} does not match {shape}"
                    )
                built.append(m)
        self.maps = tuple(built)
        self._key = None
        self._label = label

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def is_zero(self) -> bool:
        return self.total_dim == 0

    @property
    def label(self) -> str:
        return self._label

    def map_by_name(self, name: str) -> np.ndarray:
        return self.maps[self.algebra.quiver.arrow_index[name]]

    def key(self) -> bytes:
        if self._key is None:
            parts = [bytes(str(self.dims), "ascii")]
            parts.extend(key_bytes(m) for m in self.maps)
            self._key = b"|".join(parts)
        return self._key

    def relabel(self, label: str) -> "Module":
        m = Module(self.algebra, self.dims, self.maps, label=label)
        return m

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "maps": {
                a.name: [[int(x) for x in row] for row in self.maps[i]]
                for i, a in enumerate(self.algebra.quiver.arrows)
                if self.maps[i].size
            },
        }

    def __eq__(self, other) -> bool:
        return isinstance(other, Module) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        name = self._label or "Module"
        return f"{name}{self.dims}"


def validate_module(m: Module) -> list[str]:
    """Check the relation matrices vanish; returns human-readable diagnostics."""
    problems = []
    p = m.algebra.p
    for rel in m.algebra.relations:
        first = m.algebra.quiver.arrow(rel[0])
        acc = linalg.identity(m.dims[first.source])
        for name in rel:
            acc = matmul(m.map_by_name(name), acc, p)
        if acc.size and acc.any():
            problems.append(
                f"relation {'*'.join(reversed(rel))} acts nontrivially (product is nonzero)"
            )
    return problems


class Morphism:
    """A module morphism: one matrix per vertex, commuting with all arrows."""

    __slots__ = ("source", "target", "maps", "_key")

    def __init__(self, source: Module, target: Module, maps):
        self.source = source
        self.target = target
        p = source.algebra.p
        built = []
        for v in range(source.algebra.vertex_count):
            shape = (target.dims[v], source.dims[v])
            if maps is None or maps[v] is None:
                built.append(linalg.zeros(*shape))
            else:
                m = linalg.normalize(maps[v], p)
                if m.shape != shape:
                    raise ValueError(f"vertex {v}: matrix shape {m.shape} does not match {shape}")
                built.append(m)
        self.maps = tuple(built)
        self._key = None

    @property
    def algebra(self) -> Algebra:
        return self.source.algebra

    @property
    def is_zero(self) -> bool:
        return all(not m.any() for m in self.maps if m.size)

    def key(self) -> bytes:
        if self._key is None:
            self._key = b"#".join(
                [self.source.key(), self.target.key()] + [key_bytes(m) for m in self.maps]
            )
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Morphism) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Morphism({self.source!r} -> {self.target!r})"

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "maps": [[[int(x) for x in row] for row in m] for m in self.maps],
        }


def validate_morphism(f: Morphism) -> list[str]:
    problems = []
    p = f.algebra.p
    for a in f.algebra.quiver.arrows:
        lhs = matmul(f.target.map_by_name(a.name), f.maps[a.source], p)
        rhs = matmul(f.maps[a.target], f.source.map_by_name(a.name), p)
        if not np.array_equal(lhs, rhs):
            problems.append(f"morphism does not commute with arrow {a.name}")
    return problems


# ---------------------------------------------------------------------------
# basic constructors


def zero_module(algebra: Algebra) -> Module:
    return Module(algebra, [0] * algebra.vertex_count, label="0")


def simple_module(algebra: Algebra, vertex: int) -> Module:
    dims = [0] * algebra.vertex_count
    dims[vertex] = 1
    return Module(algebra, dims, label=f"S({vertex})")


def projective_module(algebra: Algebra, vertex: int) -> Module:
    """The left module A*e_vertex, presented on its path basis."""
    if not (0 <= vertex < algebra.vertex_count):
        raise ValueError(f"vertex {vertex} out of range")
    span = {v: algebra.basis_indices(vertex, v) for v in range(algebra.vertex_count)}
    dims = [len(span[v]) for v in range(algebra.vertex_count)]
    path_index = algebra.cache("path_index")
    if not path_index:
        path_index.update({q: i for i, q in enumerate(algebra.basis)})
    maps = []
    for a in algebra.quiver.arrows:
        mat = linalg.zeros(dims[a.target], dims[a.source])
        col_paths = span[a.source]
        row_index = {bi: r for r, bi in enumerate(span[a.target])}
        for c, bi in enumerate(col_paths):
            composed = algebra.compose_with_arrow(algebra.basis[bi], a)
            if composed is None:
                continue
            mat[row_index[path_index[composed]], c] = 1
        maps.append(mat)
    return Module(algebra, dims, maps, label=f"P({vertex})")


def identity_morphism(m: Module) -> Morphism:
    return Morphism(m, m, [linalg.identity(d) for d in m.dims])


def zero_morphism(m: Module, n: Module) -> Morphism:
    return Morphism(m, n, None)


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g after f."""
    if g.source.key() != f.target.key():
        raise ValueError("morphisms are not composable")
    p = f.algebra.p
    return Morphism(f.source, g.target, [matmul(g.maps[v], f.maps[v], p) for v in range(len(f.maps))])


def add_morphisms(f: Morphism, g: Morphism) -> Morphism:
    p = f.algebra.p
    return Morphism(f.source, f.target, [linalg.madd(f.maps[v], g.maps[v], p) for v in range(len(f.maps))])


def sub_morphisms(f: Morphism, g: Morphism) -> Morphism:
    p = f.algebra.p
    return Morphism(f.source, f.target, [linalg.msub(f.maps[v], g.maps[v], p) for v in range(len(f.maps))])


def scale_morphism(c: int, f: Morphism) -> Morphism:
    p = f.algebra.p
    return Morphism(f.source, f.target, [linalg.mscale(c, f.maps[v], p) for v in range(len(f.maps))])


def path_action(m: Module, path: Path, mat: np.ndarray) -> np.ndarray:
    """Apply the arrows of a path, in application order, to column vectors."""
    p = m.algebra.p
    acc = mat
    for name in path.arrows:
        acc = matmul(m.map_by_name(name), acc, p)
    return acc


def flatten(f: Morphism) -> np.ndarray:
    parts = [m.reshape(-1) for m in f.maps]
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(parts)


def morphism_from_flat(m: Module, n: Module, flat: np.ndarray) -> Morphism:
    maps = []
    pos = 0
    for v in range(m.algebra.vertex_count):
        size = n.dims[v] * m.dims[v]
        maps.append(flat[pos : pos + size].reshape(n.dims[v], m.dims[v]))
        pos += size
    return Morphism(m, n, maps)


def combine(basis: list[Morphism], coeffs) -> Morphism:
    """The linear combination sum(coeffs[i] * basis[i])."""
    m, n = basis[0].source, basis[0].target
    p = m.algebra.p
    maps = [linalg.zeros(n.dims[v], m.dims[v]) for v in range(m.algebra.vertex_count)]
    for c, b in zip(coeffs, basis):
        if c == 0:
            continue
        for v in range(len(maps)):
            maps[v] = (maps[v] + int(c) * b.maps[v]) % p
    return Morphism(m, n, maps)


# ---------------------------------------------------------------------------
# Hom spaces


def hom_basis(m: Module, n: Module) -> list[Morphism]:
    """A basis of Hom(M, N), deterministic for fixed inputs.

    The commutation constraints form one linear system in the entries of
    the vertex matrices; the basis is the canonical null-space basis of
    that system.
    """
    if m.algebra.key() != n.algebra.key():
        raise ValueError("modules live over different algebras")
    cache = m.algebra.cache("hom")
    ck = (m.key(), n.key())
    if ck in cache:
        return cache[ck]
    p = m.algebra.p
    nv = m.algebra.vertex_count
    var_sizes = [n.dims[v] * m.dims[v] for v in range(nv)]
    offsets = np.cumsum([0] + var_sizes)
    total = int(offsets[-1])
    rows = []
    for a in m.algebra.quiver.arrows:
        u, v = a.source, a.target
        n_rows = n.dims[v] * m.dims[u]
        if n_rows == 0:
            continue
        block = linalg.zeros(n_rows, total)
        if var_sizes[u]:
            block[:, offsets[u] : offsets[u + 1]] = np.kron(
                n.map_by_name(a.name), linalg.identity(m.dims[u])
            )
        if var_sizes[v]:
            block[:, offsets[v] : offsets[v + 1]] = (
                block[:, offsets[v] : offsets[v + 1]]
                - np.kron(linalg.identity(n.dims[v]), m.map_by_name(a.name).T)
            ) % p
        rows.append(block)
    constraint = linalg.vstack(rows, total)
    null = linalg.kernel_basis(constraint, p)
    basis = [morphism_from_flat(m, n, null[:, j]) for j in range(null.shape[1])]
    cache[ck] = basis
    return basis


def hom_dim(m: Module, n: Module) -> int:
    return len(hom_basis(m, n))


def coordinates_in_hom(basis: list[Morphism], f: Morphism) -> np.ndarray | None:
    """Coordinates of f in the given Hom basis, or None if f is outside the span."""
    if not basis:
        return np.zeros((0, 1), dtype=np.int64) if f.is_zero else None
    p = f.algebra.p
    mat = np.column_stack([flatten(b) for b in basis])
    return linalg.solve(mat, flatten(f).reshape(-1, 1), p)


# ---------------------------------------------------------------------------
# kernels, cokernels, images, sums


def kernel(f: Morphism) -> tuple[Module, Morphism]:
    """The kernel representation with its inclusion; exact at every vertex."""
    p = f.algebra.p
    bases = [linalg.kernel_basis(f.maps[v], p) for v in range(f.algebra.vertex_count)]
    dims = [b.shape[1] for b in bases]
    maps = []
    for a in f.algebra.quiver.arrows:
        image_of_basis = matmul(f.source.map_by_name(a.name), bases[a.source], p)
        sol = linalg.solve(bases[a.target], image_of_basis, p)
        if sol is None:
            raise AssertionError("kernel is not arrow-stable; morphism was not valid")
        maps.append(sol)
    k = Module(f.algebra, dims, maps)
    incl = Morphism(k, f.source, bases)
    return k, incl


def cokernel(f: Morphism) -> tuple[Module, Morphism]:
    """The cokernel representation with its projection, surjective at every vertex."""
    p = f.algebra.p
    projs = [linalg.quotient_projection(f.maps[v], p) for v in range(f.algebra.vertex_count)]
    sections = [linalg.solve(projs[v], linalg.identity(projs[v].shape[0]), p) for v in range(len(projs))]
    dims = [pr.shape[0] for pr in projs]
    maps = []
    for a in f.algebra.quiver.arrows:
        u, v = a.source, a.target
        cand = matmul(matmul(projs[v], f.target.map_by_name(a.name), p), sections[u], p)
        if not np.array_equal(matmul(cand, projs[u], p), matmul(projs[v], f.target.map_by_name(a.name), p)):
            raise AssertionError("cokernel map is not well defined; morphism was not valid")
        maps.append(cand)
    c = Module(f.algebra, dims, maps)
    proj = Morphism(f.target, c, projs)
    return c, proj


def image(f: Morphism) -> tuple[Module, Morphism]:
    """The image subrepresentation of the target, with its inclusion."""
    p = f.algebra.p
    bases = [linalg.column_space_basis(f.maps[v], p) for v in range(f.algebra.vertex_count)]
    dims = [b.shape[1] for b in bases]
    maps = []
    for a in f.algebra.quiver.arrows:
        pushed = matmul(f.target.map_by_name(a.name), bases[a.source], p)
        sol = linalg.solve(bases[a.target], pushed, p)
        if sol is None:
            raise AssertionError("image is not arrow-stable; morphism was not valid")
        maps.append(sol)
    i = Module(f.algebra, dims, maps)
    incl = Morphism(i, f.target, bases)
    return i, incl


def direct_sum(algebra: Algebra, summands: list[Module]) -> tuple[Module, list[Morphism], list[Morphism]]:
    """Block-diagonal sum with canonical injections and projections."""
    nv = algebra.vertex_count
    dims = [sum(s.dims[v] for s in summands) for v in range(nv)]
    maps = []
    for idx, _a in enumerate(algebra.quiver.arrows):
        maps.append(linalg.block_diag([s.maps[idx] for s in summands]) if summands else None)
    total = Module(algebra, dims, maps)
    injections, projections = [], []
    offsets = [[0] * nv]
    for s in summands:
        offsets.append([offsets[-1][v] + s.dims[v] for v in range(nv)])
    for i, s in enumerate(summands):
        inj_maps, proj_maps = [], []
        for v in range(nv):
            inj = linalg.zeros(dims[v], s.dims[v])
            inj[offsets[i][v] : offsets[i][v] + s.dims[v], :] = linalg.identity(s.dims[v])
            inj_maps.append(inj)
            proj_maps.append(inj.T.copy())
        injections.append(Morphism(s, total, inj_maps))
        projections.append(Morphism(total, s, proj_maps))
    return total, injections, projections


def stack_cols(sum_source: Module, components: list[Morphism]) -> Morphism:
    """[f_1 | ... | f_k] : (M_1 + ... + M_k) -> N for a common target N."""
    target = components[0].target if components else None
    nv = sum_source.algebra.vertex_count
    if target is None:
        raise ValueError("need at least one component")
    maps = [
        linalg.hstack([f.maps[v] for f in components], target.dims[v]) for v in range(nv)
    ]
    return Morphism(sum_source, target, maps)


def stack_rows(sum_target: Module, components: list[Morphism]) -> Morphism:
    """(f_1; ...; f_k) : M -> (N_1 + ... + N_k) for a common source M."""
    source = components[0].source if components else None
    nv = sum_target.algebra.vertex_count
    if source is None:
        raise ValueError("need at least one component")
    maps = [
        linalg.vstack([f.maps[v] for f in components], source.dims[v]) for v in range(nv)
    ]
    return Morphism(source, sum_target, maps)


def is_injective(f: Morphism) -> bool:
    p = f.algebra.p
    return all(linalg.rank(f.maps[v], p) == f.source.dims[v] for v in range(len(f.maps)))


def is_surjective(f: Morphism) -> bool:
    p = f.algebra.p
    return all(linalg.rank(f.maps[v], p) == f.target.dims[v] for v in range(len(f.maps)))


@dataclass(frozen=True)
class Conflation:
    """A short exact sequence 0 -> K -> E -> C -> 0 given by (inclusion, deflation)."""

    i: Morphism
    d: Morphism

    def middle(self) -> Module:
        return self.i.target


def is_conflation(i: Morphism, d: Morphism) -> bool:
    if i.target.key() != d.source.key():
        return False
    if not is_injective(i) or not is_surjective(d):
        return False
    if not compose(d, i).is_zero:
        return False
    p = i.algebra.p
    for v in range(i.algebra.vertex_count):
        if linalg.rank(i.maps[v], p) + linalg.rank(d.maps[v], p) != i.target.dims[v]:
            return False
    return True


# ---------------------------------------------------------------------------
# subcategories given by generators, with add-closure semantics


@dataclass(frozen=True)
class Subcat:
    """add(generators): closed under sums, summands and isomorphism."""

    label: str
    generators: tuple[Module, ...]

    def key(self) -> tuple:
        return (self.label, tuple(g.key() for g in self.generators))


# ---------------------------------------------------------------------------
# endomorphism-driven decomposition and isomorphism testing


def _site_rng(budget: Budget, tag: int, *keys: bytes) -> np.random.Generator:
    crc = 0
    for k in keys:
        crc = zlib.crc32(k, crc)
    return np.random.default_rng([budget.seed, tag, crc])


def _coeff_candidates(basis_len: int, p: int, budget: Budget, rng_tag: int, key: bytes):
    """Deterministic stream of coefficient vectors: basis, sums, then exhaustive or sampled."""
    for i in range(basis_len):
        c = np.zeros(basis_len, dtype=np.int64)
        c[i] = 1
        yield c, False
    for i in range(basis_len):
        for j in range(i + 1, basis_len):
            c = np.zeros(basis_len, dtype=np.int64)
            c[i] = 1
            c[j] = 1
            yield c, False
    if p**basis_len <= budget.enum_cap:
        for tup in itertools.product(range(p), repeat=basis_len):
            if any(tup):
                yield np.array(tup, dtype=np.int64), True
    else:
        rng = _site_rng(budget, rng_tag, key)
        for _ in range(budget.samples):
            c = rng.integers(0, p, size=basis_len, dtype=np.int64)
            if c.any():
                yield c, False


def endo_power(f: Morphism, k: int) -> Morphism:
    acc = identity_morphism(f.source)
    for _ in range(k):
        acc = compose(f, acc)
    return acc


def _find_splitting_endo(m: Module, budget: Budget):
    """A Fitting split of M, or None if none was found.

    Returns ((K, incl_K), (I, incl_I), exhaustive) where exhaustive tells
    whether absence of a split is a proof of indecomposability (the whole
    endomorphism space was enumerated).
    """
    p = m.algebra.p
    endos = hom_basis(m, m)
    d = len(endos)
    exhaustive = p**d <= budget.enum_cap
    for coeffs, _ in _coeff_candidates(d, p, budget, 11, m.key()):
        phi = combine(endos, coeffs)
        ranks = [linalg.rank(phi.maps[v], p) for v in range(len(phi.maps))]
        if sum(ranks) == m.total_dim:
            continue  # invertible: no Fitting split from this one
        power = endo_power(phi, m.total_dim)
        r = sum(linalg.rank(power.maps[v], p) for v in range(len(power.maps)))
        if 0 < r < m.total_dim:
            k, ki = kernel(power)
            i, ii = image(power)
            return (k, ki), (i, ii), True
    return None, None, exhaustive


@dataclass
class Decomposition:
    """Indecomposable pieces of a module with explicit inclusions.

    pieces: list of (representative, inclusion rep -> module); the block
    morphism of all inclusions is an isomorphism from the direct sum of
    the representatives onto the module.
    exact: True when every indecomposability claim was certified by
    exhaustive search.
    """

    module: Module
    pieces: list[tuple[Module, Morphism]]
    exact: bool

    def parts(self) -> list[tuple[Module, int]]:
        order: list[Module] = []
        counts: dict[bytes, int] = {}
        for rep, _ in self.pieces:
            k = rep.key()
            if k not in counts:
                counts[k] = 0
                order.append(rep)
            counts[k] += 1
        return [(rep, counts[rep.key()]) for rep in order]

    def sum_iso(self) -> tuple[Module, Morphism]:
        """The direct sum of the pieces and the block isomorphism onto the module."""
        algebra = self.module.algebra
        total, _inj, _proj = direct_sum(algebra, [rep for rep, _ in self.pieces])
        if not self.pieces:
            return total, zero_morphism(total, self.module)
        return total, stack_cols(total, [incl for _, incl in self.pieces])


def _raw_pieces(m: Module, budget: Budget):
    """Recursive Fitting decomposition into (submodule, inclusion) pieces."""
    if m.total_dim == 0:
        return [], True
    split_k, split_i, exhaustive = _find_splitting_endo(m, budget)
    if split_k is None:
        return [(m, identity_morphism(m))], exhaustive
    (k, ki), (i, ii) = split_k, split_i
    left, lex = _raw_pieces(k, budget)
    right, rex = _raw_pieces(i, budget)
    out = [(sub, compose(ki, incl)) for sub, incl in left]
    out += [(sub, compose(ii, incl)) for sub, incl in right]
    return out, lex and rex


class IsoRegistry:
    """Canonical representatives of isomorphism classes seen in one session.

    Modules are bucketed by dimension vector plus the per-arrow rank
    profile; bucket collisions fall through to the full isomorphism test.
    """

    def __init__(self, budget: Budget):
        self.budget = budget
        self._buckets: dict[tuple, list[Module]] = {}
        self._by_key: dict[bytes, Module] = {}
        self._decomp_cache: dict[bytes, object] = {}

    @staticmethod
    def _bucket(m: Module) -> tuple:
        p = m.algebra.p
        return (m.dims, tuple(linalg.rank(mat, p) for mat in m.maps))

    def canonical(self, m: Module):
        """(representative, iso representative -> m), or (m-as-new-rep, id)."""
        if m.key() in self._by_key:
            return self._by_key[m.key()], identity_morphism(m)
        bucket = self._buckets.setdefault(self._bucket(m), [])
        saw_undecided = False
        for rep in bucket:
            w = iso_witness(rep, m, self.budget)
            if w is UNDECIDED:
                saw_undecided = True
                continue
            if w is not None:
                return rep, w
        if saw_undecided:
            return UNDECIDED, UNDECIDED
        bucket.append(m)
        self._by_key[m.key()] = m
        return m, identity_morphism(m)

    def register(self, m: Module) -> None:
        self.canonical(m)

    def decompose(self, m: Module):
        ck = m.key()
        if ck not in self._decomp_cache:
            self._decomp_cache[ck] = _decompose_impl(m, self.budget, self)
        return self._decomp_cache[ck]


def _decompose_impl(m: Module, budget: Budget, registry: IsoRegistry):
    raw, exact = _raw_pieces(m, budget)
    pieces = []
    for sub, incl in raw:
        rep, iso = registry.canonical(sub)
        if rep is UNDECIDED:
            return UNDECIDED
        pieces.append((rep, compose(incl, iso)))
    return Decomposition(m, pieces, exact)


def decompose(m: Module, budget: Budget, registry: IsoRegistry | None = None):
    """Krull-Schmidt decomposition; UNDECIDED when the split search is inconclusive."""
    registry = registry if registry is not None else IsoRegistry(budget)
    return registry.decompose(m)


def iso_witness(m: Module, n: Module, budget: Budget):
    """An invertible morphism m -> n, None when provably not isomorphic, or UNDECIDED."""
    if m.algebra.key() != n.algebra.key():
        return None
    if m.dims != n.dims:
        return None
    if m.key() == n.key() and m.total_dim == 0:
        return identity_morphism(m)
    p = m.algebra.p
    for idx in range(len(m.maps)):
        if linalg.rank(m.maps[idx], p) != linalg.rank(n.maps[idx], p):
            return None
    if m.total_dim == 0:
        return identity_morphism(m)
    basis = hom_basis(m, n)
    if not basis:
        return None
    d = len(basis)
    exhaustive = p**d <= budget.enum_cap
    for coeffs, _ in _coeff_candidates(d, p, budget, 13, m.key() + n.key()):
        f = combine(basis, coeffs)
        if all(linalg.rank(f.maps[v], p) == m.dims[v] for v in range(len(f.maps))):
            return f
    return None if exhaustive else UNDECIDED


def is_isomorphic(m: Module, n: Module, budget: Budget):
    w = iso_witness(m, n, budget)
    if w is UNDECIDED:
        return UNDECIDED
    return w is not None


def in_add(m: Module, subcat: Subcat, budget: Budget, registry: IsoRegistry | None = None):
    """Is every indecomposable summand of m isomorphic to a generator summand?

    True from heuristic evidence is safe (each matched piece is exactly
    certified isomorphic); a definite False additionally requires exact
    decompositions on both sides, otherwise the verdict is UNDECIDED.
    """
    if m.total_dim == 0:
        return True
    registry = registry if registry is not None else IsoRegistry(budget)
    gen_reps: set[bytes] = set()
    gens_exact = True
    for g in subcat.generators:
        dg = registry.decompose(g)
        if dg is UNDECIDED:
            return UNDECIDED
        gens_exact = gens_exact and dg.exact
        for rep, _ in dg.pieces:
            gen_reps.add(rep.key())
    dm = registry.decompose(m)
    if dm is UNDECIDED:
        return UNDECIDED
    unmatched = [rep for rep, _ in dm.pieces if rep.key() not in gen_reps]
    if not unmatched:
        return True
    if dm.exact and gens_exact:
        return False
    return UNDECIDED


def enumerate_indecomposables(
    algebra: Algebra, dim_cap, budget: Budget, registry: IsoRegistry | None = None
) -> list[Module]:
    """One representative per isomorphism class of indecomposables under the cap.

    Brute force over all matrix assignments for every dimension vector
    bounded by dim_cap componentwise; raises BudgetExceeded when a single
    dimension vector would need more than enum_cap assignments.
    """
    registry = registry if registry is not None else IsoRegistry(budget)
    cap = tuple(int(c) for c in dim_cap)
    if len(cap) != algebra.vertex_count:
        raise ValueError("dim_cap length does not match the vertex count")
    p = algebra.p
    found: list[Module] = []
    found_keys: set[bytes] = set()
    for dims in itertools.product(*(range(c + 1) for c in cap)):
        if sum(dims) == 0:
            continue
        entry_count = sum(
            dims[a.target] * dims[a.source] for a in algebra.quiver.arrows
        )
        if p**entry_count > budget.enum_cap:
            raise BudgetExceeded(
                f"dimension vector {dims} needs {p}^{entry_count} assignments", dims
            )
        shapes = [(dims[a.target], dims[a.source]) for a in algebra.quiver.arrows]
        sizes = [r * c for r, c in shapes]
        for flat in itertools.product(range(p), repeat=entry_count):
            mats, pos = [], 0
            for (r, c), size in zip(shapes, sizes):
                mats.append(np.array(flat[pos : pos + size], dtype=np.int64).reshape(r, c))
                pos += size
            try:
                cand = Module(algebra, dims, mats)
            except ValueError:
                continue
            if validate_module(cand):
                continue
            dec = registry.decompose(cand)
            if dec is UNDECIDED:
                continue
            if not (dec.exact and len(dec.pieces) == 1):
                continue
            rep = dec.pieces[0][0]
            if rep.key() not in found_keys:
                found_keys.add(rep.key())
                found.append(rep)
    return found
