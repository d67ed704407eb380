"""Quivers, monomial relations and the finite path basis of kQ/I.

Paths are stored in application order: ``(a, b)`` means "apply a first,
then b", i.e. the composite written multiplicatively is ``b*a``.  A
monomial ideal is admissible within the configured bound when no
irreducible path reaches that length; the basis is then finite and
consists of exactly the paths containing no relation as a consecutive
subpath.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import FieldSpec


class MalformedRelation(ValueError):
    """A relation is too short or not composable."""


class NotAdmissible(ValueError):
    """Irreducible paths of maximal length exist: the ideal is not visibly admissible."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise ValueError("a quiver needs at least one vertex")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be distinct")
        for a in self.arrows:
            if not (0 <= a.source < self.vertex_count and 0 <= a.target < self.vertex_count):
                raise ValueError(f"arrow {a.name} has endpoints outside the vertex range")

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    @property
    def arrow_index(self) -> dict[str, int]:
        return {a.name: i for i, a in enumerate(self.arrows)}


@dataclass(frozen=True)
class Path:
    """A path of the quiver, in application order; length 0 paths sit at a vertex."""

    source: int
    target: int
    arrows: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.arrows)


def parse_relation(quiver: Quiver, names_in_composition_order: list[str]) -> tuple[str, ...]:
    """Turn a relation written multiplicatively (rightmost acts first) into application order."""
    if len(names_in_composition_order) < 2:
        raise MalformedRelation(f"relation {names_in_composition_order} has length < 2")
    app_order = list(reversed(names_in_composition_order))
    try:
        arrows = [quiver.arrow(n) for n in app_order]
    except KeyError as exc:
        raise MalformedRelation(f"relation uses unknown arrow {exc.args[0]!r}") from exc
    for a, b in zip(arrows, arrows[1:]):
        if a.target != b.source:
            raise MalformedRelation(
                f"relation {names_in_composition_order} is not composable: "
                f"{a.name} ends at {a.target} but {b.name} starts at {b.source}"
            )
    return tuple(app_order)


def _has_relation_suffix(arrows: tuple[str, ...], relations: tuple[tuple[str, ...], ...]) -> bool:
    for rel in relations:
        if len(rel) <= len(arrows) and arrows[-len(rel) :] == rel:
            return True
    return False


@dataclass(frozen=True)
class Algebra:
    """A monomial quiver algebra with its computed path basis."""

    quiver: Quiver
    field: FieldSpec
    relations: tuple[tuple[str, ...], ...]  # application order
    path_length_bound: int
    basis: tuple[Path, ...]
    _caches: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def p(self) -> int:
        return self.field.characteristic

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def vertex_count(self) -> int:
        return self.quiver.vertex_count

    def basis_indices(self, source: int, target: int) -> list[int]:
        """Indices of basis paths from `source` to `target`, in basis order."""
        key = ("span", source, target)
        if key not in self._caches:
            self._caches[key] = [
                i for i, q in enumerate(self.basis) if q.source == source and q.target == target
            ]
        return self._caches[key]

    def compose_with_arrow(self, path: Path, arrow: Arrow) -> Path | None:
        """The path `arrow after path`, or None when it hits a relation."""
        if path.target != arrow.source:
            raise ValueError(f"{arrow.name} does not start where the path ends")
        arrows = path.arrows + (arrow.name,)
        if _has_relation_suffix(arrows, self.relations):
            return None
        return Path(path.source, arrow.target, arrows)

    def cache(self, name: str) -> dict:
        """A named mutable cache; confined to one thread or guarded by the caller."""
        return self._caches.setdefault(name, {})

    def key(self) -> tuple:
        return (
            self.p,
            self.quiver.vertex_count,
            tuple((a.name, a.source, a.target) for a in self.quiver.arrows),
            self.relations,
            self.path_length_bound,
        )


def build_algebra(
    quiver: Quiver,
    relations: list[list[str]],
    fieldspec: FieldSpec,
    path_length_bound: int = 16,
) -> Algebra:
    """Compute the path basis of kQ/I for a monomial ideal I.

    Raises NotAdmissible when an irreducible path of length equal to
    `path_length_bound` exists, and MalformedRelation for non-composable
    relations.
    """
    if path_length_bound < 1:
        raise ValueError("path_length_bound must be at least 1")
    rels = tuple(parse_relation(quiver, r) for r in relations)
    out_arrows: dict[int, list[Arrow]] = {v: [] for v in range(quiver.vertex_count)}
    for a in quiver.arrows:
        out_arrows[a.source].append(a)

    basis: list[Path] = [Path(v, v, ()) for v in range(quiver.vertex_count)]
    frontier = list(basis)
    length = 0
    while frontier:
        length += 1
        nxt: list[Path] = []
        for q in frontier:
            for a in out_arrows[q.target]:
                arrows = q.arrows + (a.name,)
                if _has_relation_suffix(arrows, rels):
                    continue
                if length >= path_length_bound:
                    raise NotAdmissible(
                        f"irreducible path of length {path_length_bound} found "
                        f"(starting at vertex {q.source}); raise the bound or fix the relations"
                    )
                nxt.append(Path(q.source, a.target, arrows))
        basis.extend(nxt)
        frontier = nxt
    return Algebra(quiver, fieldspec, rels, path_length_bound, tuple(basis))
