"""Cotorsion-pair axioms over a finite universe of indecomposables.

Orthogonality and heredity are finite Ext computations against the
universe; completeness is a bounded witness search; the core is cut out
of the universe and its contravariant finiteness is certified by explicit
approximations with factorization tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .budgets import UNDECIDED, Budget
from .homology import ext_dim
from .modules import (
    Conflation,
    IsoRegistry,
    Module,
    Morphism,
    Subcat,
    cokernel,
    combine,
    compose,
    direct_sum,
    flatten,
    hom_basis,
    identity_morphism,
    in_add,
    is_injective,
    is_surjective,
    kernel,
    stack_cols,
    stack_rows,
    zero_module,
    zero_morphism,
)
from . import linalg

import numpy as np


@dataclass(frozen=True)
class Universe:
    """A finite list of pairwise non-isomorphic indecomposables standing in for the category."""

    members: tuple[Module, ...]
    provenance: str = "explicit"

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("universe must be nonempty")

    def index_of(self, key: bytes) -> int:
        for i, m in enumerate(self.members):
            if m.key() == key:
                return i
        raise KeyError("module not in universe")


def make_universe(members: list[Module], budget: Budget, provenance: str = "explicit") -> Universe:
    """Validate pairwise non-isomorphism before wrapping the members."""
    from .modules import is_isomorphic

    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            same = is_isomorphic(members[i], members[j], budget)
            if same is True:
                raise ValueError(
                    f"universe members {i} and {j} are isomorphic; deduplicate first"
                )
    return Universe(tuple(members), provenance)


# ---------------------------------------------------------------------------
# results


@dataclass
class OrthogonalityResult:
    left_ok: bool
    right_ok: bool
    counterexamples: list[dict]
    ext1_pairs_zero: bool  # Ext^1(X_g, Y_g) = 0 for all generator pairs


@dataclass
class CompletenessResult:
    verdict: object  # True / False / UNDECIDED
    witnesses: dict  # member key -> {"approx": Conflation|None, "coapprox": Conflation|None}
    counterexamples: list[dict]
    undecided: list[str]


@dataclass
class HeredityResult:
    verdict: bool
    counterexample: dict | None
    precondition_verified: bool


@dataclass
class ContravariantFinitenessResult:
    verdict: bool
    approximations: dict  # member key -> Morphism
    failures: list[dict]


@dataclass
class CotorsionReport:
    left: Subcat
    right: Subcat
    universe: Universe
    orthogonality: OrthogonalityResult
    completeness: CompletenessResult
    heredity: HeredityResult
    core: Subcat
    core_finiteness: ContravariantFinitenessResult
    budget: Budget

    @property
    def is_cotorsion_pair(self) -> bool:
        return self.orthogonality.left_ok and self.orthogonality.right_ok

    @property
    def certifies_model_structure(self) -> bool:
        """All hypotheses needed for the induced classes to be a model structure."""
        return (
            self.is_cotorsion_pair
            and self.completeness.verdict is True
            and self.heredity.verdict
            and self.core_finiteness.verdict
        )


# ---------------------------------------------------------------------------
# orthogonality and heredity


def check_orthogonality(
    left: Subcat, right: Subcat, universe: Universe, budget: Budget, registry: IsoRegistry | None = None
) -> OrthogonalityResult:
    """Is (left, right) Ext^1-orthogonal relative to the universe?

    left flag: a member is Ext^1-orthogonal to every right generator iff it
    lies in add(left); right flag dually.
    """
    registry = registry if registry is not None else IsoRegistry(budget)
    counterexamples: list[dict] = []
    left_ok = right_ok = True
    for m in universe.members:
        perp = True
        bad = None
        for g in right.generators:
            d = ext_dim(m, g, 1).dim
            if d:
                perp = False
                bad = (g, d)
                break
        member = in_add(m, left, budget, registry)
        if member is UNDECIDED:
            member = False  # conservative: an undecidable membership breaks the iff
        if perp != member:
            left_ok = False
            counterexamples.append(
                {
                    "side": "left",
                    "module": m,
                    "ext1_orthogonal": perp,
                    "in_add": member,
                    "witness_pair": bad,
                }
            )
    for m in universe.members:
        perp = True
        bad = None
        for g in left.generators:
            d = ext_dim(g, m, 1).dim
            if d:
                perp = False
                bad = (g, d)
                break
        member = in_add(m, right, budget, registry)
        if member is UNDECIDED:
            member = False
        if perp != member:
            right_ok = False
            counterexamples.append(
                {
                    "side": "right",
                    "module": m,
                    "ext1_orthogonal": perp,
                    "in_add": member,
                    "witness_pair": bad,
                }
            )
    ext1_zero = all(
        ext_dim(xg, yg, 1).dim == 0 for xg in left.generators for yg in right.generators
    )
    return OrthogonalityResult(left_ok, right_ok, counterexamples, ext1_zero)


def check_hereditary(
    left: Subcat,
    right: Subcat,
    universe: Universe,
    completeness_verified: bool = False,
) -> HeredityResult:
    """Ext^2 vanishing on generator pairs; the finite criterion for heredity."""
    for xg in left.generators:
        for yg in right.generators:
            d = ext_dim(xg, yg, 2).dim
            if d:
                return HeredityResult(
                    False,
                    {"left_generator": xg, "right_generator": yg, "ext2_dim": d},
                    completeness_verified,
                )
    return HeredityResult(True, None, completeness_verified)


# ---------------------------------------------------------------------------
# bounded completeness search


def _multiplicity_candidates(generators: tuple[Module, ...], budget: Budget):
    """Direct sums of generators, ordered by total dimension then multiplicity vector."""
    vectors = [
        v
        for v in itertools.product(range(budget.m_max + 1), repeat=len(generators))
        if any(v)
    ]
    vectors.sort(key=lambda v: (sum(c * g.total_dim for c, g in zip(v, generators)), v))
    return vectors


def _sum_of(generators: tuple[Module, ...], mults, algebra) -> Module:
    parts: list[Module] = []
    for g, c in zip(generators, mults):
        parts.extend([g] * c)
    return direct_sum(algebra, parts)[0]


def _coeff_stream(h: int, p: int, budget: Budget, cap: int):
    if p**h <= cap:
        for tup in itertools.product(range(p), repeat=h):
            if any(tup):
                yield np.array(tup, dtype=np.int64)
    else:
        rng = np.random.default_rng([budget.seed, 17, h])
        for _ in range(budget.samples):
            c = rng.integers(0, p, size=h, dtype=np.int64)
            if c.any():
                yield c


def right_add_approximation(m: Module, cat: Subcat) -> Morphism:
    """The canonical right add(cat)-approximation: one copy of each generator per Hom-basis element.

    Every morphism from add(cat) into m factors through it.
    """
    algebra = m.algebra
    parts: list[Module] = []
    components: list[Morphism] = []
    for g in cat.generators:
        for h in hom_basis(g, m):
            parts.append(g)
            components.append(h)
    if not parts:
        return zero_morphism(zero_module(algebra), m)
    total, _inj, _proj = direct_sum(algebra, parts)
    return stack_cols(total, components)


def left_add_approximation(m: Module, cat: Subcat) -> Morphism:
    """The canonical left add(cat)-approximation m -> (sum of generators)."""
    algebra = m.algebra
    parts: list[Module] = []
    components: list[Morphism] = []
    for g in cat.generators:
        for h in hom_basis(m, g):
            parts.append(g)
            components.append(h)
    if not parts:
        return zero_morphism(m, zero_module(algebra))
    total, _inj, _proj = direct_sum(algebra, parts)
    return stack_rows(total, components)


def find_approx_sequence(
    m: Module, left: Subcat, right: Subcat, budget: Budget, registry: IsoRegistry
):
    """A conflation 0 -> Y -> X -> m -> 0 with X in add(left), Y in add(right).

    Returns a Conflation, None when provably impossible (m admits no
    surjection from add(left) at all), or UNDECIDED.
    """
    algebra = m.algebra
    if m.total_dim == 0 or in_add(m, left, budget, registry) is True:
        d = identity_morphism(m)
        return Conflation(zero_morphism(zero_module(algebra), m), d)
    if not is_surjective(right_add_approximation(m, left)):
        return None
    p = algebra.p
    examined = 0
    for mults in _multiplicity_candidates(left.generators, budget):
        if examined >= budget.completeness_cap:
            return UNDECIDED
        examined += 1
        x = _sum_of(left.generators, mults, algebra)
        basis = hom_basis(x, m)
        if not basis:
            continue
        for coeffs in _coeff_stream(len(basis), p, budget, min(budget.enum_cap, 4096)):
            f = combine(basis, coeffs)
            if not is_surjective(f):
                continue
            k, ki = kernel(f)
            if in_add(k, right, budget, registry) is True:
                return Conflation(ki, f)
    return UNDECIDED  # witnesses may exist beyond the bounded search


def find_coapprox_sequence(
    m: Module, left: Subcat, right: Subcat, budget: Budget, registry: IsoRegistry
):
    """A conflation 0 -> m -> Y' -> X' -> 0 with Y' in add(right), X' in add(left)."""
    algebra = m.algebra
    if m.total_dim == 0 or in_add(m, right, budget, registry) is True:
        i = identity_morphism(m)
        return Conflation(i, zero_morphism(m, zero_module(algebra)))
    if not is_injective(left_add_approximation(m, right)):
        return None
    p = algebra.p
    examined = 0
    for mults in _multiplicity_candidates(right.generators, budget):
        if examined >= budget.completeness_cap:
            return UNDECIDED
        examined += 1
        y = _sum_of(right.generators, mults, algebra)
        basis = hom_basis(m, y)
        if not basis:
            continue
        for coeffs in _coeff_stream(len(basis), p, budget, min(budget.enum_cap, 4096)):
            g = combine(basis, coeffs)
            if not is_injective(g):
                continue
            c, proj = cokernel(g)
            mem = in_add(c, left, budget, registry)
            if mem is True:
                return Conflation(g, proj)
    return UNDECIDED


def check_completeness(
    left: Subcat, right: Subcat, universe: Universe, budget: Budget, registry: IsoRegistry | None = None
) -> CompletenessResult:
    """Approximation and co-approximation witnesses for every universe member."""
    registry = registry if registry is not None else IsoRegistry(budget)
    witnesses: dict = {}
    counterexamples: list[dict] = []
    undecided: list[str] = []
    for m in universe.members:
        approx = find_approx_sequence(m, left, right, budget, registry)
        coapprox = find_coapprox_sequence(m, left, right, budget, registry)
        witnesses[m.key()] = {"module": m, "approx": approx, "coapprox": coapprox}
        if approx is None:
            counterexamples.append({"module": m, "missing": "approximation"})
        elif approx is UNDECIDED:
            undecided.append(f"approximation of {m!r}")
        if coapprox is None:
            counterexamples.append({"module": m, "missing": "co-approximation"})
        elif coapprox is UNDECIDED:
            undecided.append(f"co-approximation of {m!r}")
    if counterexamples:
        verdict = False
    elif undecided:
        verdict = UNDECIDED
    else:
        verdict = True
    return CompletenessResult(verdict, witnesses, counterexamples, undecided)


# ---------------------------------------------------------------------------
# core and contravariant finiteness


def compute_core(
    left: Subcat, right: Subcat, universe: Universe, budget: Budget, registry: IsoRegistry | None = None
) -> Subcat:
    """Generators of add(left) ∩ add(right), drawn from the universe."""
    registry = registry if registry is not None else IsoRegistry(budget)
    gens = [
        m
        for m in universe.members
        if in_add(m, left, budget, registry) is True and in_add(m, right, budget, registry) is True
    ]
    return Subcat("core", tuple(gens))


def right_core_approximation(m: Module, core: Subcat) -> Morphism:
    """The canonical right core-approximation of m (zero map when Hom vanishes)."""
    return right_add_approximation(m, core)


def _factors_through(h: Morphism, tau: Morphism) -> bool:
    """Does h: W -> M factor through tau: T -> M?"""
    p = h.algebra.p
    basis = hom_basis(h.source, tau.source)
    if not basis:
        return h.is_zero
    cols = [flatten(compose(tau, b)) for b in basis]
    system = np.column_stack(cols)
    return linalg.solve(system, flatten(h).reshape(-1, 1), p) is not None


def check_core_finiteness(
    core: Subcat, universe: Universe, budget: Budget
) -> ContravariantFinitenessResult:
    """Certify contravariant finiteness of add(core) against the universe.

    For every member, every morphism from a core generator must factor
    through the canonical approximation; factorizations are found by an
    independent linear solve, not read off the construction.
    """
    approximations: dict = {}
    failures: list[dict] = []
    for m in universe.members:
        tau = right_core_approximation(m, core)
        approximations[m.key()] = tau
        for g in core.generators:
            for h in hom_basis(g, m):
                if not _factors_through(h, tau):
                    failures.append({"module": m, "generator": g, "morphism": h})
    return ContravariantFinitenessResult(not failures, approximations, failures)


def analyze(
    left: Subcat, right: Subcat, universe: Universe, budget: Budget, registry: IsoRegistry | None = None
) -> CotorsionReport:
    """Full cotorsion report: orthogonality, completeness, heredity, core, finiteness."""
    registry = registry if registry is not None else IsoRegistry(budget)
    orth = check_orthogonality(left, right, universe, budget, registry)
    comp = check_completeness(left, right, universe, budget, registry)
    her = check_hereditary(left, right, universe, completeness_verified=comp.verdict is True)
    core = compute_core(left, right, universe, budget, registry)
    fin = check_core_finiteness(core, universe, budget)
    return CotorsionReport(left, right, universe, orth, comp, her, core, fin, budget)
