"""Property-based verification of the model-structure axioms over a pool.

The pool is deterministic for fixed (universe, caps, seed).  Every Fail
carries a certificate that is re-checked from scratch in a fresh context
(no memoized classifications), so a reported counterexample can always be
replayed.  UNDECIDED verdicts are never coerced into pass or fail.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .budgets import UNDECIDED, Budget
from .homology import find_lift
from .model import (
    ModelContext,
    build_context,
    classify_flag,
    factorize_cofib_trivfib,
    factorize_trivcofib_fib,
    MissingWitness,
)
from .modules import (
    IsoRegistry,
    Module,
    Morphism,
    add_morphisms,
    combine,
    compose,
    direct_sum,
    hom_basis,
    identity_morphism,
    in_add,
    zero_module,
    zero_morphism,
)


@dataclass
class MorphismPool:
    """Objects plus a deterministic spread of morphisms between them."""

    objects: list[Module]
    by_pair: dict[tuple[int, int], list[Morphism]]
    seed: int

    def morphisms(self, i: int, j: int) -> list[Morphism]:
        return self.by_pair.get((i, j), [])

    def all_morphisms(self) -> list[Morphism]:
        out = []
        for i in range(len(self.objects)):
            for j in range(len(self.objects)):
                out.extend(self.by_pair.get((i, j), []))
        return out

    @property
    def size(self) -> int:
        return sum(len(v) for v in self.by_pair.values())


def build_pool(ctx: ModelContext, budget: Budget | None = None) -> MorphismPool:
    """Universe members, their bounded direct sums, the zero module, and morphisms.

    Morphisms per ordered object pair: the zero morphism, the identity
    (on equal objects), the Hom basis, pairwise sums of basis elements and
    n_random seeded combinations, deduplicated.
    """
    budget = budget or ctx.budget
    algebra = ctx.algebra
    members = list(ctx.universe.members)
    objects: list[Module] = [zero_module(algebra)] + members[:]
    for size in range(2, budget.sum_cap + 1):
        for combo in itertools.combinations_with_replacement(range(len(members)), size):
            objects.append(direct_sum(algebra, [members[k] for k in combo])[0])
    seen: set[bytes] = set()
    uniq: list[Module] = []
    for obj in objects:
        if obj.key() not in seen:
            seen.add(obj.key())
            uniq.append(obj)
    uniq.sort(key=lambda m: (m.total_dim, m.dims, m.key()))
    objects = uniq
    by_pair: dict[tuple[int, int], list[Morphism]] = {}
    p = algebra.p
    for i, src in enumerate(objects):
        for j, tgt in enumerate(objects):
            cand: list[Morphism] = [zero_morphism(src, tgt)]
            if src.key() == tgt.key():
                cand.append(identity_morphism(src))
            basis = hom_basis(src, tgt)
            cand.extend(basis)
            for a in range(len(basis)):
                for bidx in range(a + 1, len(basis)):
                    cand.append(add_morphisms(basis[a], basis[bidx]))
            if basis and budget.n_random:
                rng = np.random.default_rng([budget.seed, 29, i, j])
                for _ in range(budget.n_random):
                    coeffs = rng.integers(0, p, size=len(basis), dtype=np.int64)
                    if coeffs.any():
                        cand.append(combine(basis, coeffs))
            dedup: list[Morphism] = []
            keys: set[bytes] = set()
            for f in cand:
                if f.key() not in keys:
                    keys.add(f.key())
                    dedup.append(f)
            by_pair[(i, j)] = dedup
    return MorphismPool(objects, by_pair, budget.seed)


# ---------------------------------------------------------------------------
# statuses


@dataclass
class AxiomStatus:
    axiom: str
    verdict: str  # "pass" | "fail" | "undecided"
    checked: int = 0
    failure: dict | None = None
    undecided_count: int = 0
    undecided_sample: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)


def _fresh_context(ctx: ModelContext) -> ModelContext:
    """A context with empty memo tables for from-scratch re-verification."""
    registry = IsoRegistry(ctx.budget)
    for m in ctx.universe.members:
        registry.register(m)
    return ModelContext(
        ctx.cofibrant, ctx.trivial, ctx.core, ctx.universe, ctx.report, ctx.budget, registry
    )


def _note_undecided(status: AxiomStatus, item) -> None:
    status.undecided_count += 1
    if len(status.undecided_sample) < 20:
        status.undecided_sample.append(item)


def _finalize(status: AxiomStatus) -> AxiomStatus:
    if status.failure is not None:
        status.verdict = "fail"
    elif status.undecided_count:
        status.verdict = "undecided"
    else:
        status.verdict = "pass"
    return status


# ---------------------------------------------------------------------------
# two out of three


def verify_two_out_of_three(pool: MorphismPool, ctx: ModelContext) -> AxiomStatus:
    status = AxiomStatus("two_out_of_three", "pass")
    triples = 0
    for i in range(len(pool.objects)):
        for j in range(len(pool.objects)):
            fs = pool.morphisms(i, j)
            if not fs:
                continue
            for k in range(len(pool.objects)):
                gs = pool.morphisms(j, k)
                if not gs:
                    continue
                for f in fs:
                    wf = classify_flag(f, ctx, "weak_equivalence").value
                    for g in gs:
                        if triples >= ctx.budget.triple_cap:
                            status.notes["truncated_at"] = triples
                            return _finalize(status)
                        triples += 1
                        h = compose(g, f)
                        wg = classify_flag(g, ctx, "weak_equivalence").value
                        wh = classify_flag(h, ctx, "weak_equivalence").value
                        if UNDECIDED in (wf, wg, wh):
                            _note_undecided(status, {"f": f, "g": g})
                            continue
                        status.checked += 1
                        bad = None
                        if wf and wg and not wh:
                            bad = "composite"
                        elif wf and wh and not wg:
                            bad = "second"
                        elif wg and wh and not wf:
                            bad = "first"
                        if bad:
                            status.failure = _two_of_three_certificate(f, g, h, bad, ctx)
                            return _finalize(status)
    status.notes["triples_seen"] = triples
    return _finalize(status)


def _two_of_three_certificate(f, g, h, bad, ctx) -> dict:
    cert = {
        "f": f,
        "g": g,
        "gf": h,
        "failing_morphism": bad,
        "middle_object": f.target,
        "weq_f": classify_flag(f, ctx, "weak_equivalence"),
        "weq_g": classify_flag(g, ctx, "weak_equivalence"),
        "weq_gf": classify_flag(h, ctx, "weak_equivalence"),
    }
    cert["reverified"] = reverify_two_out_of_three(cert, ctx)
    return cert


def reverify_two_out_of_three(cert: dict, ctx: ModelContext) -> bool:
    """Recompute the three verdicts in a fresh context and re-check the violation."""
    fresh = _fresh_context(ctx)
    wf = classify_flag(cert["f"], fresh, "weak_equivalence").value
    wg = classify_flag(cert["g"], fresh, "weak_equivalence").value
    wh = classify_flag(cert["gf"], fresh, "weak_equivalence").value
    if UNDECIDED in (wf, wg, wh):
        return False
    return (wf and wg and not wh) or (wf and wh and not wg) or (wg and wh and not wf)


# ---------------------------------------------------------------------------
# retracts


def _section_retraction_pairs(pool: MorphismPool, small: int, big: int) -> list[tuple[Morphism, Morphism]]:
    pairs = []
    for phi in pool.morphisms(small, big):
        for psi in pool.morphisms(big, small):
            if compose(psi, phi).key() == identity_morphism(pool.objects[small]).key():
                pairs.append((phi, psi))
    return pairs


def verify_retract(pool: MorphismPool, ctx: ModelContext) -> AxiomStatus:
    """Closure of the three classes under retracts, over pool retract diagrams."""
    status = AxiomStatus("retract", "pass")
    n = len(pool.objects)
    sr: dict[tuple[int, int], list] = {}
    for small in range(n):
        for big in range(n):
            pairs = _section_retraction_pairs(pool, small, big)
            if pairs:
                sr[(small, big)] = pairs
    diagrams = 0
    for (a1, a0), sr1 in sr.items():
        for (b1, b0), sr2 in sr.items():
            fs = pool.morphisms(a0, b0)
            if not fs:
                continue
            for f in fs:
                for phi1, psi1 in sr1:
                    for phi2, psi2 in sr2:
                        if diagrams >= ctx.budget.retract_cap:
                            status.notes["truncated_at"] = diagrams
                            return _finalize(status)
                        diagrams += 1
                        g = compose(psi2, compose(f, phi1))
                        if compose(phi2, g).key() != compose(f, phi1).key():
                            continue
                        if compose(g, psi1).key() != compose(psi2, f).key():
                            continue
                        for cls in ("cofibration", "fibration", "weak_equivalence"):
                            vf = classify_flag(f, ctx, cls).value
                            if vf is UNDECIDED:
                                _note_undecided(status, {"class": cls, "f": f})
                                continue
                            if vf is not True:
                                continue
                            vg = classify_flag(g, ctx, cls).value
                            if vg is UNDECIDED:
                                _note_undecided(status, {"class": cls, "g": g})
                            elif vg is False:
                                status.failure = {
                                    "class": cls,
                                    "f": f,
                                    "g": g,
                                    "phi1": phi1,
                                    "psi1": psi1,
                                    "phi2": phi2,
                                    "psi2": psi2,
                                    "reverified": _reverify_retract(f, g, cls, ctx),
                                }
                                return _finalize(status)
                        status.checked += 1
    status.notes["diagrams_seen"] = diagrams
    return _finalize(status)


def _reverify_retract(f, g, cls, ctx) -> bool:
    fresh = _fresh_context(ctx)
    return (
        classify_flag(f, fresh, cls).value is True
        and classify_flag(g, fresh, cls).value is False
    )


# ---------------------------------------------------------------------------
# lifting


def verify_lifting(pool: MorphismPool, ctx: ModelContext) -> AxiomStatus:
    """Every commuting (cofibration, trivial fibration) or (trivial
    cofibration, fibration) square over the pool must admit a diagonal."""
    status = AxiomStatus("lifting", "pass")
    n = len(pool.objects)
    lefts = []
    for a in range(n):
        for b in range(n):
            for i_m in pool.morphisms(a, b):
                cof = classify_flag(i_m, ctx, "cofibration").value
                tcof = classify_flag(i_m, ctx, "trivial_cofibration").value
                if cof is True or tcof is True:
                    lefts.append((a, b, i_m, cof is True, tcof is True))
    rights = []
    for c in range(n):
        for d in range(n):
            for p_m in pool.morphisms(c, d):
                fib = classify_flag(p_m, ctx, "fibration").value
                tfib = classify_flag(p_m, ctx, "trivial_fibration").value
                if fib is True or tfib is True:
                    rights.append((c, d, p_m, fib is True, tfib is True))
    squares = 0
    skipped_noncommuting = 0
    for a, b, i_m, is_cof, is_tcof in lefts:
        for c, d, p_m, is_fib, is_tfib in rights:
            if not ((is_cof and is_tfib) or (is_tcof and is_fib)):
                continue
            for top in pool.morphisms(a, c):
                pt = compose(p_m, top)
                for bottom in pool.morphisms(b, d):
                    if squares >= ctx.budget.square_cap:
                        status.notes["truncated_at"] = squares
                        return _finalize(status)
                    if compose(bottom, i_m).key() != pt.key():
                        skipped_noncommuting += 1
                        continue
                    squares += 1
                    diag = find_lift(i_m, p_m, top, bottom)
                    if diag is None:
                        status.failure = {
                            "i": i_m,
                            "p": p_m,
                            "top": top,
                            "bottom": bottom,
                            "reverified": _reverify_lifting(i_m, p_m, top, bottom, ctx),
                        }
                        return _finalize(status)
                    status.checked += 1
    status.notes["squares_seen"] = squares
    status.notes["skipped_noncommuting"] = skipped_noncommuting
    return _finalize(status)


def _reverify_lifting(i_m, p_m, top, bottom, ctx) -> bool:
    fresh = _fresh_context(ctx)
    left_ok = (
        classify_flag(i_m, fresh, "cofibration").value is True
        or classify_flag(i_m, fresh, "trivial_cofibration").value is True
    )
    right_ok = (
        classify_flag(p_m, fresh, "fibration").value is True
        or classify_flag(p_m, fresh, "trivial_fibration").value is True
    )
    return left_ok and right_ok and find_lift(i_m, p_m, top, bottom) is None


# ---------------------------------------------------------------------------
# factorization


def verify_factorization(pool: MorphismPool, ctx: ModelContext) -> AxiomStatus:
    """Both constructions run on every pool morphism and their certificates re-verify."""
    status = AxiomStatus("factorization", "pass")
    for f in pool.all_morphisms():
        fact1 = factorize_trivcofib_fib(f, ctx)
        c_i = classify_flag(fact1.i, ctx, "trivial_cofibration").value
        c_p = classify_flag(fact1.p, ctx, "fibration").value
        try:
            fact2 = factorize_cofib_trivfib(f, ctx)
            c_j = classify_flag(fact2.i, ctx, "cofibration").value
            c_q = classify_flag(fact2.p, ctx, "trivial_fibration").value
        except MissingWitness as exc:
            _note_undecided(status, {"f": f, "missing_witness": str(exc)})
            continue
        verdicts = {
            "first_i_trivial_cofibration": c_i,
            "first_p_fibration": c_p,
            "second_i_cofibration": c_j,
            "second_p_trivial_fibration": c_q,
        }
        if any(v is UNDECIDED for v in verdicts.values()):
            _note_undecided(status, {"f": f, "verdicts": verdicts})
            continue
        if not all(v is True for v in verdicts.values()):
            status.failure = {"f": f, "verdicts": verdicts}
            return _finalize(status)
        status.checked += 1
    return _finalize(status)


# ---------------------------------------------------------------------------
# class identities


def verify_class_identities(pool: MorphismPool, ctx: ModelContext) -> AxiomStatus:
    """TCoFib = CoFib & Weq and TFib = Fib & Weq over all decided pool morphisms."""
    status = AxiomStatus("class_identities", "pass")
    if not ctx.ext1_zero_certified:
        status.undecided_count = 1
        status.notes["precondition"] = "Ext^1 on generator pairs is not certified zero"
        return _finalize(status)
    for f in pool.all_morphisms():
        vals = {
            name: classify_flag(f, ctx, name).value
            for name in (
                "cofibration",
                "fibration",
                "trivial_cofibration",
                "trivial_fibration",
                "weak_equivalence",
            )
        }
        if any(v is UNDECIDED for v in vals.values()):
            _note_undecided(status, {"f": f, "flags": vals})
            continue
        ok_tcof = vals["trivial_cofibration"] == (vals["cofibration"] and vals["weak_equivalence"])
        ok_tfib = vals["trivial_fibration"] == (vals["fibration"] and vals["weak_equivalence"])
        if not (ok_tcof and ok_tfib):
            status.failure = {"f": f, "flags": vals}
            return _finalize(status)
        status.checked += 1
    return _finalize(status)


# ---------------------------------------------------------------------------
# correspondence round trip


def roundtrip_correspondence(ctx: ModelContext, pool: MorphismPool) -> AxiomStatus:
    """Recover (cofibrant, trivially fibrant) from the classified pool and
    compare with the declared pair over the universe."""
    status = AxiomStatus("roundtrip", "pass")
    recovered_c, recovered_tf, expected_c, expected_tf = [], [], [], []
    z = zero_module(ctx.algebra)
    for m in ctx.universe.members:
        from_zero = zero_morphism(z, m)
        to_zero = zero_morphism(m, z)
        rc = classify_flag(from_zero, ctx, "cofibration").value
        rtf = classify_flag(to_zero, ctx, "trivial_fibration").value
        ec = ctx.in_cofibrant(m)
        etf = ctx.in_trivial(m)
        if UNDECIDED in (rc, rtf, ec, etf):
            _note_undecided(status, {"module": m})
            continue
        status.checked += 1
        recovered_c.append(rc)
        expected_c.append(ec)
        recovered_tf.append(rtf)
        expected_tf.append(etf)
        if rc != ec or rtf != etf:
            status.failure = {
                "module": m,
                "recovered_cofibrant": rc,
                "expected_cofibrant": ec,
                "recovered_trivially_fibrant": rtf,
                "expected_trivially_fibrant": etf,
            }
            return _finalize(status)
    status.notes["cofibrant_members"] = sum(recovered_c)
    status.notes["trivially_fibrant_members"] = sum(recovered_tf)
    return _finalize(status)


# ---------------------------------------------------------------------------
# full report


@dataclass
class AxiomReport:
    statuses: dict[str, AxiomStatus]
    pool_objects: int
    pool_morphisms: int
    seed: int

    @property
    def all_pass(self) -> bool:
        return all(s.verdict == "pass" for s in self.statuses.values())

    @property
    def any_fail(self) -> bool:
        return any(s.verdict == "fail" for s in self.statuses.values())

    @property
    def any_undecided(self) -> bool:
        return any(s.verdict == "undecided" for s in self.statuses.values())


def run_axioms(ctx: ModelContext, pool: MorphismPool | None = None) -> AxiomReport:
    pool = pool or build_pool(ctx)
    statuses = {
        "two_out_of_three": verify_two_out_of_three(pool, ctx),
        "retract": verify_retract(pool, ctx),
        "lifting": verify_lifting(pool, ctx),
        "factorization": verify_factorization(pool, ctx),
        "class_identities": verify_class_identities(pool, ctx),
    }
    if ctx.hereditary_certified:
        statuses["roundtrip"] = roundtrip_correspondence(ctx, pool)
    return AxiomReport(statuses, len(pool.objects), pool.size, pool.seed)
