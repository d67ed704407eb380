"""Morphism classes of the induced model structure, factorizations and lifts.

The five classes are decided per morphism with certificates:

* cofibration: inflation with cokernel in the cofibrant class,
* fibration: core-epic (Hom(W, -) surjective for every core generator),
* trivial cofibration: split mono with cokernel in the core,
* trivial fibration: deflation with kernel in the trivial class,
* weak equivalence: admits a deflation (f, t): A + W -> B with W a core
  sum and kernel in the trivial class.

Weak equivalences are decided by a tiered procedure.  Two exact negative
tiers apply in any context: a zero target reduces to membership of the
source in the trivial class, and a target that cannot be covered by
im(f) together with images of core generators admits no such deflation at
all.  In a certified hereditary context the canonical core approximation
decides membership exactly; otherwise a bounded witness search runs and
its exhaustion is reported as UNDECIDED, never as a No.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .budgets import UNDECIDED, Budget
from .homology import IncompatibleSquare, find_lift, ext_dim
from .modules import (
    Conflation,
    IsoRegistry,
    Module,
    Morphism,
    Subcat,
    add_morphisms,
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
    scale_morphism,
    stack_cols,
    stack_rows,
    zero_module,
    zero_morphism,
)
from .pairs import (
    CotorsionReport,
    Universe,
    analyze,
    right_core_approximation,
    _coeff_stream,
    _multiplicity_candidates,
    _sum_of,
)


class MissingWitness(RuntimeError):
    """The completeness report lacks a sequence the construction needs."""


FLAGS = (
    "inflation",
    "deflation",
    "cofibration",
    "fibration",
    "trivial_cofibration",
    "trivial_fibration",
    "weak_equivalence",
)


@dataclass
class Flag:
    value: object  # True / False / UNDECIDED
    payload: dict = field(default_factory=dict)


@dataclass
class Classification:
    morphism: Morphism
    flags: dict[str, Flag]

    def __getitem__(self, name: str) -> Flag:
        return self.flags[name]

    def decided(self, name: str) -> bool:
        return self.flags[name].value is not UNDECIDED


@dataclass
class ModelContext:
    """Everything the classifier needs: the pair, its core, and the report."""

    cofibrant: Subcat  # the left class (cofibrant objects)
    trivial: Subcat  # the right class (trivial objects)
    core: Subcat
    universe: Universe
    report: CotorsionReport
    budget: Budget
    registry: IsoRegistry
    _caches: dict = field(default_factory=dict, repr=False)

    @property
    def algebra(self):
        return self.universe.members[0].algebra

    @property
    def hereditary_certified(self) -> bool:
        return self.report.certifies_model_structure

    @property
    def ext1_zero_certified(self) -> bool:
        return self.report.orthogonality.ext1_pairs_zero

    def cache(self, name: str) -> dict:
        return self._caches.setdefault(name, {})

    # -- membership with memoization -------------------------------------

    def _membership(self, m: Module, cat: Subcat, tag: str):
        memo = self.cache("member_" + tag)
        k = m.key()
        if k not in memo:
            memo[k] = in_add(m, cat, self.budget, self.registry)
        return memo[k]

    def in_cofibrant(self, m: Module):
        return self._membership(m, self.cofibrant, "cofibrant")

    def in_trivial(self, m: Module):
        return self._membership(m, self.trivial, "trivial")

    def in_core(self, m: Module):
        return self._membership(m, self.core, "core")

    # -- canonical approximations ----------------------------------------

    def right_core_approx(self, m: Module) -> Morphism:
        memo = self.cache("core_approx")
        k = m.key()
        if k not in memo:
            memo[k] = right_core_approximation(m, self.core)
        return memo[k]

    def _member_witness(self, m: Module, kind: str) -> Conflation:
        entry = self.report.completeness.witnesses.get(m.key())
        if entry is None:
            raise MissingWitness(f"no completeness record for {m!r}")
        conf = entry[kind]
        if conf is None or conf is UNDECIDED:
            raise MissingWitness(f"completeness search did not yield a {kind} for {m!r}")
        return conf

    def approx_conflation(self, m: Module) -> Conflation:
        """0 -> Y -> X -> m -> 0 with X cofibrant-class, Y trivial-class.

        Universe members use their report witnesses; arbitrary modules are
        decomposed and the summand witnesses are transported along the
        decomposition isomorphism.
        """
        memo = self.cache("approx_conf")
        k = m.key()
        if k in memo:
            return memo[k]
        algebra = m.algebra
        if m.total_dim == 0:
            z = zero_module(algebra)
            conf = Conflation(zero_morphism(z, z), zero_morphism(z, m))
        else:
            dec = self.registry.decompose(m)
            if dec is UNDECIDED:
                raise MissingWitness(f"cannot decompose {m!r} to transport witnesses")
            reps = [rep for rep, _ in dec.pieces]
            sum_mod, iso = dec.sum_iso()
            confs = [self._member_witness(rep, "approx") for rep in reps]
            xs = [c.middle() for c in confs]
            x_sum, x_injs, x_projs = direct_sum(algebra, xs)
            _, s_injs, _ = direct_sum(algebra, reps)
            t_block = stack_cols(x_sum, [compose(s_injs[i], confs[i].d) for i in range(len(reps))])
            t = compose(iso, t_block)
            kmod, ki = kernel(t)
            conf = Conflation(ki, t)
        memo[k] = conf
        return conf

    def coapprox_conflation(self, m: Module) -> Conflation:
        """0 -> m -> Y' -> X' -> 0 with Y' trivial-class, X' cofibrant-class."""
        memo = self.cache("coapprox_conf")
        k = m.key()
        if k in memo:
            return memo[k]
        algebra = m.algebra
        if m.total_dim == 0:
            z = zero_module(algebra)
            conf = Conflation(zero_morphism(m, z), zero_morphism(z, z))
        else:
            dec = self.registry.decompose(m)
            if dec is UNDECIDED:
                raise MissingWitness(f"cannot decompose {m!r} to transport witnesses")
            reps = [rep for rep, _ in dec.pieces]
            sum_mod, iso = dec.sum_iso()
            p = algebra.p
            iso_inv = Morphism(
                m, sum_mod, [linalg.inverse(iso.maps[v], p) for v in range(algebra.vertex_count)]
            )
            confs = [self._member_witness(rep, "coapprox") for rep in reps]
            ys = [c.i.target for c in confs]
            y_sum, y_injs, _ = direct_sum(algebra, ys)
            _, _, s_projs = direct_sum(algebra, reps)
            sigma_block = stack_rows(y_sum, [compose(confs[i].i, s_projs[i]) for i in range(len(reps))])
            sigma = compose(sigma_block, iso_inv)
            cmod, proj = cokernel(sigma)
            conf = Conflation(sigma, proj)
        memo[k] = conf
        return conf


def build_context(
    left: Subcat,
    right: Subcat,
    universe: Universe,
    budget: Budget,
    report: CotorsionReport | None = None,
    registry: IsoRegistry | None = None,
) -> ModelContext:
    registry = registry if registry is not None else IsoRegistry(budget)
    for m in universe.members:
        registry.register(m)
    if report is None:
        report = analyze(left, right, universe, budget, registry)
    return ModelContext(left, right, report.core, universe, report, budget, registry)


# ---------------------------------------------------------------------------
# the classifier


def _decompose_summary(ctx: ModelContext, m: Module):
    dec = ctx.registry.decompose(m)
    if dec is UNDECIDED:
        return "undecided"
    return [(rep.dims, mult) for rep, mult in dec.parts()]


def _flag_inflation(f: Morphism, ctx: ModelContext) -> Flag:
    return Flag(is_injective(f))


def _flag_deflation(f: Morphism, ctx: ModelContext) -> Flag:
    return Flag(is_surjective(f))


def _flag_cofibration(f: Morphism, ctx: ModelContext) -> Flag:
    if not is_injective(f):
        return Flag(False, {"reason": "not an inflation"})
    c, _ = cokernel(f)
    mem = ctx.in_cofibrant(c)
    if mem is UNDECIDED:
        return Flag(UNDECIDED, {"cokernel_dims": c.dims})
    return Flag(
        mem,
        {"cokernel_dims": c.dims, "cokernel_parts": _decompose_summary(ctx, c)},
    )


def _hom_pushforward_surjective(f: Morphism, w: Module) -> bool:
    """Is Hom(W, f): Hom(W, A) -> Hom(W, B) surjective?"""
    p = f.algebra.p
    target_basis = hom_basis(w, f.target)
    if not target_basis:
        return True
    source_basis = hom_basis(w, f.source)
    if not source_basis:
        return False
    cols = [flatten(compose(f, h)) for h in source_basis]
    span = np.column_stack(cols)
    full = np.column_stack([flatten(h) for h in target_basis])
    return linalg.rank(span, p) == linalg.rank(np.hstack([span, full]), p) == len(target_basis)


def _flag_fibration(f: Morphism, ctx: ModelContext) -> Flag:
    for w in ctx.core.generators:
        if not _hom_pushforward_surjective(f, w):
            return Flag(False, {"failing_generator_dims": w.dims})
    return Flag(True, {"checked_generators": len(ctx.core.generators)})


def _flag_trivial_fibration(f: Morphism, ctx: ModelContext) -> Flag:
    if not is_surjective(f):
        return Flag(False, {"reason": "not a deflation"})
    k, _ = kernel(f)
    mem = ctx.in_trivial(k)
    if mem is UNDECIDED:
        return Flag(UNDECIDED, {"kernel_dims": k.dims})
    return Flag(mem, {"kernel_dims": k.dims, "kernel_parts": _decompose_summary(ctx, k)})


def _find_retraction(f: Morphism) -> Morphism | None:
    """A morphism r with r o f = id, if one exists."""
    p = f.algebra.p
    basis = hom_basis(f.target, f.source)
    if not basis:
        return identity_morphism(f.source) if f.source.total_dim == 0 else None
    cols = [flatten(compose(h, f)) for h in basis]
    system = np.column_stack(cols)
    rhs = flatten(identity_morphism(f.source)).reshape(-1, 1)
    sol = linalg.solve(system, rhs, p)
    if sol is None:
        return None
    return combine(basis, sol[:, 0])


def _flag_trivial_cofibration(f: Morphism, ctx: ModelContext) -> Flag:
    r = _find_retraction(f)
    if r is None:
        return Flag(False, {"reason": "not a split mono"})
    c, _ = cokernel(f)
    mem = ctx.in_core(c)
    if mem is UNDECIDED:
        return Flag(UNDECIDED, {"cokernel_dims": c.dims})
    return Flag(
        mem,
        {
            "retraction": r,
            "cokernel_dims": c.dims,
            "cokernel_parts": _decompose_summary(ctx, c),
        },
    )


def _core_coverage_deficit(f: Morphism, ctx: ModelContext) -> int | None:
    """A vertex where im(f) plus every possible core image cannot reach, or None.

    The image of any t: W -> B with W a sum of core generators lies in the
    span of the images of the Hom-basis elements from the generators, so a
    deficit here rules out every candidate deflation (f, t).
    """
    p = f.algebra.p
    b = f.target
    tau = ctx.right_core_approx(b)
    for v in range(f.algebra.vertex_count):
        stacked = np.hstack([f.maps[v], tau.maps[v]])
        if linalg.rank(stacked, p) < b.dims[v]:
            return v
    return None


def _weq_yes(w_mod: Module, t: Morphism, k: Module, ctx: ModelContext) -> Flag:
    return Flag(
        True,
        {
            "witness_summand_dims": w_mod.dims,
            "witness_t": t,
            "kernel_dims": k.dims,
            "kernel_parts": _decompose_summary(ctx, k),
        },
    )


def _try_weq_witness(f: Morphism, w_mod: Module, t: Morphism, ctx: ModelContext):
    """Check one candidate (W, t); returns a Flag on success, else None/UNDECIDED."""
    algebra = f.algebra
    a_sum, injs, _ = direct_sum(algebra, [f.source, w_mod])
    g = stack_cols(a_sum, [f, t])
    if not is_surjective(g):
        return None
    k, _ = kernel(g)
    mem = ctx.in_trivial(k)
    if mem is True:
        return _weq_yes(w_mod, t, k, ctx)
    if mem is UNDECIDED:
        return UNDECIDED
    return None


def _flag_weak_equivalence(f: Morphism, ctx: ModelContext) -> Flag:
    a, b = f.source, f.target
    algebra = f.algebra
    # tier 1: zero target; exactly the trivial-object test
    if b.total_dim == 0:
        mem = ctx.in_trivial(a)
        if mem is UNDECIDED:
            return Flag(UNDECIDED, {"tier": "zero-target"})
        if mem is True:
            return _weq_yes(zero_module(algebra), zero_morphism(zero_module(algebra), b), a, ctx)
        return Flag(
            False,
            {
                "tier": "zero-target",
                "certificate": "source is not in the trivial class",
                "source_parts": _decompose_summary(ctx, a),
            },
        )
    # tier 2: zero morphism; Ker(0, t) = A + Ker(t) has the source as a summand
    if f.is_zero:
        mem = ctx.in_trivial(a)
        if mem is False:
            return Flag(
                False,
                {
                    "tier": "zero-morphism",
                    "certificate": "zero morphism whose source is not in the trivial class",
                    "source_parts": _decompose_summary(ctx, a),
                },
            )
    # tier 3: coverage obstruction; exact in any context
    deficit = _core_coverage_deficit(f, ctx)
    if deficit is not None:
        return Flag(
            False,
            {
                "tier": "coverage",
                "certificate": f"no deflation (f, t) can be surjective at vertex {deficit}",
                "vertex": deficit,
            },
        )
    tau = ctx.right_core_approx(b)
    # tier 4: certified hereditary context; the canonical approximation decides
    if ctx.hereditary_certified:
        res = _try_weq_witness(f, tau.source, tau, ctx)
        if res is UNDECIDED:
            return Flag(UNDECIDED, {"tier": "fast-path"})
        if res is not None:
            res.payload["tier"] = "fast-path"
            return res
        a_sum, _, _ = direct_sum(algebra, [a, tau.source])
        g = stack_cols(a_sum, [f, tau])
        k, _ = kernel(g)
        return Flag(
            False,
            {
                "tier": "fast-path",
                "certificate": "kernel of the canonical test deflation is not trivial",
                "kernel_dims": k.dims,
                "kernel_parts": _decompose_summary(ctx, k),
            },
        )
    # tier 4: bounded witness search (general context)
    res = _try_weq_witness(f, zero_module(algebra), zero_morphism(zero_module(algebra), b), ctx)
    if isinstance(res, Flag):
        res.payload["tier"] = "search"
        return res
    res = _try_weq_witness(f, tau.source, tau, ctx)
    if isinstance(res, Flag):
        res.payload["tier"] = "search"
        return res
    p = algebra.p
    examined = 0
    for mults in _multiplicity_candidates(ctx.core.generators, budget=ctx.budget):
        if examined >= ctx.budget.weq_w_cap:
            break
        examined += 1
        w_mod = _sum_of(ctx.core.generators, mults, algebra)
        basis = hom_basis(w_mod, b)
        if not basis:
            continue
        for coeffs in _coeff_stream(len(basis), p, ctx.budget, ctx.budget.weq_t_cap):
            t = combine(basis, coeffs)
            res = _try_weq_witness(f, w_mod, t, ctx)
            if isinstance(res, Flag):
                res.payload["tier"] = "search"
                return res
    return Flag(UNDECIDED, {"tier": "search", "candidates_examined": examined})


_FLAG_FUNCS = {
    "inflation": _flag_inflation,
    "deflation": _flag_deflation,
    "cofibration": _flag_cofibration,
    "fibration": _flag_fibration,
    "trivial_cofibration": _flag_trivial_cofibration,
    "trivial_fibration": _flag_trivial_fibration,
    "weak_equivalence": _flag_weak_equivalence,
}


def classify_flag(f: Morphism, ctx: ModelContext, flag: str) -> Flag:
    memo = ctx.cache("classify")
    k = (f.key(), flag)
    if k not in memo:
        memo[k] = _FLAG_FUNCS[flag](f, ctx)
    return memo[k]


def classify(f: Morphism, ctx: ModelContext, flags=FLAGS) -> Classification:
    return Classification(f, {name: classify_flag(f, ctx, name) for name in flags})


# ---------------------------------------------------------------------------
# factorizations


@dataclass
class Factorization:
    kind: str
    i: Morphism
    p: Morphism

    def composite(self) -> Morphism:
        return compose(self.p, self.i)


def factorize_trivcofib_fib(f: Morphism, ctx: ModelContext) -> Factorization:
    """f = (f, tau) o (1; 0) through A + T with T the canonical core approximation of B."""
    tau = ctx.right_core_approx(f.target)
    a_sum, injs, _ = direct_sum(f.algebra, [f.source, tau.source])
    i = injs[0]
    p = stack_cols(a_sum, [f, tau])
    fact = Factorization("trivcofib_then_fib", i, p)
    if fact.composite().key() != f.key():
        raise AssertionError("factorization does not compose to the input")
    return fact


def factorize_cofib_trivfib(f: Morphism, ctx: ModelContext) -> Factorization:
    """f = p o i with i a cofibration and p a deflation with trivial kernel.

    Built from the completeness witnesses: (f, t_B): A + X_B ->> B has a
    kernel K; the co-approximation 0 -> K -> Y -> X -> 0 is pushed out
    along it, concretely as the cokernel of K -> (A + X_B) + Y.
    """
    algebra = f.algebra
    conf_b = ctx.approx_conflation(f.target)
    x_b = conf_b.middle()
    t_b = conf_b.d
    ax, injs, _ = direct_sum(algebra, [f.source, x_b])
    g = stack_cols(ax, [f, t_b])
    if not is_surjective(g):
        raise AssertionError("approximation deflation failed to be surjective")
    k_mod, k_incl = kernel(g)
    conf_k = ctx.coapprox_conflation(k_mod)
    sigma = conf_k.i  # K -> Y
    y = sigma.target
    big, binjs, _ = direct_sum(algebra, [ax, y])
    kappa = add_morphisms(
        compose(binjs[0], k_incl), compose(binjs[1], scale_morphism(-1, sigma))
    )
    e_mod, q = cokernel(kappa)
    i_mid = compose(q, binjs[0])
    i_full = compose(i_mid, injs[0])
    # p: E -> B is induced by (g, 0) on the pushout presentation
    p = algebra.p
    gg = stack_cols(big, [g, zero_morphism(y, f.target)])
    maps = []
    for v in range(algebra.vertex_count):
        section = linalg.solve(q.maps[v], linalg.identity(q.maps[v].shape[0]), p)
        cand = linalg.matmul(gg.maps[v], section, p)
        if not np.array_equal(linalg.matmul(cand, q.maps[v], p), gg.maps[v]):
            raise AssertionError("induced map on the pushout is not well defined")
        maps.append(cand)
    p_map = Morphism(e_mod, f.target, maps)
    fact = Factorization("cofib_then_trivfib", i_full, p_map)
    if fact.composite().key() != f.key():
        raise AssertionError("factorization does not compose to the input")
    return fact


# ---------------------------------------------------------------------------
# lifting


@dataclass(frozen=True)
class Square:
    """A commuting square: left edge i, right edge p, top and bottom."""

    i: Morphism
    p: Morphism
    top: Morphism
    bottom: Morphism


def lift(square: Square, ctx: ModelContext) -> Morphism | None:
    """A diagonal for a (cofibration, fibration) square with one trivial edge.

    Raises IncompatibleSquare when the square does not commute or the edges
    are not classified into the required classes.
    """
    i, p, top, bottom = square.i, square.p, square.top, square.bottom
    if compose(p, top).key() != compose(bottom, i).key():
        raise IncompatibleSquare("square does not commute")
    left_cof = classify_flag(i, ctx, "cofibration").value
    left_tcof = classify_flag(i, ctx, "trivial_cofibration").value
    if left_cof is not True and left_tcof is not True:
        raise IncompatibleSquare("left edge is neither a cofibration nor a trivial cofibration")
    right_fib = classify_flag(p, ctx, "fibration").value
    right_tfib = classify_flag(p, ctx, "trivial_fibration").value
    if right_fib is not True and right_tfib is not True:
        raise IncompatibleSquare("right edge is neither a fibration nor a trivial fibration")
    return find_lift(i, p, top, bottom)


# ---------------------------------------------------------------------------
# diagnostics


def check_exactness(ctx: ModelContext):
    """Is the induced model structure exact?

    True exactly when the core consists of projectives and covers every
    universe member.  On failure the witness is either a core
    approximation that is core-epic but not surjective, or a
    non-projective core generator.
    """
    for m in ctx.universe.members:
        tau = ctx.right_core_approx(m)
        if not is_surjective(tau):
            return False, {
                "witness_kind": "fibration_not_deflation",
                "morphism": tau,
                "module_dims": m.dims,
                "fibration": classify_flag(tau, ctx, "fibration").value,
                "deflation": classify_flag(tau, ctx, "deflation").value,
            }
    for w in ctx.core.generators:
        for m in ctx.universe.members:
            d = ext_dim(w, m, 1).dim
            if d:
                return False, {
                    "witness_kind": "non_projective_core_generator",
                    "generator_dims": w.dims,
                    "against_dims": m.dims,
                    "ext1_dim": d,
                }
    return True, {}


def check_weakly_projective(ctx: ModelContext, pool) -> dict:
    """Re-check the weak-projectivity conditions over a morphism pool.

    Conditions: cofibrations are exactly inflations with cofibrant
    cokernel; trivial fibrations are exactly deflations with trivial
    kernel; every object is fibrant; (cofibrant class, trivially fibrant
    class) recovered from the pool is a complete cotorsion pair.  The
    two-out-of-three scan is included as a coherence check; on a
    non-hereditary pair this is where the violation shows up.
    """
    from .verifier import verify_two_out_of_three

    report: dict = {"warnings": []}
    morphisms = pool.all_morphisms()
    if not morphisms:
        report["warnings"].append("empty pool: conditions hold vacuously")
    cof_mismatch, tfib_mismatch = [], []
    for f in morphisms:
        cof = classify_flag(f, ctx, "cofibration").value
        direct_cof = is_injective(f) and ctx.in_cofibrant(cokernel(f)[0]) is True
        if cof is not UNDECIDED and cof != direct_cof:
            cof_mismatch.append(f)
        tfib = classify_flag(f, ctx, "trivial_fibration").value
        direct_tfib = is_surjective(f) and ctx.in_trivial(kernel(f)[0]) is True
        if tfib is not UNDECIDED and tfib != direct_tfib:
            tfib_mismatch.append(f)
    report["cofibrations_match_inflation_description"] = not cof_mismatch
    report["trivial_fibrations_match_deflation_description"] = not tfib_mismatch
    fibrant_failures = []
    for obj in pool.objects:
        to_zero = zero_morphism(obj, zero_module(ctx.algebra))
        if classify_flag(to_zero, ctx, "fibration").value is not True:
            fibrant_failures.append(obj)
    report["every_object_fibrant"] = not fibrant_failures
    # recovered classes and their cotorsion pair, as in the correspondence
    recovered_c = [m for m in ctx.universe.members if ctx.in_cofibrant(m) is True]
    recovered_tf = [m for m in ctx.universe.members if ctx.in_trivial(m) is True]
    sub_c = Subcat("recovered_cofibrant", tuple(recovered_c))
    sub_tf = Subcat("recovered_trivially_fibrant", tuple(recovered_tf))
    pair_report = analyze(sub_c, sub_tf, ctx.universe, ctx.budget, ctx.registry)
    report["recovered_pair_orthogonal"] = (
        pair_report.orthogonality.left_ok and pair_report.orthogonality.right_ok
    )
    report["recovered_pair_complete"] = pair_report.completeness.verdict
    two = verify_two_out_of_three(pool, ctx)
    report["weq_two_out_of_three"] = two.verdict
    if two.verdict == "fail":
        report["coherence_violation"] = two.failure
    return report
