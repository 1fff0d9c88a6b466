"""Theorem audit harness.

Each registered check evaluates one result's full equivalence/inclusion list
on one algebra (per sampled subspace where the statement quantifies over
subspaces), gated on its hypotheses, and emits verdicts with replayable
witnesses. Checks whose hypotheses fail are reported as failing-hypothesis
(and, for the `§4`-style checks where the canonical counterexample matters,
still evaluated); they never count as violations.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebras import Algebra, quotient
from .errors import BudgetExceeded, Budgets
from .nilpotents import (
    fn2_span,
    inner_automorphisms,
    is_invariant,
    n2_span,
    nilpotent_elements,
    nilpotent_span,
    nilpotent_units,
    nilpotency_index,
    scalar_multiple_units,
    sq_zero_units,
    vandermonde_bracket_check,
    zero_product_balanced,
)
from .samplers import (
    FN_RETRY_CAP,
    SubspaceSampler,
    apply_kind,
    bracket_closure,
    fully_noncentral_sample,
    invariant_orbit_closure,
    lie_closure,
    random_subspace,
    submodule_closure,
)
from .spectrum import (
    exceptional_remark_agrees,
    hypothesis_nonexceptional_cofinal,
    ideal_lattice,
    is_idempotent_ring,
    is_maximal_cofinal,
    is_prime_cofinal,
    s4_span,
    two_r_plus_s4_ideal,
)
from .subspaces import (
    Subspace,
    bracket_space,
    center,
    commutator_subspace,
    derived_tower,
    ideal_closure,
    intersect,
    is_full,
    is_fully_noncentral,
    is_lie_ideal,
    is_rr_submodule,
    product_space,
    t_of,
    whole_space,
    zero_space,
)

TOWER_DEPTH = 5  # derived/normalizer stages checked explicitly by the audits


class AlgebraFacts:
    """Lazily computed, cached per-algebra context shared by all checks."""

    def __init__(self, algebra: Algebra, budgets: Budgets):
        self.algebra = algebra
        self.budgets = budgets
        self._memo = algebra._cache.setdefault(("facts", budgets), {})

    def _get(self, key, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    @property
    def whole(self):
        return self._get("whole", lambda: whole_space(self.algebra))

    @property
    def comm(self):
        return self._get("comm", lambda: commutator_subspace(self.algebra))

    @property
    def center(self):
        return self._get("center", lambda: center(self.algebra))

    @property
    def comm_full(self):
        return self._get("comm_full", lambda: is_full(self.comm))

    @property
    def spectrum(self):
        return self._get("spectrum", lambda: ideal_lattice(self.algebra, self.budgets))

    @property
    def prime_cofinal(self):
        return self._get("prime_cofinal", lambda: is_prime_cofinal(self.algebra, self.budgets))

    @property
    def maximal_cofinal(self):
        return self._get("maximal_cofinal", lambda: is_maximal_cofinal(self.algebra, self.budgets))

    @property
    def nonexc_cofinal_full(self):
        return self._get(
            "nonexc", lambda: hypothesis_nonexceptional_cofinal(self.algebra, self.budgets)
        )

    @property
    def nonexc_cofinal(self):
        return self.nonexc_cofinal_full[0]

    @property
    def exceptional_cofinal(self):
        """Every proper ideal below some (possibly exceptional) prime."""
        return self.prime_cofinal

    @property
    def idempotent(self):
        return self._get("idempotent", lambda: is_idempotent_ring(self.algebra))

    @property
    def n2(self):
        return self._get("n2", lambda: n2_span(self.algebra, self.budgets.elements))

    @property
    def nspan(self):
        return self._get("nspan", lambda: nilpotent_span(self.algebra, self.budgets.elements))

    @property
    def fn2(self):
        return self._get("fn2", lambda: fn2_span(self.algebra, self.budgets.pairs))

    @property
    def n2_full(self):
        return self._get("n2_full", lambda: is_full(self.n2.space))

    @property
    def comm_in_n2(self):
        return self._get("comm_in_n2", lambda: self.comm <= self.n2.space)

    @property
    def comm_in_nspan(self):
        return self._get("comm_in_nspan", lambda: self.comm <= self.nspan.space)

    @property
    def derived_r(self):
        return self._get("derived_r", lambda: derived_tower(self.whole, TOWER_DEPTH + 1))

    def r_stage(self, n):
        return self.derived_r.stage(n)

    @property
    def unit_auts(self):
        """All inner automorphisms, or a BudgetExceeded marker."""

        def compute():
            try:
                return inner_automorphisms(self.algebra, self.budgets.elements)
            except BudgetExceeded as exc:
                return exc

        return self._get("unit_auts", compute)

    @property
    def sqzero_auts(self):
        return self._get("sqzero_auts", lambda: sq_zero_units(self.algebra, self.budgets.elements))

    @property
    def nilpotent_auts(self):
        return self._get(
            "nilpotent_auts", lambda: nilpotent_units(self.algebra, self.budgets.elements)
        )

    @property
    def zpb(self):
        def compute():
            try:
                return zero_product_balanced(self.algebra, self.budgets.pairs)
            except BudgetExceeded as exc:
                return exc

        return self._get("zpb", compute)


@dataclass(frozen=True)
class TheoremVerdict:
    theorem_id: str
    algebra_id: str
    hypothesis_status: str
    conclusion_status: str | None
    sample_index: int | None = None
    sample_kind: str | None = None
    details: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    wall_ms: float = 0.0

    def to_json_dict(self):
        return {
            "theorem_id": self.theorem_id,
            "algebra_id": self.algebra_id,
            "sample_index": self.sample_index,
            "sample_kind": self.sample_kind,
            "hypothesis_status": self.hypothesis_status,
            "conclusion_status": self.conclusion_status,
            "details": self.details,
            "witnesses": self.witnesses,
            "wall_ms": round(self.wall_ms, 3),
        }


def _gens(v: Subspace):
    return v.generators()


def _coords(x):
    arr = x.coords if hasattr(x, "coords") else np.asarray(x)
    return [int(c) for c in arr]


def _tfae(conditions: dict, moreover: dict | None = None):
    """Equivalence-list verdict: all condition booleans must agree, and the
    'moreover' identities must hold whenever the conditions are true."""
    values = list(conditions.values())
    agree = all(v == values[0] for v in values)
    extra_ok = True
    if moreover is not None and values and values[0]:
        extra_ok = all(moreover.values())
    ok = agree and extra_ok
    details = {"conditions": {k: bool(v) for k, v in conditions.items()}}
    if moreover is not None:
        details["moreover"] = {k: bool(v) for k, v in moreover.items()}
    return ok, details


def _all(checks: dict):
    ok = all(checks.values())
    return ok, {"checks": {k: bool(v) for k, v in checks.items()}}


# ---------------------------------------------------------------------------
# section 2 checks


def _towers(v, depth=3):
    stages = [v]
    for _ in range(depth):
        stages.append(t_of(stages[-1]))
    return stages  # [V, T(V), T^2(V), T^3(V)]


def check_T2_3(facts, v):
    r = facts.whole
    _, t1, t2, t3 = _towers(v, 3)
    vv2 = v + product_space(v, v)
    inner1 = bracket_space(intersect(t1, v), intersect(t2, t1))
    core = bracket_space(intersect(t2, t1), intersect(t3, t2))
    checks = {
        "closure_of_low_bracket_in_v_plus_v2": ideal_closure(inner1) <= vv2,
        "bracket_with_closure_of_high_bracket_in_v": bracket_space(r, ideal_closure(core)) <= v,
    }
    if is_full(core):
        checks["full_case_forces_commutators_inside"] = facts.comm <= v and is_lie_ideal(v)
    ok, details = _all(checks)
    return "holds", ok, details, {}


def check_C2_5(facts, v):
    a = facts.algebra
    r = facts.whole
    ell = v  # lie closure applied by the sampler pipeline
    stages = [ell]
    for _ in range(min(a.dim + 2, TOWER_DEPTH)):
        stages.append(t_of(stages[-1]))
    ascending = all(stages[i] <= stages[i + 1] for i in range(len(stages) - 1))
    cl = ideal_closure(bracket_space(ell, ell))
    checks = {
        "tower_ascending": ascending,
        "closure_of_bracket_in_l_plus_l2": cl <= ell + product_space(ell, ell),
        "bracket_with_closure_in_l": bracket_space(r, cl) <= ell,
    }
    ok, details = _all(checks)
    return "holds", ok, details, {}


def _derived_stages(v, depth):
    stages = [v]
    for _ in range(depth):
        stages.append(bracket_space(stages[-1], stages[-1]))
    return stages  # [V^(0), ..., V^(depth)]


def check_L2_6(facts, v):
    ts = _towers(v, TOWER_DEPTH)
    ds = _derived_stages(v, TOWER_DEPTH)
    checks = {}
    for n in range(1, TOWER_DEPTH + 1):
        checks[f"derived{n}_in_tower{n}"] = ds[n] <= ts[n]
    for n in range(1, TOWER_DEPTH):
        checks[f"derived{n + 1}_in_derived{n}"] = ds[n + 1] <= ds[n]
    for n in range(1, TOWER_DEPTH + 1):
        checks[f"derived{n}_is_submodule"] = is_rr_submodule(ds[n])
    ok, details = _all(checks)
    return "holds", ok, details, {}


def _towers_n(v, depth):
    stages = [v]
    for _ in range(depth):
        stages.append(t_of(stages[-1]))
    return stages


def check_C2_8(facts, v):
    r = facts.whole
    ts = _towers_n(v, TOWER_DEPTH)
    ds = _derived_stages(v, 3)
    checks = {}
    for n in range(1, TOWER_DEPTH + 1):
        cap = ts[1]
        for j in range(2, n + 1):
            cap = intersect(cap, ts[j])
        checks[f"derived{n}_in_tower_intersection{n}"] = (
            _derived_stages(v, n)[n] <= cap
        )
    vv2 = v + product_space(v, v)
    checks["closure_low_in_v_plus_v2"] = (
        ideal_closure(bracket_space(intersect(ds[1], v), ds[2])) <= vv2
    )
    core = bracket_space(ds[2], ds[3])
    checks["bracket_closure_high_in_v"] = bracket_space(r, ideal_closure(core)) <= v
    if is_full(core):
        checks["full_case_forces_commutators_inside"] = facts.comm <= v
    ok, details = _all(checks)
    return "holds", ok, details, {}


# ---------------------------------------------------------------------------
# section 3 checks


def check_P3_2(facts):
    from .spectrum import check_max_vs_prime

    res = check_max_vs_prime(facts.algebra, facts.budgets)
    checks = {
        "maximal_cofinal": res["maximal_cofinal"],
        "prime_cofinal_implies_idempotent": res["impl_prime_cofinal_implies_idempotent"],
        "idempotent_implies_maximals_prime": res["impl_idempotent_implies_maximals_prime"],
        "max_prime_and_max_cofinal_imply_prime_cofinal": res[
            "impl_max_prime_and_max_cofinal_implies_prime_cofinal"
        ],
    }
    ok, details = _all(checks)
    details["flags"] = {
        k: bool(res[k]) for k in ("prime_cofinal", "idempotent", "maximals_prime")
    }
    witnesses = {}
    if not ok:
        witnesses["nonprime_maximal_ideals"] = [
            _gens(r.subspace) for r in facts.spectrum.maximals() if not r.is_prime
        ]
    return "holds", ok, details, witnesses


def check_L3_4(facts, v):
    r = facts.whole
    ell = v
    l2 = product_space(ell, ell)
    checks = {
        "closure_is_l_plus_rl": ideal_closure(ell) == ell + product_space(r, ell),
        "bracket_l2_in_bracket_l": bracket_space(r, l2) <= bracket_space(r, ell),
        "closure_bracket_ll_in_l_plus_l2": ideal_closure(bracket_space(ell, ell)) <= ell + l2,
        "closure_bracket_l_l2_in_l2": ideal_closure(bracket_space(ell, l2)) <= l2,
    }
    ok, details = _all(checks)
    return "holds", ok, details, {}


def check_T3_5(facts, v):
    if not facts.prime_cofinal:
        hyp = "fails:prime-cofinal"
    elif not facts.comm_full:
        hyp = "fails:commutators-not-full"
    else:
        hyp = "holds"
    ell = v
    l2 = product_space(ell, ell)
    conditions = {
        "bracket_ll_full": is_full(bracket_space(ell, ell)),
        "bracket_l_l2_full": is_full(bracket_space(ell, l2)),
        "square_is_whole": l2.dim == facts.algebra.dim,
        "contains_commutators": facts.comm <= ell,
    }
    moreover = {"commutators_equal_bracket_rl": bracket_space(facts.whole, ell) == facts.comm}
    ok, details = _tfae(conditions, moreover)
    return hyp, ok, details, {}


def check_C3_6(facts, v):
    hyp = "holds" if facts.maximal_cofinal else "fails:maximal-cofinal"
    ell = v
    checks = {}
    if is_full(bracket_space(ell, ell)):
        checks["square_is_whole"] = product_space(ell, ell).dim == facts.algebra.dim
        checks["antecedent"] = True
    else:
        checks["antecedent"] = False
    ok, details = _all({k: v for k, v in checks.items() if k != "antecedent"} or {"vacuous": True})
    details["antecedent_bracket_ll_full"] = checks["antecedent"]
    return hyp, ok, details, {}


def check_C3_7(facts):
    hyp = "holds" if facts.prime_cofinal else "fails:prime-cofinal"
    c1 = facts.comm
    c1sq = product_space(c1, c1)
    conditions = {
        "double_commutator_full": is_full(bracket_space(c1, c1)),
        "bracket_c_c2_full": is_full(bracket_space(c1, c1sq)),
        "c2_is_whole": c1sq.dim == facts.algebra.dim,
        "commutators_full": facts.comm_full,
    }
    moreover = {"commutators_equal_bracket_rc": bracket_space(facts.whole, c1) == c1}
    ok, details = _tfae(conditions, moreover)
    witnesses = {} if ok else {"commutator_subspace": _gens(c1)}
    return hyp, ok, details, witnesses


# ---------------------------------------------------------------------------
# section 4 checks


def check_P4_2(facts):
    direct, witness, info = facts.nonexc_cofinal_full
    checks = {
        "criteria_agree": info["agree"],
        "exceptional_remark_agrees": exceptional_remark_agrees(facts.algebra, facts.budgets),
    }
    ok, details = _all(checks)
    details["nonexceptional_cofinal"] = bool(direct)
    witnesses = {}
    if witness is not None:
        witnesses["uncovered_proper_ideal"] = _gens(witness)
    return "holds", ok, details, witnesses


def check_C4_7(facts):
    hyp = "holds" if facts.nonexc_cofinal else "fails:nonexceptional-cofinal"
    a = facts.algebra
    c1 = facts.comm
    conditions = {"commutators_full": facts.comm_full}
    for n in range(1, 5):
        conditions[f"derived{n}_full"] = is_full(facts.r_stage(n))
    conditions["square_of_commutators_is_whole"] = product_space(c1, c1).dim == a.dim
    moreover = {}
    for n in range(2, 5):
        moreover[f"commutators_equal_derived{n}"] = facts.r_stage(n) == c1
    for m in range(0, 4):
        for n in range(m, 4):
            moreover[f"commutators_equal_bracket_derived{m}_{n}"] = (
                bracket_space(facts.r_stage(m), facts.r_stage(n)) == c1
            )
    ok, details = _tfae(conditions, moreover)
    witnesses = {} if ok else {
        "commutator_subspace": _gens(c1),
        "derived_stages": [_gens(facts.r_stage(n)) for n in range(0, 5)],
    }
    return hyp, ok, details, witnesses


def check_T4_5(facts, v):
    if not facts.nonexc_cofinal:
        hyp = "fails:nonexceptional-cofinal"
    elif not facts.comm_full:
        hyp = "fails:commutators-not-full"
    else:
        hyp = "holds"
    a = facts.algebra
    ds = _derived_stages(v, 4)
    fn = is_fully_noncentral(v)
    conditions = {"fully_noncentral": fn}
    for n in range(1, 5):
        conditions[f"derived{n}_full"] = is_full(ds[n])
    for m in (1, 2):
        for n in (1, 2):
            conditions[f"bracket_derived{m}_{n}_full"] = is_full(bracket_space(ds[m], ds[n]))
    conditions["contains_commutators"] = facts.comm <= v
    moreover = {
        "bracket_rv_is_commutators": bracket_space(facts.whole, v) == facts.comm,
        "bracket_vv_is_commutators": ds[1] == facts.comm,
        "square_is_whole": product_space(v, v).dim == a.dim,
    }
    for n in range(1, 5):
        moreover[f"derived{n}_is_commutators"] = ds[n] == facts.comm
        moreover[f"r_derived{n}_is_commutators"] = facts.r_stage(n) == facts.comm
    ok, details = _tfae(conditions, moreover)
    square_whole = product_space(v, v).dim == a.dim
    details["finding_square_whole_without_full_noncentrality"] = bool(square_whole and not fn)
    return hyp, ok, details, {}


def check_C4_6(facts, v):
    hyp = "holds" if facts.nonexc_cofinal else "fails:nonexceptional-cofinal"
    conditions = {
        "contains_commutators": facts.comm <= v,
        "lie_ideal": is_lie_ideal(v),
        "rr_submodule": is_rr_submodule(v),
    }
    ok, details = _tfae(conditions)
    if conditions["lie_ideal"] and v <= facts.comm:
        inner = v == facts.comm
        details["lie_ideal_inside_commutators_equals_them"] = bool(inner)
        ok = ok and inner
    return hyp, ok, details, {}


def check_T4_8(facts, k, ell):
    hyp = "holds" if facts.nonexc_cofinal else "fails:nonexceptional-cofinal"
    c1 = facts.comm
    r = facts.whole
    kl = bracket_space(k, ell)
    kk = bracket_space(k, k)
    ll = bracket_space(ell, ell)
    conditions = {
        "bracket_kl_full": is_full(kl),
        "both_self_brackets_full": is_full(kk) and is_full(ll),
        "both_fully_noncentral": is_full(bracket_space(r, k)) and is_full(bracket_space(r, ell)),
    }
    moreover = {
        "kl_is_commutators": kl == c1,
        "kk_is_commutators": kk == c1,
        "ll_is_commutators": ll == c1,
    }
    ok, details = _tfae(conditions, moreover)
    return hyp, ok, details, {}


def check_L4_4(facts_q, v):
    """Runs inside a non-exceptional prime quotient Q with [Q, v] != 0."""
    z = center(facts_q.algebra)
    ds = _derived_stages(v, 2)
    checks = {}
    for m in (1, 2):
        for n in (1, 2):
            checks[f"bracket_derived{m}_{n}_noncentral"] = not (
                bracket_space(ds[m], ds[n]) <= z
            )
    ok, details = _all(checks)
    return "holds", ok, details, {}


# ---------------------------------------------------------------------------
# section 5 checks


def check_L5_1(facts, seed_space):
    a = facts.algebra
    if a.p < 3:
        return "fails:char-2", None, {"reason": "both directions need p >= 3"}, {}
    n2 = facts.n2.space
    v1 = invariant_orbit_closure(seed_space, facts.sqzero_auts)
    dir1 = bracket_space(n2, v1) <= v1
    v2 = bracket_closure(seed_space, n2)
    dir2, wit = is_invariant(v2, facts.sqzero_auts)
    checks = {"invariant_implies_bracket_stable": dir1, "bracket_stable_implies_invariant": dir2}
    ok, details = _all(checks)
    witnesses = {}
    if not dir2 and wit is not None:
        witnesses["violating_unit"] = _coords(wit[0].u)
        witnesses["violating_basis_element"] = _coords(wit[1])
    return "holds", ok, details, witnesses


def _five_way(facts, v, induced_auts, induced_name):
    conditions = {}
    unit_auts = facts.unit_auts
    if isinstance(unit_auts, BudgetExceeded):
        return None
    inv_all, _ = is_invariant(v, unit_auts)
    inv_induced, _ = is_invariant(v, induced_auts)
    conditions["invariant_under_all_inner"] = inv_all
    conditions[f"invariant_under_{induced_name}"] = inv_induced
    conditions["contains_commutators"] = facts.comm <= v
    conditions["lie_ideal"] = is_lie_ideal(v)
    conditions["rr_submodule"] = is_rr_submodule(v)
    return conditions


def check_T5_2(facts, v):
    a = facts.algebra
    if a.p < 3:
        hyp = "fails:char-2"
    elif not facts.comm_in_n2:
        hyp = "fails:commutators-not-in-n2span"
    elif not facts.nonexc_cofinal:
        hyp = "fails:nonexceptional-cofinal"
    else:
        hyp = "holds"
    if hyp != "holds":
        return hyp, None, {}, {}
    conditions = _five_way(facts, v, facts.sqzero_auts, "square_zero_induced")
    if conditions is None:
        return "skipped:budget", None, {"reason": "unit enumeration over budget"}, {}
    ok, details = _tfae(conditions)
    return hyp, ok, details, {}


def check_T5_6(facts, v):
    a = facts.algebra
    if a.p <= a.dim:
        hyp = "fails:field-too-small"
    elif not facts.comm_in_nspan:
        hyp = "fails:commutators-not-in-nilpotent-span"
    elif not facts.nonexc_cofinal:
        hyp = "fails:nonexceptional-cofinal"
    else:
        hyp = "holds"
    if hyp != "holds":
        return hyp, None, {}, {}
    conditions = _five_way(facts, v, facts.nilpotent_auts, "nilpotent_induced")
    if conditions is None:
        return "skipped:budget", None, {"reason": "unit enumeration over budget"}, {}
    ok, details = _tfae(conditions)
    return hyp, ok, details, {}


def check_L5_3(facts, x, seed_space):
    a = facts.algebra
    k = nilpotency_index(a, x)
    auts = scalar_multiple_units(a, x)
    v = invariant_orbit_closure(seed_space, auts)
    verdict, reason = vandermonde_bracket_check(v, x)
    if verdict is None:
        return "skipped:hypothesis", None, {"reason": reason, "index": k}, {}
    details = {"index": k, "orbit_dim": v.dim}
    witnesses = {} if verdict else {"nilpotent": _coords(x), "subspace": _gens(v)}
    return "holds", verdict, details, witnesses


def check_P5_4(facts):
    a = facts.algebra
    if a.p <= a.dim:
        return "fails:field-too-small", None, {"reason": "needs p > dim"}, {}
    scan = nilpotent_elements(a, facts.budgets.elements)
    nspan = facts.nspan.space
    rows = scan.rows
    ok = True
    witness = {}
    for x in rows:
        xy = a.batch_mul(np.repeat(x[None, :], rows.shape[0], axis=0), rows)
        yx = a.batch_mul(rows, np.repeat(x[None, :], rows.shape[0], axis=0))
        br = (xy - yx) % a.p
        red = nspan.reduce_rows(br)
        bad = np.nonzero(red.any(axis=1))[0]
        if bad.size:
            ok = False
            witness = {"x": _coords(x), "y": _coords(rows[int(bad[0])])}
            break
    details = {"nilpotent_count": int(rows.shape[0]), "exhaustive": scan.exhaustive}
    return "holds", ok, details, witness


def check_C5_8(facts, v):
    a = facts.algebra
    if not a.is_unital:
        return "fails:not-unital", None, {}, {}
    if a.p == 2:
        return "fails:char-2", None, {}, {}
    zpb = facts.zpb
    if isinstance(zpb, BudgetExceeded):
        return "skipped:budget", None, {"reason": "zero-product pair scan over budget"}, {}
    if not zpb.balanced:
        return "fails:not-zero-product-balanced", None, {}, {}
    unit_auts = facts.unit_auts
    if isinstance(unit_auts, BudgetExceeded):
        return "skipped:budget", None, {"reason": "unit enumeration over budget"}, {}
    inv_all, _ = is_invariant(v, unit_auts)
    conditions = {
        "lie_ideal": is_lie_ideal(v),
        "invariant_under_all_inner": inv_all,
        "contains_commutators": facts.comm <= v,
    }
    ok, details = _tfae(conditions)
    return "holds", ok, details, {}


# ---------------------------------------------------------------------------
# section 6 checks


def _fullness_with_certification(facts, space, exhaustive):
    """Fullness of a possibly sampled span: True is always certified; False
    is certified only when exhaustive or when an exhaustive superspace is
    already not full."""
    verdict = is_full(space)
    if verdict or exhaustive:
        return verdict, True
    n2_not_full = not facts.n2_full  # fn2 <= n2, and n2 is exhaustive for corpus scans
    certified = facts.n2.exhaustive and n2_not_full
    return verdict, certified


def check_L6_1(facts):
    hyp = "holds" if facts.prime_cofinal else "fails:prime-cofinal"
    fn2 = facts.fn2
    c_n2 = facts.n2_full
    c_fn2, cert2 = _fullness_with_certification(facts, fn2.space, fn2.exhaustive)
    rv = bracket_space(facts.whole, fn2.space)
    c_fn = is_full(rv)
    cert3 = c_fn or fn2.exhaustive or (facts.n2.exhaustive and not facts.n2_full)
    if not (cert2 and cert3):
        return "skipped:budget-inconclusive", None, {"reason": "sampled fn2 span too small"}, {}
    conditions = {
        "n2_full": c_n2,
        "fn2_full": c_fn2,
        "fn2_fully_noncentral": c_fn,
    }
    ok, details = _tfae(conditions)
    details["fn2_exhaustive"] = fn2.exhaustive
    witnesses = {} if ok else {
        "n2_span": _gens(facts.n2.space),
        "fn2_span": _gens(fn2.space),
    }
    return hyp, ok, details, witnesses


def check_T6_2(facts):
    if not facts.nonexc_cofinal:
        hyp = "fails:nonexceptional-cofinal"
    elif not facts.comm_in_n2:
        hyp = "fails:commutators-not-in-n2span"
    elif not facts.n2_full:
        hyp = "fails:n2-not-full"
    else:
        hyp = "holds"
    fn2 = facts.fn2
    equal = fn2.space == facts.comm
    details = {
        "fn2_dim": fn2.space.dim,
        "commutator_dim": facts.comm.dim,
        "fn2_exhaustive": fn2.exhaustive,
        "fn2_proper_in_n2": bool(fn2.exhaustive and fn2.space < facts.n2.space),
    }
    if hyp != "holds":
        # neutral outcome report for exceptional-cofinal algebras (open question)
        if (
            hyp == "fails:nonexceptional-cofinal"
            and facts.exceptional_cofinal
            and facts.comm_in_n2
            and facts.n2_full
            and (equal or fn2.exhaustive)
        ):
            details["outcome_under_exceptional_cofinality"] = bool(equal)
        return hyp, None, details, {}
    if not equal and not fn2.exhaustive:
        return "skipped:budget-inconclusive", None, details, {}
    witnesses = {} if equal else {
        "fn2_span": _gens(fn2.space),
        "commutator_subspace": _gens(facts.comm),
    }
    return hyp, equal, details, witnesses


def check_C6_4(facts):
    if not facts.nonexc_cofinal:
        hyp = "fails:nonexceptional-cofinal"
    elif not facts.comm_full:
        hyp = "fails:commutators-not-full"
    else:
        hyp = "holds"
    if hyp != "holds":
        return hyp, None, {}, {}
    fn2 = facts.fn2
    cond1 = facts.comm_in_n2
    cond2 = fn2.space == facts.comm
    if cond1 != cond2 and not fn2.exhaustive and not cond2:
        return "skipped:budget-inconclusive", None, {"reason": "sampled fn2 span too small"}, {}
    ok, details = _tfae({"commutators_in_n2span": cond1, "commutators_equal_fn2span": cond2})
    details["fn2_exhaustive"] = fn2.exhaustive
    witnesses = {} if ok else {
        "fn2_span": _gens(fn2.space),
        "n2_span": _gens(facts.n2.space),
        "commutator_subspace": _gens(facts.comm),
    }
    return hyp, ok, details, witnesses


# ---------------------------------------------------------------------------
# registry and runner


@dataclass(frozen=True)
class TheoremSpec:
    theorem_id: str
    mode: str  # algebra | sample | seed-sample | pair | nilpotent | quotient-sample
    fn: object
    prep: str | None = None  # raw | lie | submodule | fn  (sample mode only)
    eval_on_fail: bool = False


def _gate_status(theorem_id, facts):
    """Algebra-level hypothesis status for a theorem (sample-level parts are
    re-derived inside the check functions)."""
    a = facts.algebra
    if theorem_id in ("T2.3", "C2.5", "L2.6", "C2.8", "L3.4", "P3.2", "P4.2"):
        return "holds"
    if theorem_id == "T3.5":
        if not facts.prime_cofinal:
            return "fails:prime-cofinal"
        return "holds" if facts.comm_full else "fails:commutators-not-full"
    if theorem_id == "C3.6":
        return "holds" if facts.maximal_cofinal else "fails:maximal-cofinal"
    if theorem_id in ("C3.7", "L6.1"):
        return "holds" if facts.prime_cofinal else "fails:prime-cofinal"
    if theorem_id in ("C4.6", "C4.7", "T4.8"):
        return "holds" if facts.nonexc_cofinal else "fails:nonexceptional-cofinal"
    if theorem_id == "T4.5":
        if not facts.nonexc_cofinal:
            return "fails:nonexceptional-cofinal"
        return "holds" if facts.comm_full else "fails:commutators-not-full"
    if theorem_id == "L4.4":
        if facts.spectrum.nonexceptional_primes():
            return "holds"
        return "fails:no-nonexceptional-prime"
    if theorem_id == "L5.1":
        return "holds" if a.p >= 3 else "fails:char-2"
    if theorem_id == "T5.2":
        if a.p < 3:
            return "fails:char-2"
        if not facts.comm_in_n2:
            return "fails:commutators-not-in-n2span"
        return "holds" if facts.nonexc_cofinal else "fails:nonexceptional-cofinal"
    if theorem_id == "L5.3":
        return "holds" if a.p >= 3 else "skipped:hypothesis"
    if theorem_id == "P5.4":
        return "holds" if a.p > a.dim else "fails:field-too-small"
    if theorem_id == "T5.6":
        if a.p <= a.dim:
            return "fails:field-too-small"
        if not facts.comm_in_nspan:
            return "fails:commutators-not-in-nilpotent-span"
        return "holds" if facts.nonexc_cofinal else "fails:nonexceptional-cofinal"
    if theorem_id == "C5.8":
        if not a.is_unital:
            return "fails:not-unital"
        if a.p == 2:
            return "fails:char-2"
        zpb = facts.zpb
        if isinstance(zpb, BudgetExceeded):
            return "skipped:budget"
        return "holds" if zpb.balanced else "fails:not-zero-product-balanced"
    if theorem_id == "T6.2":
        if not facts.nonexc_cofinal:
            return "fails:nonexceptional-cofinal"
        if not facts.comm_in_n2:
            return "fails:commutators-not-in-n2span"
        return "holds" if facts.n2_full else "fails:n2-not-full"
    if theorem_id == "C6.4":
        if not facts.nonexc_cofinal:
            return "fails:nonexceptional-cofinal"
        return "holds" if facts.comm_full else "fails:commutators-not-full"
    raise KeyError(f"unknown theorem id {theorem_id!r}")


THEOREMS = {
    s.theorem_id: s
    for s in (
        TheoremSpec("T2.3", "sample", check_T2_3, prep="raw"),
        TheoremSpec("C2.5", "sample", check_C2_5, prep="lie"),
        TheoremSpec("L2.6", "sample", check_L2_6, prep="submodule"),
        TheoremSpec("C2.8", "sample", check_C2_8, prep="submodule"),
        TheoremSpec("P3.2", "algebra", check_P3_2),
        TheoremSpec("L3.4", "sample", check_L3_4, prep="lie"),
        TheoremSpec("T3.5", "sample", check_T3_5, prep="lie"),
        TheoremSpec("C3.6", "sample", check_C3_6, prep="lie"),
        TheoremSpec("C3.7", "algebra", check_C3_7),
        TheoremSpec("P4.2", "algebra", check_P4_2),
        TheoremSpec("L4.4", "quotient-sample", check_L4_4),
        TheoremSpec("T4.5", "sample", check_T4_5, prep="submodule", eval_on_fail=True),
        TheoremSpec("C4.6", "sample", check_C4_6, prep="fn", eval_on_fail=True),
        TheoremSpec("C4.7", "algebra", check_C4_7),
        TheoremSpec("T4.8", "pair", check_T4_8),
        TheoremSpec("L5.1", "seed-sample", check_L5_1),
        TheoremSpec("T5.2", "sample", check_T5_2, prep="fn"),
        TheoremSpec("L5.3", "nilpotent", check_L5_3),
        TheoremSpec("P5.4", "algebra", check_P5_4),
        TheoremSpec("T5.6", "sample", check_T5_6, prep="fn"),
        TheoremSpec("C5.8", "sample", check_C5_8, prep="fn"),
        TheoremSpec("L6.1", "algebra", check_L6_1),
        TheoremSpec("T6.2", "algebra", check_T6_2),
        TheoremSpec("C6.4", "algebra", check_C6_4),
    )
}

ALL_THEOREM_IDS = tuple(THEOREMS)


def _verdict(theorem_id, algebra_id, hyp, ok, details, witnesses, index=None, kind=None, t0=None):
    if ok is None:
        conclusion = None
    else:
        conclusion = "verified" if ok else "counterexample"
    wall = 0.0 if t0 is None else (time.perf_counter() - t0) * 1000.0
    return TheoremVerdict(
        theorem_id=theorem_id,
        algebra_id=algebra_id,
        hypothesis_status=hyp,
        conclusion_status=conclusion,
        sample_index=index,
        sample_kind=kind,
        details=details,
        witnesses=witnesses,
        wall_ms=wall,
    )


def _fn_kind_cycle(sampler, index):
    kinds = [k for k in sampler.kinds]
    return kinds[index % len(kinds)]


def _prep_sample(spec, facts, sampler, algebra_id, index):
    """Produce (subspace, kind_label, attempts) for one indexed sample, or
    (None, kind_label, attempts) when rejection sampling failed."""
    a = facts.algebra
    tid = spec.theorem_id
    if spec.prep == "raw":
        return sampler.raw(a, algebra_id, tid, index), "raw", 1
    if spec.prep == "lie":
        return lie_closure(sampler.raw(a, algebra_id, tid, index)), "lie-closure", 1
    if spec.prep == "submodule":
        return submodule_closure(sampler.raw(a, algebra_id, tid, index)), "submodule-closure", 1
    if spec.prep == "fn":
        kind = _fn_kind_cycle(sampler, index)
        auts = None
        if kind == "invariant-orbit":
            auts = facts.unit_auts
            if isinstance(auts, BudgetExceeded):
                kind, auts = "lie-closure", None
        v, attempts = fully_noncentral_sample(a, sampler, algebra_id, tid, index, kind, auts)
        return v, f"fn:{kind}", attempts
    raise ValueError(f"unknown prep {spec.prep!r}")


def _emit_sample_verdicts(spec, facts, sampler, algebra_id, gate, distinguished):
    tid = spec.theorem_id
    verdicts = []
    requested = 0
    qualified = 0
    jobs = []
    for name, v in distinguished:
        if spec.prep == "lie":
            v2, label = lie_closure(v), f"distinguished:{name}"
        elif spec.prep == "submodule":
            v2, label = submodule_closure(v), f"distinguished:{name}"
        elif spec.prep == "fn":
            if not is_fully_noncentral(v):
                continue
            v2, label = v, f"distinguished:{name}"
        else:
            v2, label = v, f"distinguished:{name}"
        jobs.append((None, v2, label))
    for index in range(sampler.count):
        requested += 1
        v, label, _ = _prep_sample(spec, facts, sampler, algebra_id, index)
        if v is None:
            continue
        jobs.append((index, v, label))
    qualified = sum(1 for index, _, _ in jobs if index is not None)
    for index, v, label in jobs:
        t0 = time.perf_counter()
        hyp, ok, details, witnesses = spec.fn(facts, v)
        if ok is not None and not ok:
            witnesses = dict(witnesses)
            witnesses.setdefault("sample", _gens(v))
        verdicts.append(_verdict(tid, algebra_id, hyp, ok, details, witnesses, index, label, t0))
    if spec.prep == "fn" and sampler.count > 0 and not jobs:
        verdicts.append(
            _verdict(tid, algebra_id, "skipped:no-qualifying-sample", None, {}, {})
        )
    stats = {"algebra_id": algebra_id, "theorem_id": tid, "requested": requested, "qualified": qualified}
    return verdicts, stats


def audit_theorem(theorem_id, algebra, sampler, budgets=Budgets(), algebra_id=None, distinguished=()):
    """All verdicts of one theorem's audit on one algebra.

    Returns (verdicts, sampling_stats or None).
    """
    if theorem_id not in THEOREMS:
        raise KeyError(f"unknown theorem id {theorem_id!r}")
    spec = THEOREMS[theorem_id]
    algebra_id = algebra_id or algebra.aid or algebra.fingerprint
    facts = AlgebraFacts(algebra, budgets)
    gate = _gate_status(theorem_id, facts)

    if spec.mode == "algebra":
        t0 = time.perf_counter()
        hyp, ok, details, witnesses = spec.fn(facts)
        return [_verdict(theorem_id, algebra_id, hyp, ok, details, witnesses, t0=t0)], None

    if gate != "holds" and not spec.eval_on_fail:
        return [_verdict(theorem_id, algebra_id, gate, None, {}, {})], None

    if spec.mode == "sample":
        return _emit_sample_verdicts(spec, facts, sampler, algebra_id, gate, distinguished)

    if spec.mode == "seed-sample":
        verdicts = []
        for name, v in distinguished:
            t0 = time.perf_counter()
            hyp, ok, details, witnesses = spec.fn(facts, v)
            verdicts.append(
                _verdict(theorem_id, algebra_id, hyp, ok, details, witnesses, None,
                         f"distinguished:{name}", t0)
            )
        for index in range(sampler.count):
            seed = sampler.raw(facts.algebra, algebra_id, theorem_id, index)
            t0 = time.perf_counter()
            hyp, ok, details, witnesses = spec.fn(facts, seed)
            verdicts.append(
                _verdict(theorem_id, algebra_id, hyp, ok, details, witnesses, index, "raw", t0)
            )
        return verdicts, None

    if spec.mode == "pair":
        verdicts = []
        for index in range(sampler.count):
            k = lie_closure(sampler.raw(facts.algebra, algebra_id, f"{theorem_id}:K", index))
            ell = lie_closure(sampler.raw(facts.algebra, algebra_id, f"{theorem_id}:L", index))
            t0 = time.perf_counter()
            hyp, ok, details, witnesses = spec.fn(facts, k, ell)
            if ok is not None and not ok:
                witnesses = dict(witnesses)
                witnesses["sample_pair"] = [_gens(k), _gens(ell)]
            verdicts.append(
                _verdict(theorem_id, algebra_id, hyp, ok, details, witnesses, index,
                         "pair:lie-closure", t0)
            )
        return verdicts, None

    if spec.mode == "nilpotent":
        verdicts = []
        if sampler.count == 0:
            return [_verdict(theorem_id, algebra_id, gate, None, {}, {})], None
        scan = nilpotent_elements(facts.algebra, budgets.elements)
        reps = _projective_reps(facts.algebra, scan.rows)
        for rep_index, x in enumerate(reps):
            seed = sampler.raw(facts.algebra, algebra_id, f"{theorem_id}:orbit", rep_index)
            t0 = time.perf_counter()
            hyp, ok, details, witnesses = spec.fn(facts, x, seed)
            details = dict(details)
            details["nilpotent"] = _coords(x)
            verdicts.append(
                _verdict(theorem_id, algebra_id, hyp, ok, details, witnesses, rep_index,
                         "nilpotent-orbit", t0)
            )
        if not reps:
            verdicts.append(_verdict(theorem_id, algebra_id, "holds", True,
                                     {"nilpotent_count": 0}, {}))
        return verdicts, None

    if spec.mode == "quotient-sample":
        verdicts = []
        requested = 0
        qualified = 0
        primes = facts.spectrum.nonexceptional_primes()
        for p_index, rec in enumerate(primes):
            q, _ = quotient(facts.algebra, rec.subspace)
            qfacts = AlgebraFacts(q, budgets)
            qwhole = whole_space(q)
            any_q = 0
            for index in range(sampler.count):
                requested += 1
                v = None
                for attempt in range(FN_RETRY_CAP):
                    cand = submodule_closure(
                        sampler.raw(q, algebra_id, f"{theorem_id}:q{p_index}:{attempt}", index)
                    )
                    if not bracket_space(qwhole, cand).is_zero():
                        v = cand
                        break
                if v is None:
                    continue
                qualified += 1
                any_q += 1
                t0 = time.perf_counter()
                hyp, ok, details, witnesses = spec.fn(qfacts, v)
                details = dict(details)
                details["prime_index"] = p_index
                if ok is not None and not ok:
                    witnesses = dict(witnesses)
                    witnesses.setdefault("sample", _gens(v))
                verdicts.append(
                    _verdict(theorem_id, algebra_id, hyp, ok, details, witnesses, index,
                             f"quotient{p_index}:submodule-closure", t0)
                )
            if sampler.count > 0 and any_q == 0:
                verdicts.append(
                    _verdict(theorem_id, algebra_id, "skipped:no-qualifying-sample", None,
                             {"prime_index": p_index}, {})
                )
        stats = {"algebra_id": algebra_id, "theorem_id": theorem_id,
                 "requested": requested, "qualified": qualified}
        return verdicts, stats

    raise ValueError(f"unknown mode {spec.mode!r}")


def _projective_reps(a, rows):
    """Nonzero rows up to scalar, normalized to leading coefficient 1."""
    seen = {}
    for row in rows:
        nz = np.nonzero(row)[0]
        if nz.size == 0:
            continue
        inv = pow(int(row[nz[0]]), -1, a.p)
        norm = (row * inv) % a.p
        seen.setdefault(norm.tobytes(), norm)
    return list(seen.values())


@dataclass
class AuditReport:
    seed: int
    samples: int
    kinds: tuple
    budgets: Budgets
    theorem_ids: tuple
    corpus_manifest: list
    verdicts: list
    sampling_stats: list
    wall_ms_total: float = 0.0
    schema_version: int = 1

    def counterexamples(self):
        """Hypothesis-holding counterexamples: these make an audit fail."""
        return [
            v
            for v in self.verdicts
            if v.hypothesis_status == "holds" and v.conclusion_status == "counterexample"
        ]

    def summary(self):
        out = {
            "checks": len(self.verdicts),
            "verified": sum(1 for v in self.verdicts if v.conclusion_status == "verified"),
            "counterexamples_hypothesis_holding": len(self.counterexamples()),
            "counterexamples_hypothesis_failing": sum(
                1
                for v in self.verdicts
                if v.conclusion_status == "counterexample" and v.hypothesis_status != "holds"
            ),
            "hypothesis_failing": sum(
                1 for v in self.verdicts if v.hypothesis_status.startswith("fails")
            ),
            "skipped": sum(
                1 for v in self.verdicts if v.hypothesis_status.startswith("skipped")
            ),
        }
        return out

    def to_json_dict(self):
        return {
            "schema_version": self.schema_version,
            "kind": "ringlab-audit-report",
            "seed": self.seed,
            "samples": self.samples,
            "sampler_kinds": list(self.kinds),
            "budgets": {"elements": self.budgets.elements, "pairs": self.budgets.pairs},
            "theorems": list(self.theorem_ids),
            "corpus": self.corpus_manifest,
            "verdicts": [v.to_json_dict() for v in self.verdicts],
            "sampling_stats": self.sampling_stats,
            "summary": self.summary(),
            "timing": {"wall_ms_total": round(self.wall_ms_total, 3)},
        }


def _worker_count():
    raw = os.environ.get("RINGLAB_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n == 0:
        n = min(os.cpu_count() or 1, 8)
    return max(1, n)


def run_corpus_audit(corpus, theorem_ids=None, sampler=None, budgets=Budgets()):
    """Cross product of corpus algebras and theorem audits, deterministic.

    ``corpus`` is a sequence of entries with .aid, .algebra and
    .distinguished (mapping name -> Subspace).
    """
    sampler = sampler or SubspaceSampler()
    theorem_ids = tuple(theorem_ids) if theorem_ids else ALL_THEOREM_IDS
    for tid in theorem_ids:
        if tid not in THEOREMS:
            raise KeyError(f"unknown theorem id {tid!r}")
    t_start = time.perf_counter()
    tasks = [(entry, tid) for entry in corpus for tid in theorem_ids]

    def run_task(task):
        entry, tid = task
        distinguished = sorted(entry.distinguished.items())
        return audit_theorem(
            tid, entry.algebra, sampler, budgets, algebra_id=entry.aid,
            distinguished=distinguished,
        )

    workers = _worker_count()
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_task, tasks))
    else:
        results = [run_task(t) for t in tasks]

    verdicts = []
    stats = []
    for task_result in results:
        vs, st = task_result
        verdicts.extend(vs)
        if st is not None:
            stats.append(st)
    manifest = [
        {
            "id": entry.aid,
            "p": entry.algebra.p,
            "dim": entry.algebra.dim,
            "unital": entry.algebra.is_unital,
            "fingerprint": entry.algebra.fingerprint,
            "distinguished": sorted(entry.distinguished),
        }
        for entry in corpus
    ]
    return AuditReport(
        seed=sampler.seed,
        samples=sampler.count,
        kinds=tuple(sampler.kinds),
        budgets=budgets,
        theorem_ids=theorem_ids,
        corpus_manifest=manifest,
        verdicts=verdicts,
        sampling_stats=stats,
        wall_ms_total=(time.perf_counter() - t_start) * 1000.0,
    )
