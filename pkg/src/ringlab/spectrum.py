"""Two-sided ideal lattice of a finite algebra with maximal / prime /
exceptional-prime classification, ring idempotency, the degree-4 standard
polynomial span, and the cofinality hypotheses built from them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import kernels
from .algebras import Algebra, quotient, unitize
from .errors import BudgetExceeded, Budgets
from .subspaces import (
    Subspace,
    bracket_space,
    ideal_closure,
    is_full,
    product_space,
    span,
    whole_space,
    zero_space,
)


@dataclass(frozen=True)
class IdealRecord:
    """A two-sided ideal with its classification certificates."""

    subspace: Subspace
    is_proper: bool
    is_maximal: bool
    is_prime: bool
    is_exceptional: bool | None  # defined only for primes

    @property
    def dim(self):
        return self.subspace.dim


@dataclass(frozen=True)
class SpectrumReport:
    ideals: tuple
    lattice_complete: bool

    def proper(self):
        return [r for r in self.ideals if r.is_proper]

    def primes(self):
        return [r for r in self.ideals if r.is_prime]

    def maximals(self):
        return [r for r in self.ideals if r.is_maximal]

    def exceptional_primes(self):
        return [r for r in self.ideals if r.is_prime and r.is_exceptional]

    def nonexceptional_primes(self):
        return [r for r in self.ideals if r.is_prime and not r.is_exceptional]


def _principal_ideals(a: Algebra, element_budget):
    """Canonical closures of all principal ideals, deduplicated.

    Returns (subspaces, complete). When the element count exceeds the budget
    the generators are a deterministic seeded sample and complete=False.
    """
    n = a.element_count()
    complete = n <= element_budget
    seen = {}
    if complete:
        chunks = range(0, n, 4096)
        blocks = (a.coords_block(s, min(4096, n - s)) for s in chunks)
    else:
        rng = np.random.default_rng(int(a.fingerprint, 16) % (2**32))
        count = int(min(element_budget, 4096))
        blocks = [
            np.zeros((1, a.dim), dtype=np.int64),
            rng.integers(0, a.p, size=(count, a.dim), dtype=np.int64),
        ]
    for block in blocks:
        for row in block:
            cl = ideal_closure(Subspace(a, row))
            seen.setdefault(cl.basis_array.tobytes(), cl)
    spaces = list(seen.values())
    return spaces, complete


def ideal_lattice(a: Algebra, budgets: Budgets = Budgets()) -> SpectrumReport:
    """All two-sided ideals (principal closures + join fixpoint), classified.

    Cached per (algebra, budgets).
    """
    key = ("ideal_lattice", budgets)
    if key in a._cache:
        return a._cache[key]
    spaces, complete = _principal_ideals(a, budgets.elements)
    by_key = {s.basis_array.tobytes(): s for s in spaces}
    by_key.setdefault(zero_space(a).basis_array.tobytes(), zero_space(a))
    frontier = list(by_key.values())
    while frontier:
        fresh = []
        current = list(by_key.values())
        for u in frontier:
            for v in current:
                w = u + v
                k = w.basis_array.tobytes()
                if k not in by_key:
                    by_key[k] = w
                    fresh.append(w)
        frontier = fresh
    ideals = sorted(by_key.values(), key=lambda s: (s.dim, s.basis_array.tobytes()))
    records = _classify(a, ideals, budgets)
    report = SpectrumReport(tuple(records), complete)
    a._cache[key] = report
    return report


def _classify(a, ideals, budgets):
    dims = [s.dim for s in ideals]
    records = []
    for s in ideals:
        proper = s.dim < a.dim
        maximal = proper and not any(
            other.dim > s.dim and other.dim < a.dim and s <= other for other in ideals
        )
        if proper:
            try:
                prime = is_prime_ideal(a, s, budgets)
            except BudgetExceeded:
                prime = _lattice_is_prime(a, s, ideals)
        else:
            prime = False
        exceptional = None
        if prime:
            exceptional = is_exceptional_prime(a, s, budgets, _pretested=True)
        records.append(IdealRecord(s, proper, maximal, prime, exceptional))
    return records


def is_prime_ideal(a: Algebra, i: Subspace, budgets: Budgets = Budgets()) -> bool:
    """Elementwise primality of the quotient Q = a / i.

    Q is prime iff for all nonzero x, y in Q some r in the unitization of Q
    has x r y != 0. The r-quantifier is linear, so it is evaluated on a
    basis of the unitization; the y-quantifier is a kernel computation per x.
    Raises BudgetExceeded when |Q|^2 exceeds the pair budget.
    """
    if not i.algebra == a:
        raise ValueError("ideal belongs to a different algebra")
    from .subspaces import is_two_sided_ideal

    if not is_two_sided_ideal(i):
        raise ValueError("subspace is not a two-sided ideal")
    q, _ = quotient(a, i)
    if q.dim == 0:
        return False
    pairs = q.element_count() ** 2
    if pairs > budgets.pairs:
        raise BudgetExceeded("primality pair scan", pairs, budgets.pairs)
    return _prime_scan(q) is None


def _prime_scan(q: Algebra):
    """Witness (x, y) with x Q~ y = 0, x, y != 0; None when q is prime."""
    n = q.element_count()
    d = q.dim
    for start in range(1, n, 4096):
        block = q.coords_block(start, min(4096, n - start))
        for x in block:
            mats = [q.left_mult_matrix(q.mul_coords(x, e)) for e in np.eye(d, dtype=np.int64)]
            if not q.is_unital:
                mats.append(q.left_mult_matrix(x))
            ker = kernels.nullspace(np.concatenate(mats, axis=0), q.p)
            if ker.shape[0]:
                return x, ker[0]
    return None


def _lattice_is_prime(a, i, ideals):
    """Lattice-based primality: JK <= i forces J <= i or K <= i."""
    if i.dim == a.dim:
        return False
    for j in ideals:
        for k in ideals:
            jk = product_space(j, k)
            if jk <= i and not (j <= i) and not (k <= i):
                return False
    return True


def lattice_is_prime(a: Algebra, i: Subspace, budgets: Budgets = Budgets()) -> bool:
    """Cross-check oracle for is_prime_ideal, over the computed lattice."""
    report = ideal_lattice(a, budgets)
    return _lattice_is_prime(a, i, [r.subspace for r in report.ideals])


def _sign(perm):
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


_PERMS4 = None


def _perms4():
    global _PERMS4
    if _PERMS4 is None:
        from itertools import permutations

        _PERMS4 = [(p, _sign(p)) for p in permutations(range(4))]
    return _PERMS4


def s4_eval(a: Algebra, quadruple):
    """s4 on four coordinate rows: the signed sum over all permutations."""
    rows = [np.asarray(x, dtype=np.int64) for x in quadruple]
    acc = np.zeros(a.dim, dtype=np.int64)
    for perm, sg in _perms4():
        m = rows[perm[0]]
        for k in perm[1:]:
            m = a.mul_coords(m, rows[k])
        acc = (acc + sg * m) % a.p
    return acc


def s4_span(a: Algebra) -> Subspace:
    """Span of s4 on basis quadruples.

    s4 is multilinear and alternating (it vanishes on repeated arguments
    over any ring), so strictly increasing basis 4-tuples span the full
    image. Cached per algebra.
    """
    key = "s4_span"
    if key not in a._cache:
        eye = np.eye(a.dim, dtype=np.int64)
        vals = [s4_eval(a, [eye[i] for i in tup]) for tup in combinations(range(a.dim), 4)]
        a._cache[key] = span(a, vals) if vals else zero_space(a)
    return a._cache[key]


def s4_span_scan(a: Algebra) -> Subspace:
    """Oracle: s4 span over all dim^4 basis tuples."""
    eye = np.eye(a.dim, dtype=np.int64)
    vals = []
    from itertools import product as iproduct

    for tup in iproduct(range(a.dim), repeat=4):
        vals.append(s4_eval(a, [eye[i] for i in tup]))
    return span(a, vals) if vals else zero_space(a)


def is_exceptional_prime(a: Algebra, p_ideal: Subspace, budgets: Budgets = Budgets(), _pretested=False) -> bool:
    """True iff the (prime) quotient has characteristic 2 and kills s4."""
    if not _pretested and not is_prime_ideal(a, p_ideal, budgets):
        raise ValueError("ideal is not prime")
    if a.p != 2:
        return False
    q, _ = quotient(a, p_ideal)
    return s4_span(q).is_zero()


def is_idempotent_ring(a: Algebra) -> bool:
    """R = R^2."""
    w = whole_space(a)
    return product_space(w, w).dim == a.dim


def two_r_plus_s4_ideal(a: Algebra) -> Subspace:
    """The ideal 2R + <s4(R)> (2R is R for odd p and 0 for p = 2)."""
    closure = ideal_closure(s4_span(a))
    if a.p != 2:
        return whole_space(a)
    return closure


def is_prime_cofinal(a: Algebra, budgets: Budgets = Budgets()) -> bool:
    """Every proper ideal is contained in a prime ideal."""
    report = ideal_lattice(a, budgets)
    primes = report.primes()
    return all(any(r.subspace <= q.subspace for q in primes) for r in report.proper())


def is_maximal_cofinal(a: Algebra, budgets: Budgets = Budgets()) -> bool:
    """Every proper ideal is contained in a maximal ideal (automatic for
    finite algebras; computed, not assumed)."""
    report = ideal_lattice(a, budgets)
    maxi = report.maximals()
    return all(any(r.subspace <= m.subspace for m in maxi) for r in report.proper())


def hypothesis_nonexceptional_cofinal(a: Algebra, budgets: Budgets = Budgets()):
    """Direct lattice check of "every proper ideal lies under a
    non-exceptional prime", cross-validated against the
    R = 2R + <s4> criterion combined with prime cofinality.

    Returns (verdict, witness, details); witness is a violating proper
    ideal when the verdict is False.
    """
    report = ideal_lattice(a, budgets)
    nonexc = report.nonexceptional_primes()
    witness = None
    for r in report.proper():
        if not any(r.subspace <= q.subspace for q in nonexc):
            witness = r.subspace
            break
    direct = witness is None
    formula = two_r_plus_s4_ideal(a).dim == a.dim and is_prime_cofinal(a, budgets)
    details = {
        "direct": direct,
        "formula_2r_s4_full_and_prime_cofinal": formula,
        "agree": direct == formula,
    }
    return direct, witness, details


def check_max_vs_prime(a: Algebra, budgets: Budgets = Budgets()):
    """Instance check of the maximal-vs-prime implication diagram.

    Verifies, on this algebra: prime-cofinality implies idempotency;
    idempotency implies every maximal ideal is prime; and (maximal
    cofinality and maximal-implies-prime) imply prime-cofinality.
    """
    report = ideal_lattice(a, budgets)
    prime_cof = is_prime_cofinal(a, budgets)
    max_cof = is_maximal_cofinal(a, budgets)
    idem = is_idempotent_ring(a)
    maximals_prime = all(r.is_prime for r in report.maximals())
    results = {
        "prime_cofinal": prime_cof,
        "maximal_cofinal": max_cof,
        "idempotent": idem,
        "maximals_prime": maximals_prime,
        "impl_prime_cofinal_implies_idempotent": (not prime_cof) or idem,
        "impl_idempotent_implies_maximals_prime": (not idem) or maximals_prime,
        "impl_max_prime_and_max_cofinal_implies_prime_cofinal": (
            not (maximals_prime and max_cof)
        )
        or prime_cof,
    }
    results["all_implications_hold"] = (
        results["impl_prime_cofinal_implies_idempotent"]
        and results["impl_idempotent_implies_maximals_prime"]
        and results["impl_max_prime_and_max_cofinal_implies_prime_cofinal"]
    )
    return results


def exceptional_remark_agrees(a: Algebra, budgets: Budgets = Budgets()) -> bool:
    """Cross-check: a prime quotient is exceptional iff its 2Q + <s4(Q)>
    ideal vanishes. Reported (never resolved) if the two ever disagree."""
    report = ideal_lattice(a, budgets)
    for rec in report.primes():
        q, _ = quotient(a, rec.subspace)
        if bool(rec.is_exceptional) != two_r_plus_s4_ideal(q).is_zero():
            return False
    return True
