"""Square-zero and nilpotent machinery: element scans and spans, the
orthogonally-factorizable square-zero span, inner automorphisms (general,
square-zero-induced, nilpotent-induced), invariance checks, zero-product
balance, and the Vandermonde-gated bracket check.

Every scan is budget-gated with a fixed-seed random fallback, and every
result carries an ``exhaustive`` flag.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .algebras import Algebra, AlgebraElement, unitize
from .errors import BudgetExceeded, Budgets
from .subspaces import (
    Subspace,
    bracket_space,
    commutator_subspace,
    is_full,
    span,
    whole_space,
    zero_space,
)

_CHUNK = 4096


def _scan_rng(a: Algebra, tag: str):
    return np.random.default_rng((int(a.fingerprint, 16) ^ zlib.crc32(tag.encode())) % (2**32))


def _element_blocks(a: Algebra, budget, tag):
    """Chunked element coordinate blocks: exhaustive within budget, else a
    fixed-seed random sample of `budget` rows. Yields (block, exhaustive)."""
    n = a.element_count()
    if n <= budget:
        for s in range(0, n, _CHUNK):
            yield a.coords_block(s, min(_CHUNK, n - s)), True
    else:
        rng = _scan_rng(a, tag)
        remaining = int(budget)
        while remaining > 0:
            take = min(_CHUNK, remaining)
            yield rng.integers(0, a.p, size=(take, a.dim), dtype=np.int64), False
            remaining -= take


@dataclass(frozen=True)
class ElementScan:
    """Elements collected by a predicate scan."""

    rows: np.ndarray
    exhaustive: bool

    def elements(self, a):
        return [AlgebraElement(a, r) for r in self.rows]

    def __len__(self):
        return self.rows.shape[0]


@dataclass(frozen=True)
class SpanResult:
    space: Subspace
    exhaustive: bool
    witnesses: tuple = ()


def square_zero_elements(a: Algebra, budget=Budgets().elements) -> ElementScan:
    """All x with x^2 = 0 (exhaustive within budget, sampled otherwise)."""
    key = ("square_zero_elements", budget)
    if key in a._cache:
        return a._cache[key]
    found = []
    exhaustive = True
    for block, exact in _element_blocks(a, budget, "n2"):
        exhaustive &= exact
        sq = a.batch_mul(block, block)
        mask = ~sq.any(axis=1)
        if mask.any():
            found.append(block[mask])
    rows = np.concatenate(found) if found else np.zeros((0, a.dim), dtype=np.int64)
    result = ElementScan(rows, exhaustive)
    a._cache[key] = result
    return result


def n2_span(a: Algebra, budget=Budgets().elements) -> SpanResult:
    scan = square_zero_elements(a, budget)
    return SpanResult(Subspace(a, scan.rows), scan.exhaustive)


def nilpotency_index(a: Algebra, x) -> int | None:
    """Least k with x^k = 0, or None when x is not nilpotent.

    x is nilpotent iff x^(dim+1) = 0: its powers live in the subalgebra it
    generates, of dimension at most dim.
    """
    coords = x.coords if isinstance(x, AlgebraElement) else np.asarray(x, dtype=np.int64)
    if not coords.any():
        return 1
    acc = coords
    for k in range(2, a.dim + 2):
        acc = a.mul_coords(acc, coords)
        if not acc.any():
            return k
    return None


def nilpotent_elements(a: Algebra, budget=Budgets().elements) -> ElementScan:
    """All nilpotent x (tested via x^(dim+1) = 0), budget-gated."""
    key = ("nilpotent_elements", budget)
    if key in a._cache:
        return a._cache[key]
    found = []
    exhaustive = True
    for block, exact in _element_blocks(a, budget, "nil"):
        exhaustive &= exact
        acc = block
        for _ in range(a.dim):
            acc = a.batch_mul(acc, block)
        mask = ~acc.any(axis=1)
        if mask.any():
            found.append(block[mask])
    rows = np.concatenate(found) if found else np.zeros((0, a.dim), dtype=np.int64)
    result = ElementScan(rows, exhaustive)
    a._cache[key] = result
    return result


def nilpotent_span(a: Algebra, budget=Budgets().elements) -> SpanResult:
    scan = nilpotent_elements(a, budget)
    return SpanResult(Subspace(a, scan.rows), scan.exhaustive)


def fn2_span(a: Algebra, pair_budget=Budgets().pairs) -> SpanResult:
    """Span of {y z : z y = 0}, with a witness pair (y, z) per generator.

    Exhaustive when |A|^2 fits the pair budget: for each y the right
    annihilator {z : z y = 0} is a kernel, and its image under left
    multiplication by y spans y's contribution exactly. Otherwise a
    fixed-seed pair sample is used and the result is a certified subspan.
    """
    key = ("fn2_span", pair_budget)
    if key in a._cache:
        return a._cache[key]
    n = a.element_count()
    gens = []
    witnesses = []
    current = zero_space(a)
    if n * n <= pair_budget:
        exhaustive = True
        for block, _ in _element_blocks(a, n, "fn2"):
            for y in block:
                ann = kernels.nullspace(a.right_mult_matrix(y), a.p)  # rows z: z y = 0
                if ann.shape[0] == 0:
                    continue
                prods = a.batch_mul(np.repeat(y[None, :], ann.shape[0], axis=0), ann)
                for z, x in zip(ann, prods):
                    if x.any() and not current.contains_row(x):
                        gens.append(x)
                        witnesses.append((y.copy(), z.copy()))
                        current = Subspace(a, np.asarray(gens, dtype=np.int64))
    else:
        exhaustive = False
        rng = _scan_rng(a, "fn2-pairs")
        remaining = int(pair_budget)
        stable = 0
        while remaining > 0 and stable < 8:
            take = min(_CHUNK, remaining)
            ys = rng.integers(0, a.p, size=(take, a.dim), dtype=np.int64)
            zs = rng.integers(0, a.p, size=(take, a.dim), dtype=np.int64)
            remaining -= take
            zy = a.batch_mul(zs, ys)
            mask = ~zy.any(axis=1)
            before = current.dim
            if mask.any():
                yz = a.batch_mul(ys[mask], zs[mask])
                for y, z, x in zip(ys[mask], zs[mask], yz):
                    if x.any() and not current.contains_row(x):
                        gens.append(x)
                        witnesses.append((y.copy(), z.copy()))
                        current = Subspace(a, np.asarray(gens, dtype=np.int64))
            stable = stable + 1 if current.dim == before else 0
    result = SpanResult(current, exhaustive, tuple(witnesses))
    a._cache[key] = result
    return result


@dataclass(frozen=True)
class InnerAutomorphism:
    """Conjugation by an invertible element of the unitization."""

    unitization: object
    u: np.ndarray
    u_inv: np.ndarray
    tag: str = ""
    _matrix: list = field(default_factory=list, compare=False, repr=False)

    def conjugation_matrix(self):
        """Matrix M on the unitization with M @ x = coords(u x u^-1)."""
        if not self._matrix:
            amb = self.unitization.result
            m = (amb.left_mult_matrix(self.u) @ amb.right_mult_matrix(self.u_inv)) % amb.p
            self._matrix.append(m)
        return self._matrix[0]

    def apply_rows(self, rows):
        """Conjugate base-algebra coordinate rows."""
        uz = self.unitization
        emb = uz.embed_rows(np.atleast_2d(rows))
        out = (emb @ self.conjugation_matrix().T) % uz.result.p
        return uz.project_rows(out)

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(x.algebra, self.apply_rows(x.coords)[0])


def _make_aut(uz, u, u_inv, tag=""):
    amb = uz.result
    prod = amb.mul_coords(u, u_inv)
    prod2 = amb.mul_coords(u_inv, u)
    unit = amb.unit.coords
    if not ((prod == unit).all() and (prod2 == unit).all()):
        raise AssertionError("inner automorphism pair fails u * u_inv = 1")
    return InnerAutomorphism(uz, u.copy(), u_inv.copy(), tag)


def inner_automorphisms(a: Algebra, budget=Budgets().elements):
    """All inner automorphisms: conjugation by every invertible element of
    the unitization. Raises BudgetExceeded when the unitization is too big.
    Cached per (algebra, budget)."""
    key = ("inner_automorphisms", budget)
    if key in a._cache:
        return a._cache[key]
    uz = unitize(a)
    amb = uz.result
    n = amb.element_count()
    if n > budget:
        raise BudgetExceeded("unit enumeration", n, budget)
    unit = amb.unit.coords
    auts = []
    for block, _ in _element_blocks(amb, n, "units"):
        for u in block:
            x = kernels.solve(amb.left_mult_matrix(u), unit, amb.p)
            if x is None:
                continue
            # left inverse of a left-invertible element in a finite-dim
            # unital algebra is two-sided; verified in _make_aut anyway
            auts.append(_make_aut(uz, u, x, "unit"))
    a._cache[key] = tuple(auts)
    return a._cache[key]


def sq_zero_units(a: Algebra, budget=Budgets().elements):
    """Automorphisms induced by square-zero x: u = 1 + x, u^-1 = 1 - x."""
    key = ("sq_zero_units", budget)
    if key in a._cache:
        return a._cache[key]
    uz = unitize(a)
    amb = uz.result
    unit = amb.unit.coords
    scan = square_zero_elements(a, budget)
    auts = []
    for x in scan.rows:
        emb = uz.embed_rows(x[None, :])[0]
        auts.append(_make_aut(uz, (unit + emb) % amb.p, (unit - emb) % amb.p, "sq0"))
    a._cache[key] = tuple(auts)
    return a._cache[key]


def nilpotent_units(a: Algebra, budget=Budgets().elements):
    """Automorphisms induced by nilpotent x with x^k = 0:
    u = 1 + x + ... + x^(k-1), u^-1 = 1 - x."""
    key = ("nilpotent_units", budget)
    if key in a._cache:
        return a._cache[key]
    uz = unitize(a)
    amb = uz.result
    unit = amb.unit.coords
    scan = nilpotent_elements(a, budget)
    auts = []
    for x in scan.rows:
        emb = uz.embed_rows(x[None, :])[0]
        u = unit.copy()
        power = emb.copy()
        while power.any():
            u = (u + power) % amb.p
            power = amb.mul_coords(power, emb)
        auts.append(_make_aut(uz, u, (unit - emb) % amb.p, "nil"))
    a._cache[key] = tuple(auts)
    return a._cache[key]


def is_invariant(v: Subspace, auts):
    """Check u b u^-1 in v for every basis b and every automorphism.

    Returns (verdict, witness); witness is a violating (aut, basis row).
    """
    if v.is_zero():
        return True, None
    for aut in auts:
        conj = aut.apply_rows(v.basis_array)
        red = v.reduce_rows(conj)
        bad = np.nonzero(red.any(axis=1))[0]
        if bad.size:
            return False, (aut, v.basis_array[int(bad[0])])
    return True, None


@dataclass(frozen=True)
class ZpbResult:
    balanced: bool
    defect_triples: tuple
    defect_basis: np.ndarray
    pair_count: int


def zero_product_balanced(a: Algebra, pair_budget=Budgets().pairs) -> ZpbResult:
    """Whether xy (x) z - x (x) yz always lies in the span of zero-product
    tensors {v (x) w : v w = 0}; trilinearity reduces it to basis triples.

    For each v the zero-product partners {w : v w = 0} form a kernel, so
    the span W of zero-product tensors is exact. Raises BudgetExceeded when
    |A|^2 exceeds the pair budget.
    """
    key = ("zpb", pair_budget)
    if key in a._cache:
        return a._cache[key]
    d = a.dim
    n = a.element_count()
    if n * n > pair_budget:
        raise BudgetExceeded("zero-product pair scan", n * n, pair_budget)
    w_space_rows = []
    for block, _ in _element_blocks(a, n, "zpb"):
        for v in block:
            if not v.any():
                continue
            partners = kernels.nullspace(a.left_mult_matrix(v), a.p)  # rows w: v w = 0
            if partners.shape[0] == 0:
                continue
            tensors = (v[:, None] * partners[:, None, :]).reshape(partners.shape[0], d * d) % a.p
            w_space_rows.append(tensors)
    stacked = (
        np.concatenate(w_space_rows) if w_space_rows else np.zeros((0, d * d), dtype=np.int64)
    )
    w_basis, w_piv = kernels.rref(stacked, a.p)

    def reduce(rows):
        rows = rows.copy() % a.p
        for r, c in zip(w_basis, w_piv):
            f = rows[:, c].copy()
            if f.any():
                rows = (rows - f[:, None] * r[None, :]) % a.p
        return rows

    eye = np.eye(d, dtype=np.int64)
    bad = []
    bad_rows = []
    for i in range(d):
        for j in range(d):
            ej = eye[j]
            prod_ij = a.mul_coords(eye[i], ej)
            for k in range(d):
                prod_jk = a.mul_coords(ej, eye[k])
                t1 = (prod_ij[:, None] * eye[k][None, :]).reshape(-1)
                t2 = (eye[i][:, None] * prod_jk[None, :]).reshape(-1)
                diff = (t1 - t2) % a.p
                if reduce(diff[None, :]).any():
                    bad.append((i, j, k))
                    bad_rows.append(diff)
    defect, _ = kernels.rref(
        np.asarray(bad_rows, dtype=np.int64) if bad_rows else np.zeros((0, d * d), dtype=np.int64),
        a.p,
    )
    result = ZpbResult(not bad, tuple(bad), defect, n * n)
    a._cache[key] = result
    return result


def commutators_in_n2span(a: Algebra, budget=Budgets().elements) -> bool:
    """[R, R] <= span of the square-zero elements."""
    return commutator_subspace(a) <= n2_span(a, budget).space


def commutators_in_nspan(a: Algebra, budget=Budgets().elements) -> bool:
    """[R, R] <= span of the nilpotent elements."""
    return commutator_subspace(a) <= nilpotent_span(a, budget).space


def scalar_multiple_units(a: Algebra, x):
    """Automorphisms induced by the nonzero scalar multiples of nilpotent x."""
    uz = unitize(a)
    amb = uz.result
    unit = amb.unit.coords
    coords = x.coords if isinstance(x, AlgebraElement) else np.asarray(x, dtype=np.int64)
    auts = []
    for lam in range(1, a.p):
        lx = (lam * coords) % a.p
        emb = uz.embed_rows(lx[None, :])[0]
        u = unit.copy()
        power = emb.copy()
        while power.any():
            u = (u + power) % amb.p
            power = amb.mul_coords(power, emb)
        auts.append(_make_aut(uz, u, (unit - emb) % amb.p, f"lam{lam}"))
    return auts


def vandermonde_bracket_check(v: Subspace, x):
    """Given nilpotent x (index k) and v invariant under the automorphisms
    induced by every scalar multiple of x, decide whether [x, v] <= v.

    Returns (verdict, reason); verdict None means the field is too small
    for the underlying argument and the check is skipped, not failed:
    it needs k-1 distinct nonzero scalars, and the k = 2 case additionally
    needs a scalar outside {0, 1}.
    """
    a = v.algebra
    coords = x.coords if isinstance(x, AlgebraElement) else np.asarray(x, dtype=np.int64)
    k = nilpotency_index(a, coords)
    if k is None:
        raise ValueError("x is not nilpotent")
    if k == 1:
        return True, "x = 0"
    if k - 1 >= a.p:
        return None, f"skipped: needs {k - 1} distinct nonzero scalars, field has {a.p - 1}"
    if k == 2 and a.p < 3:
        return None, "skipped: square-zero case needs at least three field elements"
    brackets = []
    for b in v.basis_array:
        xy = a.mul_coords(coords, b)
        yx = a.mul_coords(b, coords)
        brackets.append((xy - yx) % a.p)
    if not brackets:
        return True, "v = 0"
    return not v.reduce_rows(np.asarray(brackets)).any(), f"k={k}"


@dataclass(frozen=True)
class NilReport:
    n2_span: Subspace
    n_span: Subspace
    fn2_span: Subspace
    n2_is_full: bool
    commutators_in_n2span: bool
    exhaustive: bool
    fn2_witnesses: tuple = ()


def nil_report(a: Algebra, budgets: Budgets = Budgets()) -> NilReport:
    n2 = n2_span(a, budgets.elements)
    nn = nilpotent_span(a, budgets.elements)
    fn2 = fn2_span(a, budgets.pairs)
    return NilReport(
        n2_span=n2.space,
        n_span=nn.space,
        fn2_span=fn2.space,
        n2_is_full=is_full(n2.space),
        commutators_in_n2span=commutator_subspace(a) <= n2.space,
        exhaustive=n2.exhaustive and nn.exhaustive and fn2.exhaustive,
        fn2_witnesses=fn2.witnesses,
    )
