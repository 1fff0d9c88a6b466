"""Structured test-subspace generation: closures (Lie, submodule,
invariant-orbit) and the deterministic seeded sampler used by the audit."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

import numpy as np

from .algebras import Algebra
from .subspaces import (
    Subspace,
    bracket_space,
    commutator_subspace,
    is_fully_noncentral,
    whole_space,
)

SAMPLE_KINDS = ("raw", "lie-closure", "submodule-closure", "invariant-orbit")

FN_RETRY_CAP = 50


def lie_closure(v: Subspace) -> Subspace:
    """Smallest superspace closed under [R, .] (fixpoint in <= dim steps)."""
    r = whole_space(v.algebra)
    cur = v
    while True:
        nxt = cur + bracket_space(r, cur)
        if nxt.dim == cur.dim:
            return nxt
        cur = nxt


def submodule_closure(v: Subspace) -> Subspace:
    """Smallest superspace closed under [[R, R], .]."""
    comm = commutator_subspace(v.algebra)
    cur = v
    while True:
        nxt = cur + bracket_space(comm, cur)
        if nxt.dim == cur.dim:
            return nxt
        cur = nxt


def bracket_closure(v: Subspace, w: Subspace) -> Subspace:
    """Smallest superspace of v closed under [w, .]."""
    cur = v
    while True:
        nxt = cur + bracket_space(w, cur)
        if nxt.dim == cur.dim:
            return nxt
        cur = nxt


def invariant_orbit_closure(v: Subspace, auts) -> Subspace:
    """Smallest superspace of v invariant under every given automorphism."""
    a = v.algebra
    cur = v
    auts = list(auts)
    while True:
        rows = [cur.basis_array]
        for aut in auts:
            if cur.dim:
                rows.append(aut.apply_rows(cur.basis_array))
        nxt = Subspace(a, np.concatenate(rows)) if cur.dim else cur
        if nxt.dim == cur.dim:
            return nxt
        cur = nxt


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from string/int parts (platform independent)."""
    h = hashlib.blake2s(digest_size=8)
    for part in parts:
        h.update(str(part).encode())
        h.update(b"\x00")
    return int.from_bytes(h.digest(), "big")


def random_subspace(a: Algebra, rng: random.Random) -> Subspace:
    """A random subspace: span of 0..dim random vectors."""
    count = rng.randint(0, a.dim)
    rows = [[rng.randrange(a.p) for _ in range(a.dim)] for _ in range(count)]
    return Subspace(a, np.asarray(rows, dtype=np.int64)) if rows else Subspace(a)


@dataclass(frozen=True)
class SubspaceSampler:
    """Deterministic sampler: the same seed yields the same sample sequence
    for every (algebra, context, index) triple."""

    seed: int = 0
    count: int = 12
    kinds: tuple = SAMPLE_KINDS

    def rng_for(self, algebra_id, context, index) -> random.Random:
        return random.Random(derive_seed(self.seed, algebra_id, context, index))

    def raw(self, a: Algebra, algebra_id, context, index) -> Subspace:
        return random_subspace(a, self.rng_for(algebra_id, context, index))

    def kind_for(self, index) -> str:
        return self.kinds[index % len(self.kinds)]


def apply_kind(v: Subspace, kind: str, auts=None) -> Subspace:
    if kind == "raw":
        return v
    if kind == "lie-closure":
        return lie_closure(v)
    if kind == "submodule-closure":
        return submodule_closure(v)
    if kind == "invariant-orbit":
        if auts is None:
            raise ValueError("invariant-orbit closure needs automorphisms")
        return invariant_orbit_closure(v, auts)
    raise ValueError(f"unknown sample kind {kind!r}")


def fully_noncentral_sample(a, sampler, algebra_id, context, index, kind, auts=None):
    """Rejection-sample a fully noncentral subspace of the requested kind.

    Returns (subspace or None, attempts made).
    """
    for attempt in range(FN_RETRY_CAP):
        seed_ctx = f"{context}:fn:{attempt}"
        v = sampler.raw(a, algebra_id, seed_ctx, index)
        v = apply_kind(v, kind, auts)
        if is_fully_noncentral(v):
            return v, attempt + 1
    return None, FN_RETRY_CAP
