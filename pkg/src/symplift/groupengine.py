"""Finite subgroup machinery over Z/l^k Z.

Breadth-first closure with a canonical-key hash set, batched through numpy:
each BFS level multiplies the whole frontier by every mover in a handful of
flat GEMMs, packs the results into fixed-width integer keys, and dedupes them
against a sorted key array.  Generator inverses are added to the mover list up
front, so the computed set is a group (not just a monoid) even before
exhaustion.  The default cap 2^24 covers Sp_6(F_2) (1,451,520 elements) and
Sp_4(Z/4) (737,280) with headroom; CapExceeded is a distinct recoverable
verdict, never silent truncation.

Subgroups too large to enumerate are probed by harvest_kernel_span, which
collects reduction-kernel elements provably inside the generated subgroup:
collisions of random words sharing a lower-level image, l-th powers and
commutators of near-identity elements, and conjugation orbits of everything
already harvested.  Every harvested vector carries a word witness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, DimMismatch, ModMismatch, NotSymplectic, RangeError
from .liealg import (
    LieVector,
    SpanBuilder,
    Subspace,
    conj_act,
    omega_stack_to_coords,
)
from .matmod import MatMod, entry_bits, mat_inv
from .residue_ring import Modulus, make_modulus
from .symplectic import SympForm, form, group_order, is_symplectic, symplectic_inverse

CAP_DEFAULT = 2**24
WORD_BUDGET_DEFAULT = 10**6
_CHUNK = 1 << 16
_PENDING_CAP = 1 << 23  # consolidate candidate buffers past this many rows


def _store_dtype(value: int):
    if value <= 2**8:
        return np.uint8
    if value <= 2**15:
        return np.int16
    if value <= 2**31 - 1:
        return np.int32
    return np.int64


def _math_dtype(dim: int, value: int):
    bound = dim * (value - 1) ** 2
    if bound <= 2**53:
        return np.float64
    if bound < 2**63:
        return np.int64
    return object


def _rmul(stack: np.ndarray, M: np.ndarray, q: int) -> np.ndarray:
    """(m,d,d) stack times one (d,d) matrix, mod q, via a single flat GEMM."""
    m, d, _ = stack.shape
    out = stack.reshape(m * d, d) @ M
    out %= q
    return out.reshape(m, d, d)


def _lmul(M: np.ndarray, stack: np.ndarray, q: int) -> np.ndarray:
    """One (d,d) matrix times an (m,d,d) stack, mod q."""
    m, d, _ = stack.shape
    t = np.ascontiguousarray(stack.transpose(0, 2, 1)).reshape(m * d, d)
    out = t @ M.T
    out %= q
    return np.ascontiguousarray(out.reshape(m, d, d).transpose(0, 2, 1))


class _Packer:
    """Rows -> hashable keys; single uint64 words when they fit, bytes else.

    Keys are dtype-canonical: byte keys always come from store-dtype rows, so
    int64 queries and packed storage rows produce identical keys.
    """

    def __init__(self, dim: int, modulus: Modulus):
        self.n = dim * dim
        self.bits = entry_bits(modulus)
        self.wide = self.bits * self.n > 64
        self.sdt = _store_dtype(modulus.value)
        if not self.wide:
            self.weights = (
                1 << (self.bits * np.arange(self.n, dtype=np.uint64))
            ).astype(np.uint64)

    def pack(self, rows: np.ndarray):
        """rows: (m, n) canonical entries -> uint64 array, or list of bytes."""
        if not self.wide:
            return rows.astype(np.uint64) @ self.weights
        rows = np.ascontiguousarray(rows.astype(self.sdt, copy=False))
        return [r.tobytes() for r in rows]

    def pack_one(self, row: np.ndarray):
        key = self.pack(row.reshape(1, -1))
        return key[0] if self.wide else int(key[0])


class _KeySet:
    """Insert-only key set: sorted uint64 array, or a Python set of bytes."""

    def __init__(self, wide: bool):
        self.wide = wide
        self._sorted = np.empty(0, dtype=np.uint64)
        self._set = set()

    def __len__(self) -> int:
        return len(self._set) if self.wide else len(self._sorted)

    def new_mask(self, keys: np.ndarray) -> np.ndarray:
        """Boolean mask of keys not yet present (narrow path only)."""
        idx = np.searchsorted(self._sorted, keys)
        mask = np.ones(len(keys), dtype=bool)
        inb = idx < len(self._sorted)
        mask[inb] = self._sorted[idx[inb]] != keys[inb]
        return mask

    def add(self, keys) -> None:
        if self.wide:
            self._set.update(keys)
        else:
            self._sorted = np.union1d(self._sorted, keys)

    def contains_one(self, key) -> bool:
        if self.wide:
            return key in self._set
        i = int(np.searchsorted(self._sorted, key))
        return i < len(self._sorted) and self._sorted[i] == key


class Closure:
    """An enumerated element set with canonical-key membership queries."""

    def __init__(self, dim, modulus, blocks, keyset, packer, exhausted):
        self.dim = dim
        self.modulus = modulus
        self._rows = np.concatenate(blocks, axis=0) if len(blocks) > 1 else blocks[0]
        self._keys = keyset
        self._packer = packer
        self.exhausted = exhausted

    @property
    def order(self) -> int:
        return self._rows.shape[0]

    def contains(self, M: MatMod) -> bool:
        if M.dim != self.dim:
            raise DimMismatch(f"{M.dim} vs {self.dim}")
        if M.modulus != self.modulus:
            raise ModMismatch(f"{M.modulus} vs {self.modulus}")
        return self._keys.contains_one(self._packer.pack_one(M.entries))

    def row_stack(self) -> np.ndarray:
        """All elements as an (order, dim^2) array in discovery order."""
        return self._rows

    def iter_chunks(self, size: int = _CHUNK):
        """Yield (m, dim, dim) int64 blocks covering the element set."""
        for lo in range(0, self.order, size):
            block = self._rows[lo : lo + size].astype(np.int64)
            yield block.reshape(-1, self.dim, self.dim)

    def iter_matmods(self):
        for block in self.iter_chunks():
            for arr in block:
                yield MatMod(arr, self.modulus)


@dataclass(frozen=True)
class GenSet:
    """A labeled generating set; every generator must preserve the form."""

    g: int
    modulus: Modulus
    form: SympForm
    generators: tuple
    label: str = ""

    def __post_init__(self) -> None:
        if not self.generators:
            raise RangeError("empty generator list")
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.form.g != self.g or self.form.modulus != self.modulus:
            raise ModMismatch("form does not match the generating set")
        for M in self.generators:
            if M.dim != 2 * self.g:
                raise DimMismatch(f"generator dim {M.dim}, expected {2 * self.g}")
            if M.modulus != self.modulus:
                raise ModMismatch(f"generator modulus {M.modulus} vs {self.modulus}")
            if not is_symplectic(M, self.form):
                raise NotSymplectic(f"generator fails is_symplectic: {M!r}")

    def reduce_to(self, j: int) -> "GenSet":
        low = self.modulus.reduce_to(j)
        f = form(self.form.kind, self.g, low)
        gens = tuple(MatMod(M.entries, low) for M in self.generators)
        return GenSet(g=self.g, modulus=low, form=f, generators=gens, label=self.label)


def _dedupe(mats, packer):
    seen = set()
    out = []
    for m in mats:
        k = packer.pack_one(m)
        if k not in seen:
            seen.add(k)
            out.append(m)
    return out


class _LevelBuffer:
    """Per-level candidate accumulator, consolidated to bound memory."""

    def __init__(self, keyset: _KeySet, packer: _Packer):
        self.keyset = keyset
        self.packer = packer
        self.key_parts = []
        self.row_parts = []
        self.pending = 0

    def push(self, rows: np.ndarray) -> None:
        keys = self.packer.pack(rows)
        if self.packer.wide:
            keep = [i for i, k in enumerate(keys) if not self.keyset.contains_one(k)]
            if not keep:
                return
            self.key_parts.append([keys[i] for i in keep])
            self.row_parts.append(rows[keep])
            self.pending += len(keep)
        else:
            mask = self.keyset.new_mask(keys)
            if not mask.any():
                return
            self.key_parts.append(keys[mask])
            self.row_parts.append(rows[mask])
            self.pending += int(mask.sum())
        if self.pending > _PENDING_CAP:
            self.consolidate()

    def consolidate(self):
        """Dedupe the buffered candidates among themselves."""
        if not self.key_parts:
            return [], None
        rows = np.concatenate(self.row_parts, axis=0)
        if self.packer.wide:
            first_at = {}
            for i, k in enumerate(kk for part in self.key_parts for kk in part):
                if k not in first_at:
                    first_at[k] = i
            keys = list(first_at)
            rows = rows[list(first_at.values())]
        else:
            keys, idx = np.unique(np.concatenate(self.key_parts), return_index=True)
            rows = rows[idx]
        self.key_parts = [keys]
        self.row_parts = [rows]
        self.pending = len(keys)
        return keys, rows

    def drain(self, room: int):
        """(new_keys, new_rows, truncated) after final consolidation."""
        keys, rows = self.consolidate()
        if rows is None:
            return keys, None, False
        if len(keys) > room:
            return keys[:room], rows[:room], True
        return keys, rows, False


def _bfs(dim, modulus, right_movers, conj_pairs, cap):
    """Closure of {id} under x -> x*m and x -> c^-1 x c moves."""
    q = modulus.value
    mdt = _math_dtype(dim, q)
    if mdt is object:
        raise RangeError("modulus too large for batched closure")
    sdt = _store_dtype(q)
    packer = _Packer(dim, modulus)
    movers = [m.astype(mdt) for m in right_movers]
    conjs = [(c.astype(mdt), ci.astype(mdt)) for c, ci in conj_pairs]
    ident = np.eye(dim, dtype=np.int64)
    keyset = _KeySet(packer.wide)
    keyset.add(packer.pack(ident.reshape(1, -1)))
    blocks = [ident.reshape(1, -1).astype(sdt)]
    frontier = ident.reshape(1, dim, dim).astype(mdt)
    order = 1
    exhausted = True
    while frontier.shape[0]:
        buf = _LevelBuffer(keyset, packer)
        for lo in range(0, frontier.shape[0], _CHUNK):
            chunk = frontier[lo : lo + _CHUNK]
            for m in movers:
                prod = _rmul(chunk, m, q)
                buf.push(prod.reshape(prod.shape[0], -1).astype(sdt))
            for c, ci in conjs:
                prod = _rmul(_lmul(ci, chunk, q), c, q)
                buf.push(prod.reshape(prod.shape[0], -1).astype(sdt))
        new_keys, new_rows, truncated = buf.drain(cap - order)
        if new_rows is None or len(new_keys) == 0:
            break
        keyset.add(new_keys)
        blocks.append(new_rows)
        order += new_rows.shape[0]
        if truncated:
            exhausted = False
            break
        frontier = new_rows.astype(mdt).reshape(-1, dim, dim)
    return Closure(dim, modulus, blocks, keyset, packer, exhausted)


def closure_raw(mats, modulus: Modulus, cap: int = CAP_DEFAULT, inverses=None):
    """Closure of arbitrary invertible matrices (no form assumed)."""
    dim = mats[0].dim
    packer = _Packer(dim, modulus)
    if inverses is None:
        inverses = [mat_inv(m) for m in mats]
    movers = _dedupe([m.entries for m in mats] + [m.entries for m in inverses], packer)
    return _bfs(dim, modulus, movers, [], cap)


def closure(gs: GenSet, cap: int = CAP_DEFAULT) -> Closure:
    """BFS product closure of the generators and their inverses."""
    invs = [symplectic_inverse(M, gs.form) for M in gs.generators]
    return closure_raw(list(gs.generators), gs.modulus, cap=cap, inverses=invs)


def surjectivity_check(gs: GenSet, cap: int = CAP_DEFAULT):
    """(surjective?, mod-l closure) for the reduced generating set."""
    reduced = gs.reduce_to(1) if gs.modulus.k > 1 else gs
    expected = group_order(gs.g, gs.modulus.l, 1)
    cl = closure(reduced, cap=cap)
    if not cl.exhausted:
        raise CapExceeded(
            f"mod-{gs.modulus.l} closure passed {cap} elements without stabilizing"
        )
    return cl.order == expected, cl


def is_surjective_mod_l(gs: GenSet, cap: int = CAP_DEFAULT) -> bool:
    """Does the mod-l reduction generate all of Sp_{2g}(F_l)?"""
    ok, _ = surjectivity_check(gs, cap=cap)
    return ok


def commutator_subgroup(gs: GenSet, cap: int = CAP_DEFAULT) -> Closure:
    """Normal closure of the generator commutators.

    Seeded with [a,b] over generator pairs, closed under right product by the
    seeds and conjugation by the generators; that reaches every element of the
    normal closure, which equals the commutator subgroup of the generated
    group.
    """
    packer = _Packer(2 * gs.g, gs.modulus)
    gens = list(gs.generators)
    ginv = [symplectic_inverse(M, gs.form) for M in gens]
    seeds = []
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            c = ginv[i] * ginv[j] * gens[i] * gens[j]
            if not c.is_identity():
                seeds.append(c)
    if not seeds:
        ident = MatMod.identity(2 * gs.g, gs.modulus)
        return _bfs(2 * gs.g, gs.modulus, [ident.entries], [], cap)
    seed_inv = [symplectic_inverse(c, gs.form) for c in seeds]
    movers = _dedupe([c.entries for c in seeds + seed_inv], packer)
    conj_pairs = []
    seen = set()
    for M, Mi in zip(gens, ginv):
        k = packer.pack_one(M.entries)
        if k not in seen:
            seen.add(k)
            conj_pairs.append((M.entries, Mi.entries))
    out = _bfs(2 * gs.g, gs.modulus, movers, conj_pairs, cap)
    if not out.exhausted:
        raise CapExceeded(f"commutator closure passed {cap} elements")
    return out


def abelianization_index(gs: GenSet, cap: int = CAP_DEFAULT) -> int:
    """order(closure) / order(commutator subgroup), exact."""
    cl = closure(gs, cap=cap)
    if not cl.exhausted:
        raise CapExceeded(f"closure passed {cap} elements without stabilizing")
    cs = commutator_subgroup(gs, cap=cap)
    if cl.order % cs.order:
        raise RangeError("commutator subgroup order does not divide the group order")
    return cl.order // cs.order


@dataclass(frozen=True)
class KernelHarvest:
    """Result of harvest_kernel_span: span plus auditable witnesses."""

    subspace: Subspace
    samples: tuple
    words_used: int
    budget: int

    @property
    def dim(self) -> int:
        return self.subspace.dim

    @property
    def complete(self) -> bool:
        return self.subspace.dim == self.subspace.ambient_dim


def _valuation_depth(diff: np.ndarray, l: int, K: int) -> int:
    """Largest j <= K with diff = 0 mod l^j (diff already reduced mod l^K)."""
    for j in range(K, 0, -1):
        if not (diff % l**j).any():
            return j
    return 0


def harvest_kernel_span(
    gs: GenSet,
    budget: int = WORD_BUDGET_DEFAULT,
    seed: int = 0,
    walkers: int = 512,
    walk_len: int = 24,
) -> KernelHarvest:
    """Span of reduction-kernel elements provably inside the subgroup.

    Targets the top layer of gs's level: for level-K generators it spans log
    images of subgroup elements congruent to id mod l^(K-1).  Moves:
    (i) collision harvesting - two random words sharing a mod-l image yield
    u * rep^-1 in the mod-l kernel; (ii) l-th powers and commutators of
    near-identity elements, pushing intermediate depths up layer by layer;
    (iii) conjugation-orbit closure of every harvested vector under the mod-l
    generator images.  Deterministic for fixed (seed, budget); the budget
    counts walk steps.  Stops at full dimension or budget exhaustion, and
    never raises on exhaustion - callers inspect `complete`.
    """
    K = gs.modulus.k
    if K < 2:
        raise RangeError("harvest needs generators at level k >= 2")
    l = gs.modulus.l
    q = gs.modulus.value
    g = gs.g
    d = 2 * g
    if _math_dtype(d, q) is object:
        raise RangeError("modulus too large for the harvester")
    eye = np.eye(d, dtype=np.int64)
    mod1 = make_modulus(l, 1)
    f1 = form(gs.form.kind, g, mod1)
    fK = gs.form
    perm1 = f1.perm.entries

    gens = list(gs.generators)
    ginv = [symplectic_inverse(M, fK) for M in gens]
    movers = [M.entries for M in gens] + [M.entries for M in ginv]
    mover_inv = [M.entries for M in ginv] + [M.entries for M in gens]
    packer = _Packer(d, mod1)

    conj_mats = []
    seenc = set()
    for M in gens + ginv:
        red = MatMod(M.entries, mod1)
        key = red.entries.tobytes()
        if key not in seenc and not red.is_identity():
            seenc.add(key)
            conj_mats.append(red)

    builder = SpanBuilder(g, l)
    samples = []
    pools = {dep: [] for dep in range(1, K)}
    pool_cap = 96
    reps = {}
    rep_cap = 1 << 17
    processed = set()
    processed_cap = 1 << 16
    words_used = 0
    rng = np.random.default_rng(np.random.SeedSequence([seed]))

    def to_coords(sarr: np.ndarray) -> np.ndarray:
        if gs.form.kind == "jform":
            sarr = (perm1 @ sarr @ perm1.T) % l
        return omega_stack_to_coords(sarr.reshape(1, d, d), g, l)[0]

    def conj_close() -> None:
        # step (iii): stabilize the span under the mod-l generator action
        grew = True
        while grew and not builder.full():
            grew = False
            for row in builder.subspace().basis:
                vec = LieVector(g=g, l=l, coords=row, form=gs.form.kind)
                for C in conj_mats:
                    if builder.add(conj_act(C, vec).coords.reshape(1, -1)):
                        grew = True

    def process(x: np.ndarray, witness: dict) -> None:
        if len(processed) < processed_cap:
            key = x.tobytes()
            if key in processed:
                return
            processed.add(key)
        diff = (x - eye) % q
        dep = _valuation_depth(diff, l, K)
        if dep >= K or dep == 0:
            return
        if dep >= K - 1:
            sarr = (diff // l ** (K - 1)) % l
            lhs = (sarr.T @ f1.matrix.entries + f1.matrix.entries @ sarr) % l
            if lhs.any():
                raise NotSymplectic("harvested kernel element fails the Lie condition")
            coords = to_coords(sarr)
            if builder.add(coords.reshape(1, -1)):
                samples.append({"coords": [int(c) for c in coords], "witness": witness})
        elif len(pools[dep]) < pool_cap:
            pools[dep].append((x, witness, False))

    # depth-aware seeds: generators may already sit in a reduction kernel
    for gi, M in enumerate(gens):
        process(M.entries.copy(), {"kind": "generator", "index": gi})
    conj_close()

    nm = len(movers)
    while words_used < budget and not builder.full():
        nw = min(walkers, max(1, (budget - words_used) // walk_len))
        walk = np.broadcast_to(eye, (nw, d, d)).copy()
        walk_inv = walk.copy()
        words = np.zeros((nw, walk_len), dtype=np.int16)
        for step in range(walk_len):
            if words_used >= budget or builder.full():
                break
            choice = rng.integers(0, nm, nw)
            for mi in range(nm):
                rows = np.nonzero(choice == mi)[0]
                if rows.size:
                    walk[rows] = _rmul(walk[rows], movers[mi], q)
                    walk_inv[rows] = _lmul(mover_inv[mi], walk_inv[rows], q)
            words[:, step] = choice
            words_used += nw
            red = (walk % l).reshape(nw, -1).astype(_store_dtype(l))
            keys = packer.pack(red)
            for i in range(nw):
                kk = keys[i] if packer.wide else int(keys[i])
                hit = reps.get(kk)
                if hit is None:
                    if len(reps) < rep_cap:
                        reps[kk] = (
                            walk[i].copy(),
                            walk_inv[i].copy(),
                            words[i, : step + 1].tolist(),
                        )
                    continue
                _, rep_inv, rep_word = hit
                x = (walk[i] @ rep_inv) % q
                process(
                    x,
                    {
                        "kind": "collision",
                        "word": words[i, : step + 1].tolist(),
                        "rep_word": rep_word,
                    },
                )
        # step (ii): powers and commutators of near-identity elements
        for dep in range(1, K - 1):
            bumped = []
            for x, wit, done in pools[dep]:
                if not done:
                    process(_pow_array(x, l, q), {"kind": "power", "base": wit})
                bumped.append((x, wit, True))
            pools[dep] = bumped
        for a in range(1, K - 1):
            b = K - 1 - a
            if b < 1 or not pools[a] or not pools[b]:
                continue
            for xa, wa, _ in pools[a][:8]:
                for xb, wb, _ in pools[b][:8]:
                    xai = _sympl_inv_array(xa, fK)
                    xbi = _sympl_inv_array(xb, fK)
                    comm = (((xai @ xbi) % q @ xa) % q @ xb) % q
                    process(comm, {"kind": "commutator", "a": wa, "b": wb})
        if builder.dim:
            conj_close()
    return KernelHarvest(
        subspace=builder.subspace(),
        samples=tuple(samples),
        words_used=words_used,
        budget=budget,
    )


def _pow_array(x: np.ndarray, n: int, q: int) -> np.ndarray:
    out = np.eye(x.shape[0], dtype=np.int64)
    base = x % q
    while n:
        if n & 1:
            out = (out @ base) % q
        n >>= 1
        if n:
            base = (base @ base) % q
    return out


def _sympl_inv_array(x: np.ndarray, f: SympForm) -> np.ndarray:
    q = f.modulus.value
    F = f.matrix.entries
    return (((-F % q) @ x.T) % q @ F) % q
