"""The vector space sp_{2g}(F_l) and its kernel-layer exponential.

Coordinates are fixed once and for all: A-block row-major (g^2 entries), then
the upper triangle of B row-major (g(g+1)/2), then the upper triangle of C.
JFORM vectors use the same chart after conversion through the OMEGA<->JFORM
permutation, so one coordinate system serves both forms and span bases are
reproducible bit-for-bit.

The layer map S |-> id + l^k S identifies sp_{2g}(F_l) with the kernel of
Sp(Z/l^(k+1)) -> Sp(Z/l^k); exp_layer / log_layer realize the two directions.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    CapExceeded,
    MixedAmbient,
    ModMismatch,
    NotInKernel,
    NotLie,
    NotSymplectic,
    RangeError,
)
from .matmod import MatMod
from .residue_ring import Modulus, make_modulus
from .symplectic import (
    JFORM,
    OMEGA,
    SympForm,
    form,
    group_order,
    is_lie,
    is_symplectic,
    symplectic_inverse,
)


def lie_dim(g: int) -> int:
    """dim sp_{2g} = g(2g+1): g^2 for A plus g(g+1)/2 each for B and C."""
    if g < 1:
        raise RangeError(f"genus {g} < 1")
    return g * (2 * g + 1)


def worker_count() -> int:
    """Worker cap from SYMPLIFT_THREADS; absence means automatic."""
    env = os.environ.get("SYMPLIFT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            return 1
    return min(4, os.cpu_count() or 1)


def _coords_to_omega_array(coords: np.ndarray, g: int, l: int) -> np.ndarray:
    iu, ju = np.triu_indices(g)
    nsym = len(iu)
    A = coords[: g * g].reshape(g, g)
    B = np.zeros((g, g), dtype=np.int64)
    C = np.zeros((g, g), dtype=np.int64)
    B[iu, ju] = coords[g * g : g * g + nsym]
    B[ju, iu] = coords[g * g : g * g + nsym]
    C[iu, ju] = coords[g * g + nsym :]
    C[ju, iu] = coords[g * g + nsym :]
    out = np.zeros((2 * g, 2 * g), dtype=np.int64)
    out[:g, :g] = A
    out[:g, g:] = B
    out[g:, :g] = C
    out[g:, g:] = -A.T
    return out % l


def _omega_array_to_coords(arr: np.ndarray, g: int, l: int) -> np.ndarray:
    iu, ju = np.triu_indices(g)
    parts = [arr[:g, :g].reshape(-1), arr[:g, g:][iu, ju], arr[g:, :g][iu, ju]]
    return np.concatenate(parts) % l


def omega_stack_to_coords(stack: np.ndarray, g: int, l: int) -> np.ndarray:
    """Vectorized chart: (m, 2g, 2g) OMEGA Lie matrices -> (m, g(2g+1)) coords."""
    iu, ju = np.triu_indices(g)
    m = stack.shape[0]
    parts = [
        stack[:, :g, :g].reshape(m, -1),
        stack[:, :g, g:][:, iu, ju],
        stack[:, g:, :g][:, iu, ju],
    ]
    return np.concatenate(parts, axis=1) % l


@dataclass(frozen=True)
class LieVector:
    """An element of sp_{2g}(F_l) in the fixed coordinate chart."""

    g: int
    l: int
    coords: np.ndarray
    form: str = OMEGA

    def __post_init__(self) -> None:
        c = np.asarray(self.coords, dtype=np.int64) % self.l
        if c.shape != (lie_dim(self.g),):
            raise MixedAmbient(
                f"expected {lie_dim(self.g)} coordinates, got shape {c.shape}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def matrix(self) -> MatMod:
        """The matrix view over F_l in this vector's form realization."""
        mod = make_modulus(self.l, 1)
        arr = _coords_to_omega_array(self.coords, self.g, self.l)
        M = MatMod(arr, mod)
        if self.form == JFORM:
            f = form(OMEGA, self.g, mod)
            # JFORM view = P^-1 (omega view) P
            M = MatMod(
                (f.perm.transpose().entries @ arr @ f.perm.entries) % self.l, mod
            )
        return M

    @classmethod
    def from_matrix(cls, M: MatMod, f: SympForm) -> "LieVector":
        """Inverse chart; validates the Lie condition for the stated form."""
        if not is_lie(M, f):
            raise NotLie("matrix fails M^T F + F M = 0 for the stated form")
        arr = M.entries
        if f.kind == JFORM:
            arr = (f.perm.entries @ arr @ f.perm.transpose().entries) % f.modulus.value
        return cls(
            g=f.g,
            l=f.modulus.l,
            coords=_omega_array_to_coords(arr, f.g, f.modulus.l),
            form=f.kind,
        )

    @classmethod
    def zero(cls, g: int, l: int, form_kind: str = OMEGA) -> "LieVector":
        return cls(g=g, l=l, coords=np.zeros(lie_dim(g), dtype=np.int64), form=form_kind)

    @classmethod
    def basis(cls, g: int, l: int, form_kind: str = OMEGA) -> list:
        """The standard basis in chart order."""
        out = []
        for i in range(lie_dim(g)):
            c = np.zeros(lie_dim(g), dtype=np.int64)
            c[i] = 1
            out.append(cls(g=g, l=l, coords=c, form=form_kind))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieVector):
            return NotImplemented
        return (
            self.g == other.g
            and self.l == other.l
            and self.form == other.form
            and np.array_equal(self.coords, other.coords)
        )

    def __hash__(self) -> int:
        return hash((self.g, self.l, self.form, self.coords.tobytes()))


def exp_layer(S: LieVector, k: int) -> MatMod:
    """id + l^k S at level k+1: the kernel element S parametrizes."""
    if k < 1:
        raise RangeError(f"layer index k={k} < 1")
    target = make_modulus(S.l, k + 1)
    ident = np.eye(2 * S.g, dtype=np.int64)
    return MatMod(ident + S.l**k * S.matrix().entries, target)


def log_layer(M: MatMod, f: SympForm) -> LieVector:
    """The unique S with exp_layer(S, k) = M, where k = M's level minus one.

    Requires M = id mod l^k; a NotSymplectic error here means the input was
    not symplectic mod l^(k+1) (the extracted matrix fails the Lie condition),
    which is an internal-consistency failure for genuinely symplectic input.
    """
    K = M.modulus.k
    if K < 2:
        raise RangeError("log_layer needs level k+1 >= 2")
    l = M.modulus.l
    below = l ** (K - 1)
    diff = M.entries - np.eye(M.dim, dtype=np.int64)
    if (diff % below).any():
        raise NotInKernel(f"matrix is not id mod {l}^{K - 1}")
    s_arr = (diff // below) % l
    mod1 = make_modulus(l, 1)
    f1 = form(f.kind, f.g, mod1)
    S = MatMod(s_arr, mod1)
    if not is_lie(S, f1):
        raise NotSymplectic("kernel element fails the Lie condition")
    return LieVector.from_matrix(S, f1)


def _rref(rows: np.ndarray, l: int) -> np.ndarray:
    """Reduced row echelon form over F_l; returns only the nonzero rows."""
    a = rows.astype(np.int64) % l
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if a[i, c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, l)) % l
        other = a[:, c].copy()
        other[r] = 0
        a -= np.outer(other, a[r])
        a %= l
        r += 1
    return a[:r]


@dataclass(frozen=True)
class Subspace:
    """A subspace of sp_{2g}(F_l) held as a reduced row echelon basis."""

    g: int
    l: int
    basis: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.basis, dtype=np.int64) % self.l
        if b.ndim != 2 or b.shape[1] != lie_dim(self.g):
            b = b.reshape(-1, lie_dim(self.g))
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def ambient_dim(self) -> int:
        return lie_dim(self.g)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, v) -> bool:
        coords = v.coords if isinstance(v, LieVector) else np.asarray(v)
        stacked = np.vstack([self.basis, coords % self.l])
        return _rref(stacked, self.l).shape[0] == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        stacked = np.vstack([self.basis, other.basis])
        return _rref(stacked, self.l).shape[0] == self.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.g == other.g
            and self.l == other.l
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        return hash((self.g, self.l, self.basis.tobytes()))


class SpanBuilder:
    """Incremental row reduction with early full-rank stop."""

    def __init__(self, g: int, l: int):
        self.g = g
        self.l = l
        self.ambient = lie_dim(g)
        self._basis = np.zeros((0, self.ambient), dtype=np.int64)

    @property
    def dim(self) -> int:
        return self._basis.shape[0]

    def full(self) -> bool:
        return self.dim == self.ambient

    def add(self, rows: np.ndarray) -> bool:
        """Fold rows in; returns True when the dimension grew."""
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.ambient) % self.l
        if self._basis.shape[0]:
            # clear pivot columns first: spanned rows reduce to zero cheaply
            pivots = np.argmax(self._basis != 0, axis=1)
            for r, p in zip(self._basis, pivots):
                coef = rows[:, p]
                if coef.any():
                    rows = (rows - np.outer(coef, r)) % self.l
        if not rows.any():
            return False
        before = self.dim
        self._basis = _rref(np.vstack([self._basis, rows[rows.any(axis=1)]]), self.l)
        return self.dim > before

    def subspace(self) -> Subspace:
        return Subspace(g=self.g, l=self.l, basis=self._basis.copy())


def span(vectors) -> Subspace:
    """Row-reduced span of LieVectors sharing one ambient space."""
    vectors = list(vectors)
    if not vectors:
        raise MixedAmbient("cannot infer the ambient space of an empty span")
    g, l = vectors[0].g, vectors[0].l
    for v in vectors:
        if (v.g, v.l) != (g, l):
            raise MixedAmbient(f"({v.g},{v.l}) mixed into ({g},{l})")
    rows = np.stack([v.coords for v in vectors])
    return Subspace(g=g, l=l, basis=_rref(rows, l))


def span_empty(g: int, l: int) -> Subspace:
    return Subspace(g=g, l=l, basis=np.zeros((0, lie_dim(g)), dtype=np.int64))


def conj_act(M: MatMod, S: LieVector) -> LieVector:
    """M^-1 S M for M symplectic mod l in S's form; stays in sp."""
    if M.modulus.k != 1:
        raise RangeError("conjugators act over F_l (k = 1)")
    if M.modulus.l != S.l:
        raise ModMismatch(f"conjugator mod {M.modulus.l} vs vector mod {S.l}")
    f = form(S.form, S.g, M.modulus)
    if not is_symplectic(M, f):
        raise NotSymplectic("conjugator fails M^T F M = F")
    minv = symplectic_inverse(M, f)
    res = (minv.entries @ S.matrix().entries @ M.entries) % S.l
    return LieVector.from_matrix(MatMod(res, M.modulus), f)


def trace_zero_subspace(g: int, l: int) -> Subspace:
    """W = {S in sp : tr A = 0}, codimension one (dim g(2g+1) - 1)."""
    n = lie_dim(g)
    rows = []
    for i in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[i] = 1
        rows.append(e)
    # replace the A-diagonal directions by consecutive differences
    rows = [
        r
        for idx, r in enumerate(rows)
        if not (idx < g * g and idx % (g + 1) == 0)  # drop e_(ii) coordinates
    ]
    for i in range(g - 1):
        e = np.zeros(n, dtype=np.int64)
        e[i * (g + 1)] = 1
        e[(i + 1) * (g + 1)] = l - 1
        rows.append(e)
    return Subspace(g=g, l=l, basis=_rref(np.stack(rows), l))


def conj_orbit_span(
    S: LieVector, f: SympForm, cap: int = 2**24, chunk: int = 1 << 15
) -> Subspace:
    """Span of {M^-1 S M : M over ALL of Sp_{2g}(F_l)}.

    Enumerates the full finite group (no sampling): the spanning claims this
    feeds are universal, so exact enumeration makes the check a proof.
    """
    from .groupengine import GenSet, closure  # local import; engine sits above

    if f.modulus.k != 1:
        raise RangeError("orbit spans are taken over F_l (k = 1)")
    if (f.g, f.modulus.l) != (S.g, S.l):
        raise MixedAmbient("form does not match the vector's ambient space")
    if group_order(S.g, S.l, 1) > cap:
        raise CapExceeded(
            f"Sp_{2 * S.g}(F_{S.l}) has order {group_order(S.g, S.l, 1)} > cap {cap}"
        )
    from .symplectic import standard_generators

    gens = standard_generators(S.g, f.modulus, f)
    cl = closure(GenSet(g=S.g, modulus=f.modulus, form=f, generators=tuple(gens)), cap=cap)
    assert cl.exhausted
    g, l = S.g, S.l
    F = f.matrix.entries
    negF = (-f.matrix.entries) % l
    smat = S.matrix().entries
    perm = f.perm.entries
    builder = SpanBuilder(g, l)

    def orbit_rows(block: np.ndarray) -> np.ndarray:
        m = block.shape[0]
        d = 2 * g
        mats = block.reshape(m, d, d).astype(np.int64)
        trans = np.ascontiguousarray(mats.transpose(0, 2, 1)).reshape(m * d, d)
        # M^-1 = (-F) M^T F, computed stack-wise
        step = (trans @ F).reshape(m, d, d)
        minv = np.einsum("ij,mjk->mik", negF, step) % l
        left = np.einsum("mij,jk->mik", minv, smat) % l
        conj = np.einsum("mij,mjk->mik", left, mats) % l
        if S.form == JFORM:
            conj = np.einsum("ij,mjk,kl->mil", perm, conj, perm.T) % l
        return omega_stack_to_coords(conj, g, l)

    blocks = list(cl.iter_chunks(chunk))
    workers = worker_count()
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for rows in pool.map(orbit_rows, blocks):
                builder.add(rows)
                if builder.full():
                    break
    else:
        for block in blocks:
            builder.add(orbit_rows(block))
            if builder.full():
                break
    return builder.subspace()
