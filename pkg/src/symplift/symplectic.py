"""Symplectic forms and every form-dependent construction.

Two realizations of the alternating form are first-class:

  OMEGA:  [[0, id_g], [-id_g, 0]]           (anti-diagonal identity blocks)
  JFORM:  diag(J_2, ..., J_2), J_2 = [[0,1],[-1,0]]

related by the basis permutation P with P^T Omega P = J.  OMEGA is the default
for user input; JFORM is what the genus-induction machinery (iota / pi / E
matrices / Q conjugators) wants, because J_{2g} = diag(J_{2g-2}, J_2) makes
the genus embedding block-diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadPermutation,
    DimMismatch,
    ModMismatch,
    NotInPreimage,
    NotLie,
    NotPrime,
    NotSymplectic,
    Overflow,
    RangeError,
)
from .matmod import MatMod, mat_inv, mat_mul, mat_reduce
from .residue_ring import Modulus, is_prime, make_modulus

OMEGA = "omega"
JFORM = "jform"
MAX_GENUS = 6
ORDER_CAP = 2**127


@dataclass(frozen=True)
class SympForm:
    """An alternating form realization plus the OMEGA<->JFORM permutation."""

    kind: str
    g: int
    modulus: Modulus
    matrix: MatMod
    perm: MatMod


def _omega_array(g: int) -> np.ndarray:
    a = np.zeros((2 * g, 2 * g), dtype=np.int64)
    a[:g, g:] = np.eye(g, dtype=np.int64)
    a[g:, :g] = -np.eye(g, dtype=np.int64)
    return a


def _jform_array(g: int) -> np.ndarray:
    a = np.zeros((2 * g, 2 * g), dtype=np.int64)
    for i in range(g):
        a[2 * i, 2 * i + 1] = 1
        a[2 * i + 1, 2 * i] = -1
    return a


def _perm_array(g: int) -> np.ndarray:
    # Column 2i picks basis vector e_i (old index i), column 2i+1 picks f_i
    # (old index g+i); then P^T Omega P = J exactly.
    p = np.zeros((2 * g, 2 * g), dtype=np.int64)
    for i in range(g):
        p[i, 2 * i] = 1
        p[g + i, 2 * i + 1] = 1
    return p


def form(kind: str, g: int, modulus: Modulus) -> SympForm:
    """The exact form matrix for the requested convention and genus."""
    if kind not in (OMEGA, JFORM):
        raise RangeError(f"unknown form kind {kind!r}")
    if not 1 <= g <= MAX_GENUS:
        raise RangeError(f"genus {g} outside 1..{MAX_GENUS}")
    arr = _omega_array(g) if kind == OMEGA else _jform_array(g)
    return SympForm(
        kind=kind,
        g=g,
        modulus=modulus,
        matrix=MatMod(arr, modulus),
        perm=MatMod(_perm_array(g), modulus),
    )


def _check_dims(M: MatMod, f: SympForm) -> None:
    if M.dim != 2 * f.g:
        raise DimMismatch(f"matrix dim {M.dim} vs form dim {2 * f.g}")
    if M.modulus != f.modulus:
        raise ModMismatch(f"{M.modulus} vs form {f.modulus}")


def is_symplectic(M: MatMod, f: SympForm) -> bool:
    """M^T F M = F."""
    _check_dims(M, f)
    F = f.matrix.entries
    lhs = (M.entries.T @ F @ M.entries) % f.modulus.value
    return bool(np.array_equal(lhs, F % f.modulus.value))


def is_lie(M: MatMod, f: SympForm) -> bool:
    """M^T F + F M = 0; only defined over the prime field (k = 1)."""
    if M.modulus.k != 1:
        raise RangeError("the Lie condition is checked over F_l (k = 1)")
    _check_dims(M, f)
    F = f.matrix.entries
    lhs = (M.entries.T @ F + F @ M.entries) % f.modulus.value
    return bool(not lhs.any())


def to_jform(M: MatMod, f: SympForm) -> MatMod:
    """perm^-1 M perm: carries OMEGA-symplectic matrices to JFORM ones."""
    pinv = f.perm.transpose()  # permutation matrices: inverse = transpose
    return mat_mul(mat_mul(pinv, M), f.perm)


def to_omega(M: MatMod, f: SympForm) -> MatMod:
    """perm M perm^-1: the inverse conversion."""
    pinv = f.perm.transpose()
    return mat_mul(mat_mul(f.perm, M), pinv)


@dataclass(frozen=True)
class BlockDecomp:
    """The blocks of an OMEGA Lie element [[A, B], [C, -A^T]]; B, C symmetric."""

    A: MatMod
    B: MatMod
    C: MatMod


def block_decomp(M: MatMod, f: SympForm) -> BlockDecomp:
    """Split a Lie element into its (A, B, C) blocks (OMEGA convention)."""
    if f.kind != OMEGA:
        raise RangeError("block_decomp is defined in the OMEGA convention")
    if not is_lie(M, f):
        raise NotLie("matrix fails M^T Omega + Omega M = 0")
    g = f.g
    e = M.entries
    m = M.modulus
    return BlockDecomp(
        A=MatMod(e[:g, :g], m), B=MatMod(e[:g, g:], m), C=MatMod(e[g:, :g], m)
    )


def compose_blocks(d: BlockDecomp) -> MatMod:
    """Inverse of block_decomp: assemble [[A, B], [C, -A^T]]."""
    g = d.A.dim
    m = d.A.modulus
    out = np.zeros((2 * g, 2 * g), dtype=np.int64)
    out[:g, :g] = d.A.entries
    out[:g, g:] = d.B.entries
    out[g:, :g] = d.C.entries
    out[g:, g:] = -d.A.entries.T
    return MatMod(out, m)


def _symmetric_basis(g: int) -> list:
    """E_ii then E_ij + E_ji (i < j), row-major order."""
    out = []
    for i in range(g):
        b = np.zeros((g, g), dtype=np.int64)
        b[i, i] = 1
        out.append(b)
    for i in range(g):
        for j in range(i + 1, g):
            b = np.zeros((g, g), dtype=np.int64)
            b[i, j] = 1
            b[j, i] = 1
            out.append(b)
    return out


def standard_generators(g: int, modulus: Modulus, f: SympForm) -> list:
    """A fixed documented generator family for Sp_{2g}(Z/l^k).

    The family is the form matrix Omega together with the symplectic
    translations [[id, B], [0, id]] for B running over the symmetric basis
    (E_ii, then E_ij + E_ji).  These generate the integral symplectic group,
    hence every finite quotient; the library never takes that on faith at
    small genus: closure order is compared against group_order in the tests
    for every verified (g, l).
    """
    if not 1 <= g <= MAX_GENUS:
        raise RangeError(f"genus {g} outside 1..{MAX_GENUS}")
    if f.g != g or f.modulus != modulus:
        raise ModMismatch("form does not match the requested genus/modulus")
    omega = MatMod(_omega_array(g), modulus)
    gens = [omega]
    for b in _symmetric_basis(g):
        t = np.eye(2 * g, dtype=np.int64)
        t[:g, g:] = b
        gens.append(MatMod(t, modulus))
    if f.kind == JFORM:
        gens = [to_jform(m, f) for m in gens]
    return gens


def group_order(g: int, l: int, k: int) -> int:
    """|Sp_{2g}(Z/l^k)| = l^((k-1) g (2g+1)) * prod_i l^(2i-1) (l^(2i) - 1)."""
    if g < 1:
        raise RangeError(f"genus {g} < 1")
    if not is_prime(l):
        raise NotPrime(f"{l} is not prime")
    if k < 1:
        raise RangeError(f"level k={k} < 1")
    order = l ** ((k - 1) * g * (2 * g + 1))
    for i in range(1, g + 1):
        order *= l ** (2 * i - 1) * (l ** (2 * i) - 1)
    if order >= ORDER_CAP:
        raise Overflow(f"group order exceeds 2^127 for (g={g}, l={l}, k={k})")
    return order


def embed_iota(M: MatMod, g: int, modulus: Modulus) -> MatMod:
    """The genus inclusion M -> [[M, 0], [0, id_2]] (JFORM convention).

    JFORM-symplectic at genus g-1 in, JFORM-symplectic at genus g out, since
    J_{2g} = diag(J_{2g-2}, J_2).
    """
    if M.dim != 2 * (g - 1):
        raise DimMismatch(f"expected dim {2 * (g - 1)}, got {M.dim}")
    if M.modulus != modulus:
        raise ModMismatch(f"{M.modulus} vs {modulus}")
    f_small = form(JFORM, g - 1, modulus)
    if not is_symplectic(M, f_small):
        raise NotSymplectic("input is not JFORM-symplectic at genus g-1")
    out = np.eye(2 * g, dtype=np.int64)
    out[: 2 * (g - 1), : 2 * (g - 1)] = M.entries
    return MatMod(out, modulus)


def project_pi(M: MatMod, g: int) -> MatMod:
    """Upper-left (2g-2) x (2g-2) block of a matrix over the iota image.

    Defined on matrices whose mod-l reduction has the block shape
    [[Mbar, 0], [0, id_2]] with Mbar symplectic (JFORM, genus g-1); on that
    preimage subgroup it is a group homomorphism because the off-diagonal
    blocks vanish mod l, so their products vanish mod l^2.
    """
    if M.dim != 2 * g:
        raise DimMismatch(f"expected dim {2 * g}, got {M.dim}")
    n = 2 * (g - 1)
    l = M.modulus.l
    red = M.entries % l
    if red[:n, n:].any() or red[n:, :n].any():
        raise NotInPreimage("off-diagonal blocks are nonzero mod l")
    if not np.array_equal(red[n:, n:], np.eye(2, dtype=np.int64) % l):
        raise NotInPreimage("lower-right block is not id_2 mod l")
    low = make_modulus(l, 1)
    if not is_symplectic(MatMod(red[:n, :n], low), form(JFORM, g - 1, low)):
        raise NotInPreimage("upper-left block is not symplectic mod l")
    return MatMod(M.entries[:n, :n], M.modulus)


E1_BLOCK = np.array(
    [[-1, -1, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]], dtype=np.int64
)
E2_BLOCK = np.array(
    [[-1, -1, 1, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, -1, 0, 0]], dtype=np.int64
)


def _padded_block(block4: np.ndarray, g: int) -> np.ndarray:
    out = np.zeros((2 * g, 2 * g), dtype=np.int64)
    out[:4, :4] = block4
    return out


def e_matrices(g: int, l: int) -> tuple:
    """The kernel elements (E1, E2) = id + l * (padded 4x4 block) mod l^2.

    Both are JFORM-symplectic mod l^2; their Lie blocks are the two seeds
    whose conjugation orbits span the whole kernel layer at genus 2.
    """
    if g < 2:
        raise RangeError("E matrices need genus >= 2")
    mod2 = make_modulus(l, 2)
    ident = np.eye(2 * g, dtype=np.int64)
    e1 = MatMod(ident + l * _padded_block(E1_BLOCK, g), mod2)
    e2 = MatMod(ident + l * _padded_block(E2_BLOCK, g), mod2)
    return e1, e2


def q_blockperm(g: int, sigma, modulus: Modulus) -> MatMod:
    """Block-permutation matrix: permutation sigma with each 1 an id_2 block.

    sigma is 0-based: block column j goes to block row sigma[j].  Always
    JFORM-symplectic, since it permutes the J_2 blocks among themselves.
    """
    sig = list(sigma)
    if sorted(sig) != list(range(g)):
        raise BadPermutation(f"{sigma!r} is not a permutation of 0..{g - 1}")
    out = np.zeros((2 * g, 2 * g), dtype=np.int64)
    for j, i in enumerate(sig):
        out[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = np.eye(2, dtype=np.int64)
    return MatMod(out, modulus)


def symplectic_inverse(M: MatMod, f: SympForm) -> MatMod:
    """F^-1 M^T F = (-F) M^T F: the O(dim^2) inverse of a symplectic matrix."""
    F = f.matrix
    return mat_mul(mat_mul(-F, M.transpose()), F)
