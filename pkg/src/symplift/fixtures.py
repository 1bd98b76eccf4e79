"""Transcribed matrix fixtures and constructed negative fixtures.

The two generator listings are transcribed row-major exactly as printed in
their source listings: the pair (A, B) that generates the full group at
level l^2, and the kernel elements E1/E2 whose conjugation orbits span the
Lie algebra.  Which alternating form the (A, B) pair preserves is not stated
alongside the listing, so preserved_forms() recomputes it; the frozen answer
(OMEGA, for both l = 2 and l = 3) is pinned in tests.

siegel_genset builds deliberately deficient generators - block
upper-triangular symplectic matrices - whose mod-l closure is a proper
parabolic subgroup.  They exercise the REFUTED path with a re-validating
witness.
"""

from __future__ import annotations

import numpy as np

from .errors import RangeError
from .groupengine import GenSet
from .matmod import MatMod, mat_inv
from .residue_ring import Modulus, make_modulus
from .symplectic import JFORM, OMEGA, form, is_symplectic

# the full-group generator pair at level l^2, row-major 4x4
LISTING_A = (
    (1, 0, 0, 0),
    (1, -1, 0, 0),
    (0, 0, 1, 1),
    (0, 0, 0, -1),
)
LISTING_B = (
    (0, 0, -1, 0),
    (0, 0, 0, -1),
    (1, 0, 1, 0),
    (0, 1, 0, 0),
)


def preserved_forms(mats, g: int, modulus: Modulus) -> tuple:
    """Which of the two standard forms every matrix in mats preserves."""
    out = []
    for kind in (OMEGA, JFORM):
        f = form(kind, g, modulus)
        if all(is_symplectic(M, f) for M in mats):
            out.append(kind)
    return tuple(out)


def listing_pair(l: int) -> GenSet:
    """The transcribed (A, B) pair as a generating set mod l^2."""
    if l not in (2, 3):
        raise RangeError("the listing pair is pinned to l in {2, 3}")
    mod = make_modulus(l, 2)
    mats = [MatMod(np.array(LISTING_A), mod), MatMod(np.array(LISTING_B), mod)]
    kinds = preserved_forms(mats, 2, mod)
    if not kinds:
        raise RangeError("listing pair preserves neither standard form")
    f = form(kinds[0], 2, mod)
    return GenSet(g=2, modulus=mod, form=f, generators=tuple(mats), label="listing-pair")


def _gl_generators(g: int) -> list:
    """Small generating family for GL_g as integer arrays."""
    out = []
    if g == 1:
        out.append(np.array([[1]], dtype=np.int64))
        out.append(np.array([[-1]], dtype=np.int64))
        return out
    cyc = np.zeros((g, g), dtype=np.int64)
    for i in range(g):
        cyc[(i + 1) % g, i] = 1
    out.append(cyc)
    elem = np.eye(g, dtype=np.int64)
    elem[0, 1] = 1
    out.append(elem)
    return out


def siegel_genset(g: int, l: int, k: int) -> GenSet:
    """Block upper-triangular generators: a proper parabolic at every level.

    Elements [[A, A S], [0, (A^T)^-1]] with A invertible and S symmetric are
    symplectic for the OMEGA form but can never generate anything with a
    nonzero lower-left block, so the mod-l closure is a proper subgroup.
    """
    mod = make_modulus(l, k)
    f = form(OMEGA, g, mod)
    mats = []
    sym_seeds = [np.zeros((g, g), dtype=np.int64)]
    s1 = np.zeros((g, g), dtype=np.int64)
    s1[0, 0] = 1
    sym_seeds.append(s1)
    if g > 1:
        s2 = np.zeros((g, g), dtype=np.int64)
        s2[0, 1] = 1
        s2[1, 0] = 1
        sym_seeds.append(s2)
    for a in _gl_generators(g):
        ainv_t = mat_inv(MatMod(a, mod)).transpose().entries
        for s in sym_seeds:
            m = np.zeros((2 * g, 2 * g), dtype=np.int64)
            m[:g, :g] = a
            m[:g, g:] = (a @ s) % mod.value
            m[g:, g:] = ainv_t
            mats.append(MatMod(m, mod))
    return GenSet(
        g=g, modulus=mod, form=f, generators=tuple(mats), label="siegel-triangular"
    )
