from itertools import permutations, product

import numpy as np
import pytest

from symplift.errors import (
    BadPermutation,
    ModMismatch,
    NotInPreimage,
    NotLie,
    NotPrime,
    NotSymplectic,
    Overflow,
    RangeError,
)
from symplift.matmod import MatMod, mat_inv, mat_mul
from symplift.residue_ring import make_modulus
from symplift.symplectic import (
    E1_BLOCK,
    E2_BLOCK,
    JFORM,
    OMEGA,
    BlockDecomp,
    block_decomp,
    compose_blocks,
    e_matrices,
    embed_iota,
    form,
    group_order,
    is_lie,
    is_symplectic,
    project_pi,
    q_blockperm,
    standard_generators,
    symplectic_inverse,
    to_jform,
    to_omega,
)


def brute_force_order(g, l, k):
    """Independent oracle: count all 2g x 2g matrices preserving OMEGA."""
    mod = make_modulus(l, k)
    f = form(OMEGA, g, mod)
    d = 2 * g
    count = 0
    for flat in product(range(mod.value), repeat=d * d):
        if is_symplectic(MatMod(np.array(flat, dtype=np.int64).reshape(d, d), mod), f):
            count += 1
    return count


def test_form_matrices():
    mod = make_modulus(5, 1)
    fo = form(OMEGA, 2, mod)
    assert fo.matrix.entries.tolist() == [
        [0, 0, 1, 0], [0, 0, 0, 1], [4, 0, 0, 0], [0, 4, 0, 0]]
    fj = form(JFORM, 2, mod)
    assert fj.matrix.entries.tolist() == [
        [0, 1, 0, 0], [4, 0, 0, 0], [0, 0, 0, 1], [0, 0, 4, 0]]
    # the permutation conjugates one form matrix into the other
    p = fo.perm
    conv = mat_mul(mat_mul(p.transpose(), fo.matrix), p)
    assert conv == fj.matrix


def test_form_rejects_unknown_kind():
    with pytest.raises(RangeError):
        form("sympl", 2, make_modulus(2, 1))


@pytest.mark.parametrize("g,l,k,expected", [
    (1, 2, 1, 6),
    (1, 3, 1, 24),
    (1, 2, 2, 48),
    (2, 2, 1, 720),
])
def test_group_order_against_brute_force(g, l, k, expected):
    assert brute_force_order(g, l, k) == expected
    assert group_order(g, l, k) == expected


def test_group_order_formula_values():
    assert group_order(1, 5, 1) == 120
    assert group_order(2, 3, 1) == 51840
    assert group_order(2, 2, 2) == 737280
    assert group_order(3, 2, 1) == 1451520
    assert group_order(2, 5, 1) == 9360000
    # k-scaling: one level costs l^(g(2g+1))
    assert group_order(2, 3, 2) == 51840 * 3**10


def test_group_order_validation():
    with pytest.raises(NotPrime):
        group_order(2, 4, 1)
    with pytest.raises(RangeError):
        group_order(0, 2, 1)
    with pytest.raises(Overflow):
        group_order(6, 97, 9)


@pytest.mark.parametrize("kind", [OMEGA, JFORM])
@pytest.mark.parametrize("g,l,k", [(1, 2, 1), (2, 2, 2), (2, 3, 1), (3, 2, 1)])
def test_standard_generators_symplectic(g, l, k, kind):
    mod = make_modulus(l, k)
    f = form(kind, g, mod)
    gens = standard_generators(g, mod, f)
    assert len(gens) == 1 + g * (g + 1) // 2
    for M in gens:
        assert is_symplectic(M, f)


def test_form_conversion_round_trip(rng):
    mod = make_modulus(3, 2)
    fo = form(OMEGA, 2, mod)
    fj = form(JFORM, 2, mod)
    for M in standard_generators(2, mod, fo):
        Mj = to_jform(M, fo)
        assert is_symplectic(Mj, fj)
        assert to_omega(Mj, fo) == M


def test_symplectic_inverse_matches_mat_inv():
    mod = make_modulus(2, 2)
    f = form(OMEGA, 2, mod)
    for M in standard_generators(2, mod, f):
        inv = symplectic_inverse(M, f)
        assert inv == mat_inv(M)
        assert mat_mul(M, inv).is_identity()


def test_is_lie_basis_blocks():
    mod = make_modulus(3, 1)
    f = form(OMEGA, 2, mod)
    a = np.zeros((2, 2), dtype=np.int64)
    a[0, 1] = 1
    b = np.eye(2, dtype=np.int64)
    d = compose_blocks(
        BlockDecomp(A=MatMod(a, mod), B=MatMod(b, mod), C=MatMod.zeros(2, mod))
    )
    assert is_lie(d, f)
    notlie = MatMod.identity(4, mod)
    assert not is_lie(notlie, f)
    with pytest.raises(RangeError):
        is_lie(MatMod.identity(4, make_modulus(3, 2)), form(OMEGA, 2, make_modulus(3, 2)))


def test_block_decomp_round_trip(rng):
    mod = make_modulus(5, 1)
    f = form(OMEGA, 2, mod)
    for _ in range(20):
        a = rng.integers(0, 5, (2, 2))
        b = rng.integers(0, 5, (2, 2))
        c = rng.integers(0, 5, (2, 2))
        b = (b + b.T) % 5
        c = (c + c.T) % 5
        M = compose_blocks(BlockDecomp(MatMod(a, mod), MatMod(b, mod), MatMod(c, mod)))
        assert is_lie(M, f)
        d = block_decomp(M, f)
        assert d.A == MatMod(a, mod) and d.B == MatMod(b, mod) and d.C == MatMod(c, mod)
    with pytest.raises(NotLie):
        block_decomp(MatMod.identity(4, mod), f)
    with pytest.raises(RangeError):
        block_decomp(MatMod.zeros(4, mod), form(JFORM, 2, mod))


@pytest.mark.parametrize("l", [2, 3])
@pytest.mark.parametrize("g", [2, 3])
def test_e_matrices_are_jform_kernel_elements(g, l):
    mod2 = make_modulus(l, 2)
    fj = form(JFORM, g, mod2)
    e1, e2 = e_matrices(g, l)
    for em, block in ((e1, E1_BLOCK), (e2, E2_BLOCK)):
        assert is_symplectic(em, fj)
        assert ((em.entries - np.eye(2 * g, dtype=np.int64)) % l == 0).all()
        lifted = (em.entries - np.eye(2 * g, dtype=np.int64)) // l
        assert np.array_equal(lifted[:4, :4] % l, block % l)
    with pytest.raises(RangeError):
        e_matrices(1, 2)


def test_e_blocks_satisfy_jform_lie_condition():
    for l in (2, 3):
        mod1 = make_modulus(l, 1)
        fj = form(JFORM, 2, mod1)
        for block in (E1_BLOCK, E2_BLOCK):
            assert is_lie(MatMod(block, mod1), fj)


def test_q_blockperm_group_action():
    mod = make_modulus(3, 1)
    for g in (2, 3):
        fj = form(JFORM, g, mod)
        for sigma in permutations(range(g)):
            q = q_blockperm(g, sigma, mod)
            assert is_symplectic(q, fj)
        # composition convention: column block j lands at row sigma[j]
        s1 = (1, 0, 2) if g == 3 else (1, 0)
        q1 = q_blockperm(g, s1, mod)
        assert mat_mul(q1, q1).is_identity()
    with pytest.raises(BadPermutation):
        q_blockperm(2, (0, 0), mod)


def test_embed_project_round_trip():
    mod = make_modulus(2, 2)
    fj2 = form(JFORM, 2, mod)
    fj3 = form(JFORM, 3, mod)
    for M in standard_generators(2, mod, fj2):
        big = embed_iota(M, 3, mod)
        assert is_symplectic(big, fj3)
        assert project_pi(big, 3) == M
    with pytest.raises(NotSymplectic):
        embed_iota(MatMod([[1, 1], [1, 1]], mod), 2, mod)
    with pytest.raises(NotInPreimage):
        project_pi(form(JFORM, 3, mod).matrix, 3)


def test_project_pi_requires_identity_corner():
    mod = make_modulus(3, 2)
    arr = np.eye(6, dtype=np.int64)
    arr[4, 4] = 2
    with pytest.raises(NotInPreimage):
        project_pi(MatMod(arr, mod), 3)
