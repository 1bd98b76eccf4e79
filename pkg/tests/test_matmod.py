import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symplift.errors import DimMismatch, ModMismatch, NotInvertible, RangeError
from symplift.matmod import (
    MatMod,
    canonical_key,
    entry_bits,
    mat_inv,
    mat_mul,
    mat_pow,
    mat_reduce,
    mul_arrays,
    product_fits_int64,
)
from symplift.residue_ring import make_modulus

M4 = make_modulus(2, 2)
M9 = make_modulus(3, 2)


def _rand_mat(rng, dim, mod):
    return MatMod(rng.integers(0, mod.value, (dim, dim)), mod)


def test_canonicalization_and_flat_input():
    a = MatMod([-1, 4, 5, 2], M4)
    assert a.entries.tolist() == [[3, 0], [1, 2]]
    assert a.row_major() == [3, 0, 1, 2]
    assert a == MatMod([[3, 0], [1, 2]], M4)


def test_shape_validation():
    with pytest.raises(DimMismatch):
        MatMod([1, 2, 3], M4)
    with pytest.raises(DimMismatch):
        MatMod(np.zeros((2, 3), dtype=np.int64), M4)
    with pytest.raises(RangeError):
        MatMod(np.zeros((14, 14), dtype=np.int64), M4)


def test_entries_read_only():
    a = MatMod.identity(3, M9)
    with pytest.raises(ValueError):
        a.entries[0, 0] = 5


def test_arithmetic_against_python_ints():
    rng = np.random.default_rng(7)
    for _ in range(25):
        a = _rand_mat(rng, 3, M9)
        b = _rand_mat(rng, 3, M9)
        want = [
            [sum(int(a.entries[i, t]) * int(b.entries[t, j]) for t in range(3)) % 9
             for j in range(3)]
            for i in range(3)
        ]
        assert (a * b).entries.tolist() == want
        assert (a + b).entries.tolist() == ((a.entries + b.entries) % 9).tolist()
        assert (a - b).entries.tolist() == ((a.entries - b.entries) % 9).tolist()
        assert (-a).entries.tolist() == ((-a.entries) % 9).tolist()


def test_modulus_and_dim_mismatch_rejected():
    a = MatMod.identity(2, M4)
    with pytest.raises(ModMismatch):
        mat_mul(a, MatMod.identity(2, M9))
    with pytest.raises(DimMismatch):
        mat_mul(a, MatMod.identity(3, M4))


def test_mat_pow_matches_repeated_product():
    rng = np.random.default_rng(11)
    a = _rand_mat(rng, 3, M9)
    acc = MatMod.identity(3, M9)
    for n in range(8):
        assert mat_pow(a, n) == acc
        acc = acc * a
    with pytest.raises(RangeError):
        mat_pow(a, -1)


def test_mat_inv_round_trip():
    rng = np.random.default_rng(13)
    mod = make_modulus(2, 3)
    eye = MatMod.identity(4, mod)
    found = 0
    while found < 20:
        a = _rand_mat(rng, 4, mod)
        try:
            inv = mat_inv(a)
        except NotInvertible:
            continue
        found += 1
        assert a * inv == eye
        assert inv * a == eye


def test_mat_inv_rejects_singular():
    a = MatMod([[2, 0], [0, 1]], M4)  # 2 is a zero divisor mod 4
    with pytest.raises(NotInvertible):
        mat_inv(a)


def test_mat_reduce_is_ring_hom():
    rng = np.random.default_rng(17)
    mod = make_modulus(3, 3)
    for _ in range(10):
        a = _rand_mat(rng, 3, mod)
        b = _rand_mat(rng, 3, mod)
        assert mat_reduce(a * b, 2) == mat_reduce(a, 2) * mat_reduce(b, 2)
        assert mat_reduce(a + b, 1) == mat_reduce(a, 1) + mat_reduce(b, 1)


def test_overflow_path_matches_int64_path():
    # force the object-dtype branch and cross-check on a modulus where the
    # int64 path is still exact
    mod = make_modulus(5, 2)
    rng = np.random.default_rng(19)
    a = rng.integers(0, 25, (3, 3))
    b = rng.integers(0, 25, (3, 3))
    narrow = mul_arrays(a, b, mod)
    wide = (a.astype(object) @ b.astype(object) % 25).astype(np.int64)
    assert np.array_equal(narrow, wide)
    assert product_fits_int64(3, 25)
    assert not product_fits_int64(12, 2**31)


def test_canonical_key_injective_and_stable():
    mats = [MatMod([[a, b], [c, d]], M4)
            for a in range(4) for b in range(4) for c in range(2) for d in range(2)]
    keys = {canonical_key(m) for m in mats}
    assert len(keys) == len(mats)
    a = MatMod([[1, 2], [3, 0]], M4)
    assert canonical_key(a) == canonical_key(MatMod([[5, -2], [-1, 4]], M4))
    assert entry_bits(M4) == 2
    assert entry_bits(make_modulus(3, 2)) == 4


def test_hash_eq_consistency():
    a = MatMod([[1, 2], [3, 0]], M4)
    b = MatMod([[5, 6], [7, 4]], M4)
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1


@settings(max_examples=60)
@given(st.integers(min_value=0, max_value=9**9 - 1), st.integers(min_value=0, max_value=9**9 - 1),
       st.integers(min_value=0, max_value=9**9 - 1))
def test_associativity_mod9(xa, xb, xc):
    def mk(x):
        return MatMod([(x // 9**i) % 9 for i in range(9)], M9)
    a, b, c = mk(xa), mk(xb), mk(xc)
    assert (a * b) * c == a * (b * c)
