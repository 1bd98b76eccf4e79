import numpy as np
import pytest

from symplift.groupengine import GenSet
from symplift.residue_ring import make_modulus
from symplift.symplectic import OMEGA, form, standard_generators


def standard_genset(g: int, l: int, k: int, kind: str = OMEGA) -> GenSet:
    mod = make_modulus(l, k)
    f = form(kind, g, mod)
    return GenSet(
        g=g,
        modulus=mod,
        form=f,
        generators=tuple(standard_generators(g, mod, f)),
        label=f"standard-g{g}-l{l}-k{k}",
    )


@pytest.fixture
def rng():
    return np.random.default_rng(np.random.SeedSequence([20260815]))
