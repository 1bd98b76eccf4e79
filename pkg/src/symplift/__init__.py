"""symplift: exact arithmetic for symplectic groups over Z/l^k Z.

Closure enumeration, kernel-layer spans, and certification that a finitely
generated closed subgroup of Sp_{2g}(Z_l) is the full group.
"""

__version__ = "0.1.0"

from .errors import SympliftError
from .residue_ring import Modulus, make_modulus
from .matmod import MatMod, mat_inv, mat_pow
from .symplectic import (
    JFORM,
    OMEGA,
    SympForm,
    form,
    group_order,
    is_lie,
    is_symplectic,
    standard_generators,
    symplectic_inverse,
)
from .liealg import (
    LieVector,
    Subspace,
    conj_act,
    conj_orbit_span,
    exp_layer,
    lie_dim,
    log_layer,
)
from .groupengine import (
    GenSet,
    abelianization_index,
    closure,
    commutator_subgroup,
    harvest_kernel_span,
    surjectivity_check,
)
from .certifier import (
    CertReport,
    CertStep,
    base_case_randomized,
    certify_theorem_mode,
    power_lift_layer_check,
    replicate_inductive_step,
    replicate_lemma_4to8,
    replicate_lemma_l,
    verify_direct,
)

__all__ = [
    "__version__",
    "SympliftError",
    "Modulus",
    "make_modulus",
    "MatMod",
    "mat_inv",
    "mat_pow",
    "JFORM",
    "OMEGA",
    "SympForm",
    "form",
    "group_order",
    "is_lie",
    "is_symplectic",
    "standard_generators",
    "symplectic_inverse",
    "LieVector",
    "Subspace",
    "conj_act",
    "conj_orbit_span",
    "exp_layer",
    "lie_dim",
    "log_layer",
    "GenSet",
    "abelianization_index",
    "closure",
    "commutator_subgroup",
    "harvest_kernel_span",
    "surjectivity_check",
    "CertReport",
    "CertStep",
    "base_case_randomized",
    "certify_theorem_mode",
    "power_lift_layer_check",
    "replicate_inductive_step",
    "replicate_lemma_4to8",
    "replicate_lemma_l",
    "verify_direct",
]
