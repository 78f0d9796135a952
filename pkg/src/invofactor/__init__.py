"""invofactor: factor classical-group similitudes into two anti-unitary pieces.

Public surface re-exported here; see README.md for the command line.
"""

from .errors import (
    BudgetExceededError,
    DegenerateFormError,
    DetRefinementError,
    FieldConstructionError,
    InputError,
    InternalInvariantError,
    InvofactorError,
    NotInGroupError,
    SingularMatrixError,
    VerificationError,
)
from .factor import (
    CERT_FORMAT,
    FactorCert,
    cert_from_serialized,
    dualizing_conjugator,
    factor,
    factor_det_refined,
    standard_reverser,
    symmetric_conjugator,
    symmetric_factor,
    symmetric_unitary_conjugator,
)
from .fields import FieldElem, FieldTower, field_from_descriptor, field_make
from .forms import (
    SesquiForm,
    anti_unitary_enumerate,
    form_from_descriptor,
    group_enumerate,
    group_sample,
    hermitian_form,
    least_nonsquare,
    orthogonal_form,
    orthogonal_minus_form,
    orthogonal_plus_form,
    symplectic_form,
)
from .linalg import Mat, SemiLinear, block_diag, hstack, mat_from_serialized, vstack
from .verify import (
    CHECK_NAMES,
    VerifyReport,
    check_cert,
    core_checks,
    oracle_involution_set,
    survey,
    verify_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "CERT_FORMAT",
    "CHECK_NAMES",
    "DegenerateFormError",
    "DetRefinementError",
    "FactorCert",
    "FieldConstructionError",
    "FieldElem",
    "FieldTower",
    "InputError",
    "InternalInvariantError",
    "InvofactorError",
    "Mat",
    "NotInGroupError",
    "SemiLinear",
    "SesquiForm",
    "SingularMatrixError",
    "VerificationError",
    "VerifyReport",
    "anti_unitary_enumerate",
    "block_diag",
    "cert_from_serialized",
    "check_cert",
    "core_checks",
    "dualizing_conjugator",
    "factor",
    "factor_det_refined",
    "field_from_descriptor",
    "field_make",
    "form_from_descriptor",
    "group_enumerate",
    "group_sample",
    "hermitian_form",
    "hstack",
    "least_nonsquare",
    "mat_from_serialized",
    "oracle_involution_set",
    "orthogonal_form",
    "orthogonal_minus_form",
    "orthogonal_plus_form",
    "standard_reverser",
    "survey",
    "symmetric_conjugator",
    "symmetric_factor",
    "symmetric_unitary_conjugator",
    "symplectic_form",
    "verify_certificate",
    "vstack",
    "__version__",
]
