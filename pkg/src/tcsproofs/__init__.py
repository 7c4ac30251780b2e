from __future__ import annotations

from tcsproofs._version import version as __version__
from tcsproofs.certificates import ProofCertificate, verify_certificate
from tcsproofs.lp import solve_tcs
from tcsproofs.systems import build_ord, build_php

__all__ = [
    "ProofCertificate",
    "__version__",
    "build_ord",
    "build_php",
    "solve_tcs",
    "verify_certificate",
]
