"""Group signatures with nicknames over BN254.

Modules:

- ``algebra``: groups, pairing, hashing and operation counters
- ``sigma``: sigma protocols and Fiat-Shamir proofs
- ``ds``: the signature scheme binding users to their registration
- ``ngs``: key generation, join/issue, nicknames, trace, open/judge, sign/verify
- ``harness``: security-game oracles, the correctness experiment and sanity runs
- ``nickhat``: the NickHat ledger simulator
- ``cli``: the ``nicknames`` command
"""

from .algebra import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
