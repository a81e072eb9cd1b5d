import random
from dataclasses import dataclass, field

import pytest

from nicknames import ngs


@dataclass
class Group:
    issuer: ngs.IssuerKeys
    opener: ngs.OpenerKeys
    state: ngs.GroupState
    users: dict = field(default_factory=dict)
    secrets: dict = field(default_factory=dict)
    requests: dict = field(default_factory=dict)

    @property
    def ipk(self):
        return self.issuer.ipk

    @property
    def opk(self):
        return self.opener.opk


def build_group(n, seed=0):
    rng = random.Random(seed)
    group = Group(ngs.ikg(rng), ngs.okg(rng), ngs.GroupState())
    for i in range(n):
        keys = ngs.ukg(i, group.state, rng)
        secret, req = ngs.join(keys.usk, group.opk, rng)
        ngs.iss(i, group.issuer, req, group.opk, group.state)
        group.users[i], group.secrets[i], group.requests[i] = keys, secret, req
    return group


@pytest.fixture(scope="session")
def group():
    """Five admitted members; treat as read-only (copy the state before mutating)."""
    return build_group(5, seed=2024)


@pytest.fixture
def rng():
    return random.Random(99)
