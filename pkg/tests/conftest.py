import random

import pytest

from hpe import KeyGenParams, keygen
from hpe.core.alphabet import hex16


@pytest.fixture(scope="session")
def pair16():
    """A (public, private) pair at q=2, n=16 with the text alphabet."""
    return keygen(KeyGenParams(q=2, n=16, seed=101))


@pytest.fixture(scope="session")
def pair16_hex():
    return keygen(KeyGenParams(q=2, n=16, seed=102), alphabet=hex16())


@pytest.fixture(scope="session")
def pair12():
    """Small pair whose ciphertext space (2^12) can be searched outright."""
    return keygen(KeyGenParams(q=2, n=12, seed=103))


def random_messages(alphabet, blocks, count, seed):
    rng = random.Random(seed)
    letters = alphabet.letters
    return ["".join(rng.choice(letters) for _ in range(blocks))
            for _ in range(count)]
