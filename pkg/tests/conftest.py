import pytest

from fpattr import bch, channel, harness


@pytest.fixture(scope="session")
def params63():
    return bch.build_params(6, 4, 32)


@pytest.fixture(scope="session")
def params63_full():
    # unshortened variant: payload occupies all 39 message bits
    return bch.build_params(6, 4, 39)


@pytest.fixture(scope="session")
def params15():
    return bch.build_params(4, 2, 7)


@pytest.fixture(scope="session")
def corpus():
    return harness.synthetic_corpus(count=8, size=512, seed=100)


@pytest.fixture(scope="session")
def embed_cfg():
    return channel.EmbedConfig(seed=7)
