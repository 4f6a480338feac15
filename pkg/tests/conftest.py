import pytest

from concatqec import concat, graph_code


@pytest.fixture(scope="session")
def graph():
    return graph_code.bundled_graph()


@pytest.fixture(scope="session")
def encoder(graph):
    return graph_code.build_encoder(graph)


@pytest.fixture(scope="session")
def decoder():
    return graph_code.build_syndrome_decoder()


@pytest.fixture(scope="session")
def table(encoder, decoder):
    return graph_code.generate_syndrome_table(encoder, decoder)


@pytest.fixture(scope="session")
def spec():
    return concat.default_spec()
