from __future__ import annotations

import pytest

from grantprobe.data import demo_bundle
from grantprobe.modelgw import EndpointConfig, Gateway, MockTransport


@pytest.fixture(scope="session")
def bundle():
    return demo_bundle()


@pytest.fixture()
def gateway():
    return Gateway(MockTransport(), retry_cap=3, backoff_base_ms=0)


@pytest.fixture()
def reviewer_endpoint():
    return EndpointConfig(name="reviewer", model="reviewer-20b")


@pytest.fixture()
def embedder_endpoint():
    return EndpointConfig(name="embedder", model="embed-small")
