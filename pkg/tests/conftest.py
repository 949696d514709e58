import sys
from pathlib import Path

import pytest

from segcrawl import FixtureCorpus, serve_fixtures

sys.path.insert(0, str(Path(__file__).parent))


THREE_PAGES = {
    "/a": (200, "<h1>alpha</h1> price: 10 USD"),
    "/b": (200, "price: 250 USD and price: 300 USD"),
    "/c": (200, "no numbers here"),
}


@pytest.fixture
def fixture_server():
    server = serve_fixtures(FixtureCorpus(pages=dict(THREE_PAGES)))
    yield server
    server.shutdown()
