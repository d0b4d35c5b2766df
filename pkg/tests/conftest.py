from pathlib import Path

import pytest

from cybermap import catalog

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def snapshot():
    return catalog.load_snapshot(DATA_DIR)


@pytest.fixture(scope="session")
def live_server(snapshot):
    from cybermap import server as server_mod

    httpd = server_mod.make_http_server(server_mod.MapServer(snapshot), "127.0.0.1", 0)
    import threading

    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{httpd.server_address[1]}"
    yield base
    httpd.shutdown()
