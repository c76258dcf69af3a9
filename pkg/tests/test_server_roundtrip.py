"""End-to-end check that the CLI talks to a live service identically."""

import json
import socket
import threading
import time

import httpx
import pytest
import uvicorn

from subrigid.cli import main
from subrigid.service.app import app

TM_SPEC = '{"alphabet": ["0","1"], "rules": {"0": "01", "1": "10"}}'


@pytest.fixture(scope="module")
def live_server():
    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
    config = uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{port}"
    deadline = time.time() + 10
    while time.time() < deadline:
        try:
            if httpx.get(f"{base}/healthz", timeout=1.0).status_code == 200:
                break
        except httpx.TransportError:
            time.sleep(0.05)
    else:
        pytest.fail("server did not come up")
    yield base
    server.should_exit = True
    thread.join(timeout=5)


def test_cli_against_live_server(live_server, tmp_path, capsys):
    path = tmp_path / "tm.json"
    path.write_text(TM_SPEC)
    local_code = main(["delta", str(path)])
    local_out = capsys.readouterr().out
    remote_code = main(["--server", live_server, "delta", str(path)])
    remote_out = capsys.readouterr().out
    assert local_code == remote_code == 0
    assert json.loads(local_out) == json.loads(remote_out)


def test_cli_remote_rejection(live_server, tmp_path, capsys):
    path = tmp_path / "periodic.json"
    path.write_text('{"alphabet": ["0","1"], "rules": {"0": "010", "1": "101"}}')
    code = main(["--server", live_server, "delta", str(path)])
    captured = capsys.readouterr()
    assert code == 2
    assert "periodic" in captured.err


def test_cli_remote_approx(live_server, capsys):
    code = main(["--server", live_server, "approx", "--delta", "25/49", "--eps", "1e-6"])
    captured = capsys.readouterr()
    assert code == 0
    body = json.loads(captured.out)["approx"]
    assert body["exact_hit"] is True
