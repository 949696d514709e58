"""Local HTTP fixture server with fixed pages, for deterministic integration tests."""

import logging
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

logger = logging.getLogger(__name__)


@dataclass
class FixtureCorpus:
    """Path -> (status code, body) pages plus the address to listen on."""

    pages: dict[str, tuple[int, str]] = field(default_factory=dict)
    host: str = "127.0.0.1"
    port: int = 0  # 0 = ephemeral

    @classmethod
    def from_dir(cls, directory: str | Path, host: str = "127.0.0.1", port: int = 0) -> "FixtureCorpus":
        """Serve each regular file of a directory at /<filename> with status 200."""
        pages = {}
        for entry in sorted(Path(directory).iterdir()):
            if entry.is_file():
                pages[f"/{entry.name}"] = (200, entry.read_text(encoding="utf-8"))
        return cls(pages=pages, host=host, port=port)


class _FixtureHTTPServer(ThreadingHTTPServer):
    daemon_threads = True
    request_queue_size = 128

    def __init__(self, address, handler_cls, pages):
        self.pages = pages
        super().__init__(address, handler_cls)


class _FixtureHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def do_GET(self):
        path = self.path.split("?", 1)[0]
        status, body = self.server.pages.get(path, (404, "not found"))
        data = body.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "text/html; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, fmt, *args):
        logger.debug("fixture server: " + fmt, *args)


class FixtureServer:
    """Running fixture server handle: address, URL helpers, idempotent shutdown."""

    def __init__(self, corpus: FixtureCorpus):
        self._httpd = _FixtureHTTPServer((corpus.host, corpus.port), _FixtureHandler,
                                         dict(corpus.pages))
        self._thread: threading.Thread | None = None
        self._down = False

    def start(self) -> "FixtureServer":
        if self._thread is None:
            self._thread = threading.Thread(
                target=self._httpd.serve_forever, name="fixture-server", daemon=True
            )
            self._thread.start()
        return self

    @property
    def address(self) -> tuple[str, int]:
        host, port = self._httpd.server_address[:2]
        return str(host), int(port)

    @property
    def base_url(self) -> str:
        host, port = self.address
        return f"http://{host}:{port}"

    def url_for(self, path: str) -> str:
        if not path.startswith("/"):
            path = "/" + path
        return self.base_url + path

    def shutdown(self) -> None:
        if self._down:
            return
        self._down = True
        self._httpd.shutdown()
        if self._thread is not None:
            self._thread.join()
        self._httpd.server_close()

    def __enter__(self) -> "FixtureServer":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.shutdown()


def serve_fixtures(corpus: FixtureCorpus) -> FixtureServer:
    """Bind and start serving; raises OSError when the address is taken."""
    return FixtureServer(corpus).start()
