"""Socket transport for live sessions and log replays.

One listening port serves three kinds of clients, distinguished by
sniffing the first bytes of the connection:

  - plain stream clients exchanging newline-delimited message lines;
  - browser clients upgrading to a WebSocket (one message per frame,
    same line format);
  - plain HTTP GETs, answered from an optional static directory so the
    web UI can be served off the same port.

The simulation loop stays the single owner of all state; transports
talk to it only through the broadcaster (outbound) and an input queue
(inbound). Wall-clock pacing happens here, never inside the loop.
"""

import base64
import hashlib
import mimetypes
import posixpath
import queue
import socket
import threading
import time
from pathlib import Path

from . import protocol
from .control import InputSample
from .errors import ParseError
from .session import QueueDriver, replay_log, run_session

DEFAULT_PORT = 7471
_WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"
_QUEUE_LINES = 16384           # per-client outbound buffer
_HTTP_VERBS = (b"GET ", b"HEAD", b"POST", b"PUT ", b"OPTI", b"DELE")


class TickPacer:
    """Holds the session loop to tick*dt*multiplier wall seconds."""

    def __init__(self, dt, multiplier=1.0):
        self.dt = dt
        self.multiplier = multiplier
        self._t0 = None

    def __call__(self, tick):
        if self.multiplier <= 0.0:
            return
        now = time.monotonic()
        if self._t0 is None:
            self._t0 = now
        target = self._t0 + tick * self.dt * self.multiplier
        if target > now:
            time.sleep(target - now)


class _Client:
    """One connected consumer with its own bounded outbound queue."""

    def __init__(self, sock, websocket):
        self.sock = sock
        self.websocket = websocket
        self.out = queue.Queue(maxsize=_QUEUE_LINES)
        self.alive = True

    def offer(self, line):
        if not self.alive:
            return
        try:
            self.out.put_nowait(line)
        except queue.Full:
            self.alive = False   # consumer too slow; writer will close

    def close(self):
        self.alive = False
        try:
            self.sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        try:
            self.sock.close()
        except OSError:
            pass


class Broadcaster:
    """Fans emitted messages out to clients; late joiners get history."""

    def __init__(self):
        self._lock = threading.Lock()
        self._history = []
        self._clients = []
        self.first_attach = threading.Event()

    def publish_line(self, line):
        with self._lock:
            self._history.append(line)
            targets = list(self._clients)
        for c in targets:
            c.offer(line)

    def publish(self, message):
        self.publish_line(protocol.encode(message))

    def attach(self, client):
        with self._lock:
            for line in self._history:
                client.offer(line)
            self._clients.append(client)
        self.first_attach.set()

    def detach(self, client):
        with self._lock:
            if client in self._clients:
                self._clients.remove(client)

    def close_all(self):
        with self._lock:
            targets = list(self._clients)
            self._clients.clear()
        for c in targets:
            c.offer(None)          # sentinel: flush then close


def _ws_accept_value(key):
    digest = hashlib.sha1((key + _WS_GUID).encode("ascii")).digest()
    return base64.b64encode(digest).decode("ascii")


def _ws_frame(payload):
    """One unmasked text frame (server to client)."""
    n = len(payload)
    if n < 126:
        head = bytes((0x81, n))
    elif n < 65536:
        head = bytes((0x81, 126)) + n.to_bytes(2, "big")
    else:
        head = bytes((0x81, 127)) + n.to_bytes(8, "big")
    return head + payload


class _WsReader:
    """Incremental parser for masked client-to-server frames."""

    def __init__(self, sock):
        self.sock = sock
        self.buf = b""

    def _need(self, n):
        while len(self.buf) < n:
            chunk = self.sock.recv(4096)
            if not chunk:
                return False
            self.buf += chunk
        return True

    def next_message(self):
        """Returns the next text payload, or None at close/EOF."""
        fragments = []
        while True:
            if not self._need(2):
                return None
            b1, b2 = self.buf[0], self.buf[1]
            opcode = b1 & 0x0F
            length = b2 & 0x7F
            offset = 2
            if length == 126:
                if not self._need(offset + 2):
                    return None
                length = int.from_bytes(self.buf[offset:offset + 2], "big")
                offset += 2
            elif length == 127:
                if not self._need(offset + 8):
                    return None
                length = int.from_bytes(self.buf[offset:offset + 8], "big")
                offset += 8
            masked = bool(b2 & 0x80)
            if masked:
                if not self._need(offset + 4):
                    return None
                mask = self.buf[offset:offset + 4]
                offset += 4
            if not self._need(offset + length):
                return None
            payload = self.buf[offset:offset + length]
            self.buf = self.buf[offset + length:]
            if masked:
                payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
            if opcode == 0x8:          # close
                return None
            if opcode == 0x9:          # ping -> pong
                try:
                    self.sock.sendall(bytes((0x8A, len(payload))) + payload)
                except OSError:
                    return None
                continue
            if opcode == 0xA:          # pong
                continue
            fragments.append(payload)
            if b1 & 0x80:              # FIN
                return b"".join(fragments)


class SessionServer:
    """Listener that serves one session (or one replay) to any client."""

    def __init__(self, port=DEFAULT_PORT, host="127.0.0.1", static_dir=None):
        self.host = host
        self.static_dir = Path(static_dir) if static_dir else None
        self.broadcaster = Broadcaster()
        self.driver = QueueDriver()
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._sock.bind((host, port))
        self._sock.listen(16)
        self.port = self._sock.getsockname()[1]
        self._closing = False
        self._accept_thread = threading.Thread(target=self._accept_loop,
                                               daemon=True)
        self._accept_thread.start()

    # -- client plumbing ---------------------------------------------------

    def _accept_loop(self):
        while True:
            try:
                conn, _ = self._sock.accept()
            except OSError:
                return                 # listener closed
            threading.Thread(target=self._handle, args=(conn,),
                             daemon=True).start()

    def _handle(self, conn):
        # HTTP and WebSocket clients speak first; a silent connection is a
        # plain stream consumer, so give the peek a short deadline only.
        conn.settimeout(0.35)
        try:
            head = conn.recv(4, socket.MSG_PEEK)
        except socket.timeout:
            head = b""
        except OSError:
            conn.close()
            return
        conn.settimeout(None)
        if head and any(head.startswith(v[:len(head)]) for v in _HTTP_VERBS):
            self._handle_http(conn)
        else:
            self._serve_stream(_Client(conn, websocket=False))

    def _handle_http(self, conn):
        data = b""
        while b"\r\n\r\n" not in data:
            try:
                chunk = conn.recv(4096)
            except OSError:
                conn.close()
                return
            if not chunk or len(data) > 65536:
                conn.close()
                return
            data += chunk
        head = data.split(b"\r\n\r\n", 1)[0].decode("latin-1")
        lines = head.split("\r\n")
        try:
            verb, target, _ = lines[0].split(" ", 2)
        except ValueError:
            conn.close()
            return
        headers = {}
        for line in lines[1:]:
            if ":" in line:
                k, v = line.split(":", 1)
                headers[k.strip().lower()] = v.strip()
        if "websocket" in headers.get("upgrade", "").lower():
            key = headers.get("sec-websocket-key")
            if verb != "GET" or not key:
                conn.close()
                return
            resp = ("HTTP/1.1 101 Switching Protocols\r\n"
                    "Upgrade: websocket\r\nConnection: Upgrade\r\n"
                    f"Sec-WebSocket-Accept: {_ws_accept_value(key)}\r\n\r\n")
            try:
                conn.sendall(resp.encode("ascii"))
            except OSError:
                conn.close()
                return
            self._serve_stream(_Client(conn, websocket=True))
            return
        self._serve_static(conn, verb, target)

    def _serve_static(self, conn, verb, target):
        status, body, ctype = "404 Not Found", b"not found\n", "text/plain"
        if self.static_dir is not None and verb in ("GET", "HEAD"):
            rel = posixpath.normpath(target.split("?", 1)[0].lstrip("/"))
            if rel in (".", ""):
                rel = "index.html"
            path = (self.static_dir / rel).resolve()
            root = self.static_dir.resolve()
            if root in path.parents or path == root:
                if path.is_dir():
                    path = path / "index.html"
                if path.is_file():
                    body = path.read_bytes()
                    ctype = (mimetypes.guess_type(str(path))[0]
                             or "application/octet-stream")
                    status = "200 OK"
        if status.startswith("404"):
            body, ctype = b"not found\n", "text/plain"
        resp = (f"HTTP/1.1 {status}\r\nContent-Type: {ctype}\r\n"
                f"Content-Length: {len(body)}\r\nConnection: close\r\n\r\n")
        try:
            conn.sendall(resp.encode("ascii") + (b"" if verb == "HEAD" else body))
        except OSError:
            pass
        conn.close()

    def _serve_stream(self, client):
        self.broadcaster.attach(client)
        writer = threading.Thread(target=self._write_loop, args=(client,),
                                  daemon=True)
        writer.start()
        try:
            self._read_loop(client)
        finally:
            self.broadcaster.detach(client)
            client.offer(None)

    def _write_loop(self, client):
        while True:
            line = client.out.get()
            if line is None or not client.alive:
                break
            data = line.encode("utf-8")
            if client.websocket:
                data = _ws_frame(data)
            else:
                data += b"\n"
            try:
                client.sock.sendall(data)
            except OSError:
                break
        client.close()

    def _read_loop(self, client):
        if client.websocket:
            reader = _WsReader(client.sock)
            get = reader.next_message
        else:
            fh = client.sock.makefile("rb")

            def get():
                line = fh.readline()
                return line.rstrip(b"\r\n") if line else None

        while client.alive:
            try:
                raw = get()
            except OSError:
                return
            if raw is None:
                return
            if not raw:
                continue
            try:
                self._ingest(raw.decode("utf-8"))
            except (ParseError, UnicodeDecodeError):
                return             # protocol violation: drop this client

    def _ingest(self, line):
        message = protocol.decode(line)
        if isinstance(message, protocol.Input):
            self.driver.push(InputSample(
                axis1=message.axis1, axis2=message.axis2,
                mode_switch_pressed=message.mode_switch_pressed,
                grip_toggle_pressed=message.grip_toggle_pressed,
                timestamp_ms=message.timestamp_ms))
        # any other tag from a client is informational; ignore it

    # -- serving entry points ----------------------------------------------

    def wait_for_client(self, timeout=None):
        return self.broadcaster.first_attach.wait(timeout)

    def serve_session(self, cfg, pace=1.0, log_path=None, driver=None):
        """Run one session, streaming every message to all clients."""
        pacer = TickPacer(cfg.dt, pace) if pace > 0.0 else None
        result = run_session(cfg, driver=driver or self.driver,
                             log_path=log_path,
                             sink=self.broadcaster.publish, pacer=pacer)
        return result

    def serve_replay(self, path, pace=1.0):
        """Stream a saved log to all clients, pacing by its tick clock."""
        count = 0
        for message in replay_log(path, pace=pace):
            self.broadcaster.publish(message)
            count += 1
        return count

    def close(self):
        if self._closing:
            return
        self._closing = True
        self.broadcaster.close_all()
        try:
            self._sock.close()
        except OSError:
            pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        # give writers a moment to flush the tail of the stream
        time.sleep(0.05)
        self.close()
