"""
Live service: streaming a session over a socket
===============================================

Starts the TCP service on an ephemeral port, connects a plain
newline-delimited client, injects one user input over the wire, and
reads the full session stream back.
"""

import socket
import threading

from cobot_intent import SessionServer, default_config, protocol

cfg = default_config(timeout_s=2.0)

with SessionServer(port=0) as server:
    print(f"serving on 127.0.0.1:{server.port}")

    received = []

    def client():
        sock = socket.create_connection(("127.0.0.1", server.port))
        # one joystick sample: full deflection on axis 1
        line = protocol.encode(protocol.Input(
            sid="000000000000", seq=0, tick=0, axis1=1.0, axis2=0.0,
            mode_switch_pressed=False, grip_toggle_pressed=False,
            timestamp_ms=0))
        sock.sendall(line.encode() + b"\n")
        buf = b""
        while True:
            chunk = sock.recv(65536)
            if not chunk:
                break
            buf += chunk
        received.extend(
            protocol.decode(ln) for ln in buf.decode().split("\n") if ln)
        sock.close()

    thread = threading.Thread(target=client)
    thread.start()
    server.wait_for_client(timeout=5)

    # the server loop consumes queued client inputs tick by tick
    result = server.serve_session(cfg, pace=0.0)
    server.broadcaster.close_all()
    thread.join()

kinds = {}
for m in received:
    kinds[type(m).__name__] = kinds.get(type(m).__name__, 0) + 1
print(f"client received {len(received)} messages: {kinds}")
inputs = [m for m in received if isinstance(m, protocol.Input)]
print(f"the injected input came back in the stream: "
      f"{bool(inputs) and inputs[0].axis1 == 1.0}")
print(f"stream matches the session log exactly: "
      f"{received == list(result.messages)}")
