"""Drive a full timed session against the HTTP service.

Starts the server in a background thread, plays one session over the
wire exactly as a browser client would (next trial, answer, repeat,
finish), and shows that the event log replays to the same report.
Uses only the standard library on the client side.
"""

import json
import tempfile
import threading
import urllib.request
from pathlib import Path

from vocabforge import data, pipeline
from vocabforge.service import Service, make_server, replay


def call(method: str, url: str, payload: dict | None = None) -> dict:
    body = json.dumps(payload).encode() if payload is not None else None
    req = urllib.request.Request(url, data=body, method=method,
                                 headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


paths = data.mini_en()
test = pipeline.run([paths["corpus"]], paths["reference"], language="en",
                    wordlist_path=paths["wordlist"], seed=42).test

log_path = Path(tempfile.mkdtemp()) / "events.jsonl"
service = Service({"en60": test}, log_path)
server = make_server(service, port=0)
threading.Thread(target=server.serve_forever, daemon=True).start()
host, port = server.server_address[:2]
base = f"http://{host}:{port}"
print(f"serving {call('GET', base + '/tests')} at {base}")

session = call("POST", base + "/sessions", {"test_id": "en60", "seed": 1,
                                            "native_lang": "de"})
sid = session["session_id"]
print(f"session {sid} opened")

key = {item.id: item.is_real for item in test.items}
answered = 0
while True:
    trial = call("GET", f"{base}/sessions/{sid}/next")
    if trial.get("status") == "complete":
        break
    # the payload names the item and the deadline but never the answer
    assert set(trial) == {"item_id", "text", "display_ms", "respond_by"}
    answer = "real" if key[trial["item_id"]] else "fake"
    call("POST", f"{base}/sessions/{sid}/response",
         {"item_id": trial["item_id"], "answer": answer, "client_rt_ms": 350})
    answered += 1

report = call("POST", f"{base}/sessions/{sid}/finish")
print(f"answered {answered} trials, accuracy {report['accuracy']:.2f}, "
      f"batches {report['batch_accuracies']}")

server.shutdown()
server.server_close()
service.log.close()

replayed = replay(log_path, {"en60": test})[sid]
match = replayed["stored"] == replayed["recomputed"]
print(f"event log replay reproduces the stored report: {match}")
