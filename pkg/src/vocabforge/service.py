"""HTTP administration of timed lexical-decision sessions.

Endpoints (JSON over HTTP):

    POST /sessions {"test_id": ..., "seed"?: ..., "native_lang"?: ...}
                                     -> {"session_id": ...}
    GET  /sessions/{id}/next         -> next trial or {"status": "complete"}
    POST /sessions/{id}/response {"item_id", "answer", "rt_ms"} -> ack
    POST /sessions/{id}/finish       -> score report
    GET  /tests                      -> test metadata (never labels)

Item labels are never put on the wire before finish; the trial text is
only revealed when its trial starts.  Server timestamps are authoritative
for reaction times: a response landing after display + grace is stored as
a timeout no matter what the client claims.  Every accepted response is
appended to a JSON-lines log before it is acknowledged, and replaying
that log reproduces every score report exactly.
"""

from __future__ import annotations

import json
import logging
import random
import threading
import time
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .assemble import TestSet
from .scoring import ScoreReport, ScoringError, score_session

log = logging.getLogger(__name__)

DISPLAY_MS = 2000
GRACE_MS = 1500
SESSION_TTL_MS = 60 * 60 * 1000


class ServiceError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


@dataclass
class TrialResponse:
    item_id: str
    answer: str              # real | fake | timeout (server-coerced)
    rt_ms: int               # received_at - served_at, authoritative
    served_at: int           # epoch ms
    received_at: int
    client_rt_ms: int | None = None


@dataclass
class Session:
    session_id: str
    test_id: str
    seed: int
    trial_order: list[str]
    created_at: int
    native_lang: str | None = None
    cursor: int = 0
    state: str = "created"   # created | running | finished | expired
    pending_item: str | None = None
    pending_served_at: int | None = None
    responses: dict[str, TrialResponse] = field(default_factory=dict)
    last_ack: dict | None = None
    report: dict | None = None


def stratified_order(key: TestSet, seed: int) -> list[str]:
    """Per-session shuffle keeping each batch balanced between classes.

    Each batch of batch_size trials receives equal numbers of real and
    pseudo items so the two halves of the test stay comparable.  Falls
    back to a plain shuffle when the test is not evenly balanced.
    """
    rng = random.Random(seed)
    reals = [it.id for it in key.items if it.is_real]
    pseudos = [it.id for it in key.items if not it.is_real]
    bs = key.batch_size
    half = bs // 2
    if (len(reals) != len(pseudos) or bs % 2 != 0
            or len(reals) % half != 0):
        order = [it.id for it in key.items]
        rng.shuffle(order)
        return order
    rng.shuffle(reals)
    rng.shuffle(pseudos)
    order: list[str] = []
    for k in range(len(reals) // half):
        batch = reals[k * half:(k + 1) * half] + pseudos[k * half:(k + 1) * half]
        rng.shuffle(batch)
        order.extend(batch)
    return order


class EventLog:
    """Append-only JSON-lines record log; the append is the commit point."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "a", encoding="utf-8")
        self._lock = threading.Lock()

    def append(self, record: dict):
        line = json.dumps(record, ensure_ascii=False, sort_keys=True)
        with self._lock:
            self._fh.write(line + "\n")
            self._fh.flush()

    def close(self):
        self._fh.close()


def read_events(path: Path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)


class Service:
    """Session lifecycle and timing rules behind the HTTP endpoints.

    ``clock`` returns seconds and exists so tests can drive time; all
    persisted timestamps are integer epoch milliseconds.  A single lock
    serializes all state changes, which easily covers the intended scale
    (tens of concurrent sessions).
    """

    def __init__(self, tests: dict[str, TestSet], log_path: Path,
                 display_ms: int = DISPLAY_MS, grace_ms: int = GRACE_MS,
                 session_ttl_ms: int = SESSION_TTL_MS,
                 clock=time.time):
        self.tests = tests
        self.log = EventLog(log_path)
        self.display_ms = display_ms
        self.grace_ms = grace_ms
        self.session_ttl_ms = session_ttl_ms
        self.clock = clock
        self.sessions: dict[str, Session] = {}
        self._lock = threading.RLock()

    def _now_ms(self) -> int:
        return int(round(self.clock() * 1000))

    def list_tests(self) -> list[dict]:
        return [
            {"test_id": tid, "language": ts.language, "n_items": len(ts.items),
             "batch_size": ts.batch_size}
            for tid, ts in sorted(self.tests.items())
        ]

    def create_session(self, test_id: str, seed: int | None = None,
                       native_lang: str | None = None) -> Session:
        with self._lock:
            if test_id not in self.tests:
                raise ServiceError(404, f"unknown test {test_id!r}")
            if seed is None:
                seed = random.SystemRandom().randrange(2 ** 63)
            session = Session(
                session_id=uuid.uuid4().hex,
                test_id=test_id,
                seed=seed,
                trial_order=stratified_order(self.tests[test_id], seed),
                created_at=self._now_ms(),
                native_lang=native_lang,
            )
            self.log.append({
                "event": "session_created",
                "session_id": session.session_id,
                "test_id": test_id,
                "seed": seed,
                "native_lang": native_lang,
                "created_at": session.created_at,
            })
            self.sessions[session.session_id] = session
            return session

    def _get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise ServiceError(404, f"unknown session {session_id!r}")
        if (session.state not in ("finished", "expired")
                and self._now_ms() - session.created_at > self.session_ttl_ms):
            session.state = "expired"
        return session

    def next_trial(self, session_id: str) -> dict:
        with self._lock:
            session = self._get(session_id)
            if session.state == "finished":
                raise ServiceError(409, "session already finished")
            if session.state == "expired":
                raise ServiceError(410, "session expired")
            if session.pending_item is not None:
                raise ServiceError(409, "previous trial not resolved yet")
            if session.cursor >= len(session.trial_order):
                return {"status": "complete"}
            item_id = session.trial_order[session.cursor]
            key = self.tests[session.test_id]
            text = next(it.text for it in key.items if it.id == item_id)
            session.state = "running"
            session.pending_item = item_id
            session.pending_served_at = self._now_ms()
            return {
                "item_id": item_id,
                "text": text,
                "display_ms": self.display_ms,
                "respond_by": session.pending_served_at + self.display_ms + self.grace_ms,
            }

    def submit_response(self, session_id: str, item_id: str, answer: str,
                        client_rt_ms: int | None = None) -> dict:
        with self._lock:
            session = self._get(session_id)
            if session.state == "expired":
                raise ServiceError(410, "session expired")
            if item_id in session.responses:
                if session.last_ack and session.last_ack["item_id"] == item_id:
                    return session.last_ack     # idempotent re-ack of first write
                raise ServiceError(409, f"item {item_id!r} already answered")
            if session.pending_item != item_id:
                raise ServiceError(409, f"item {item_id!r} is not the current trial")
            if answer not in ("real", "fake", "timeout"):
                raise ServiceError(400, f"bad answer {answer!r}")
            received_at = self._now_ms()
            served_at = session.pending_served_at
            rt_ms = received_at - served_at
            if rt_ms > self.display_ms + self.grace_ms:
                answer = "timeout"
            response = TrialResponse(item_id, answer, rt_ms, served_at,
                                     received_at, client_rt_ms)
            self.log.append({
                "event": "response",
                "session_id": session_id,
                "item_id": item_id,
                "answer": answer,
                "rt_ms": rt_ms,
                "served_at": served_at,
                "received_at": received_at,
                "client_rt_ms": client_rt_ms,
                "position": session.cursor,
            })
            session.responses[item_id] = response
            session.pending_item = None
            session.pending_served_at = None
            session.cursor += 1
            session.last_ack = {"status": "ok", "item_id": item_id,
                                "answer": answer, "rt_ms": rt_ms}
            return session.last_ack

    def finish_session(self, session_id: str) -> dict:
        with self._lock:
            session = self._get(session_id)
            if session.report is not None:
                return session.report
            if session.pending_item is not None and session.state != "expired":
                raise ServiceError(409, "current trial not resolved")
            if (session.cursor < len(session.trial_order)
                    and session.state != "expired"):
                raise ServiceError(409, "session still has unresolved trials")
            try:
                report = self._score(session)
            except ScoringError as err:
                # an expired session may hold nothing scoreable
                raise ServiceError(409, str(err)) from None
            self.log.append({
                "event": "finished",
                "session_id": session_id,
                "report": report,
            })
            session.report = report
            session.state = "finished"
            return report

    def _score(self, session: Session) -> dict:
        key = self.tests[session.test_id]
        report = score_session(session.session_id, session.responses.values(), key)
        return report.to_dict()


def replay(log_path: Path, tests: dict[str, TestSet]) -> dict[str, dict]:
    """Rebuild sessions from the record log and recompute every report.

    Returns, per finished session, the report stored in the log and the
    one recomputed from the logged responses; the two must agree for a
    healthy log.
    """
    session_tests: dict[str, str] = {}
    responses: dict[str, dict[str, TrialResponse]] = {}
    stored: dict[str, dict] = {}
    for rec in read_events(log_path):
        if rec["event"] == "session_created":
            session_tests[rec["session_id"]] = rec["test_id"]
            responses.setdefault(rec["session_id"], {})
        elif rec["event"] == "response":
            per = responses.setdefault(rec["session_id"], {})
            if rec["item_id"] not in per:    # first write wins, as in the server
                per[rec["item_id"]] = TrialResponse(
                    rec["item_id"], rec["answer"], rec["rt_ms"],
                    rec["served_at"], rec["received_at"], rec.get("client_rt_ms"),
                )
        elif rec["event"] == "finished":
            stored[rec["session_id"]] = rec["report"]
    out = {}
    for session_id, stored_report in stored.items():
        key = tests[session_tests[session_id]]
        recomputed = score_session(session_id, responses[session_id].values(), key)
        out[session_id] = {"stored": stored_report, "recomputed": recomputed.to_dict()}
    return out


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    # the Service instance is attached to the server object
    def _service(self) -> Service:
        return self.server.service  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):
        pass

    def _send(self, status: int, payload: dict):
        body = json.dumps(payload, ensure_ascii=False, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        try:
            return json.loads(self.rfile.read(length))
        except json.JSONDecodeError:
            raise ServiceError(400, "request body is not valid JSON")

    def _route(self, method: str):
        service = self._service()
        parts = [p for p in self.path.split("?")[0].split("/") if p]
        try:
            if method == "GET" and parts == ["tests"]:
                return self._send(200, {"tests": service.list_tests()})
            if method == "POST" and parts == ["sessions"]:
                body = self._body()
                if "test_id" not in body:
                    raise ServiceError(400, "missing test_id")
                session = service.create_session(
                    body["test_id"], body.get("seed"), body.get("native_lang"))
                return self._send(201, {"session_id": session.session_id,
                                        "n_trials": len(session.trial_order)})
            if len(parts) == 3 and parts[0] == "sessions":
                session_id, action = parts[1], parts[2]
                if method == "GET" and action == "next":
                    return self._send(200, service.next_trial(session_id))
                if method == "POST" and action == "response":
                    body = self._body()
                    for field_name in ("item_id", "answer"):
                        if field_name not in body:
                            raise ServiceError(400, f"missing {field_name}")
                    ack = service.submit_response(
                        session_id, body["item_id"], body["answer"], body.get("rt_ms"))
                    return self._send(200, ack)
                if method == "POST" and action == "finish":
                    return self._send(200, service.finish_session(session_id))
            raise ServiceError(404, f"no route for {method} {self.path}")
        except ServiceError as err:
            self._send(err.status, {"error": str(err)})

    def do_GET(self):
        self._route("GET")

    def do_POST(self):
        self._route("POST")


class _Server(ThreadingHTTPServer):
    daemon_threads = True
    # default backlog of 5 drops connections under concurrent load
    request_queue_size = 128


def make_server(service: Service, host: str = "127.0.0.1",
                port: int = 0) -> ThreadingHTTPServer:
    server = _Server((host, port), _Handler)
    server.service = service  # type: ignore[attr-defined]
    return server


def load_tests(data_dir: Path) -> dict[str, TestSet]:
    """Load every test set (*.json) in a directory, keyed by file stem.

    Other JSON files are skipped, so the directory the pipeline wrote its
    intermediates into can be served as-is.
    """
    tests = {}
    for path in sorted(Path(data_dir).glob("*.json")):
        try:
            tests[path.stem] = TestSet.from_json(path.read_text(encoding="utf-8"))
        except (KeyError, TypeError, ValueError):
            log.info("skipping %s: not a test set", path.name)
    return tests
