"""HTTP session API backing the explorer UI.

Endpoints (JSON in/out, exact rationals as strings plus float approximations
for display only):

    POST /sessions {points, k, init: "coherent"|"file", heights?, triangles?}
    GET  /sessions/{id}
    GET  /sessions/{id}/flips
    POST /sessions/{id}/flips/{index}   body: {"revision": N}
    POST /sessions/{id}/age             body: {"direction": "up"|"down"}
    POST /sessions/{id}/undo
    GET  /sessions/{id}/gkz

Sessions are in-memory with an idle TTL; each session mutates under its own
lock, so concurrent requests cannot interleave a flip application.
"""

from __future__ import annotations

import json
import re
import secrets
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import fileio
from .aging import build_level2, collapse_level2
from .coherent import HeightFunction, NonTriangularReport, coherent_subdivision, gkz
from .errors import FlipNotApplicable, GenericityError, HyperflipError
from .fileio import FormatError
from .flips import apply_flip, enumerate_flips
from .geometry import format_rational
from .hypertriangulations import Hypertriangulation, canonical_key, validate
from .points import genericity, label_text


class ApiError(Exception):
    def __init__(self, status: int, payload):
        self.status = status
        self.payload = payload
        super().__init__(str(payload))


@dataclass
class Session:
    id: str
    config: object
    current: Hypertriangulation
    history: list[dict] = field(default_factory=list)
    snapshots: list[Hypertriangulation] = field(default_factory=list)
    revision: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)
    touched: float = field(default_factory=time.monotonic)

    def mutate(self, new_state: Hypertriangulation, entry: dict):
        self.snapshots.append(self.current)
        self.history.append(entry)
        self.current = new_state
        self.revision += 1

    def undo(self) -> None:
        if not self.snapshots:
            raise ApiError(409, {"error": "nothing to undo"})
        self.current = self.snapshots.pop()
        self.history.pop()
        self.revision += 1


class SessionStore:
    def __init__(self, ttl: float = 3600.0):
        self.ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, config, state: Hypertriangulation) -> Session:
        session = Session(id=secrets.token_hex(8), config=config, current=state)
        with self._lock:
            self._purge()
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._purge()
            session = self._sessions.get(session_id)
        if session is None:
            raise ApiError(404, {"error": f"unknown session {session_id}"})
        session.touched = time.monotonic()
        return session

    def _purge(self):
        now = time.monotonic()
        stale = [
            key
            for key, session in self._sessions.items()
            if now - session.touched > self.ttl
        ]
        for key in stale:
            del self._sessions[key]


def _point_json(p):
    return {
        "exact": [format_rational(p.x), format_rational(p.y)],
        "approx": [float(p.x), float(p.y)],
    }


def state_json(session: Session) -> dict:
    t = session.current
    config = t.config
    used = t.used_labels()
    points = []
    for lab in config.labels:
        entry = {"label": list(lab), "text": label_text(lab), "used": lab in used}
        entry.update(_point_json(config.point(lab)))
        points.append(entry)
    triangles = [
        {
            "labels": [list(lab) for lab in tri.labels],
            "texts": [label_text(lab) for lab in tri.labels],
            "color": tri.color.value,
            "key": tri.key,
        }
        for tri in sorted(t.triangles)
    ]
    return {
        "id": session.id,
        "revision": session.revision,
        "n": t.n,
        "level": t.k,
        "points": points,
        "triangles": triangles,
        "hull": [list(lab) for lab in config.hull_labels()],
        "canonical_key": canonical_key(t),
        "history_length": len(session.history),
        "can_age_up": t.k == 1,
        "can_age_down": t.k == 2,
    }


def flips_json(session: Session) -> dict:
    flips = enumerate_flips(session.current)
    return {
        "revision": session.revision,
        "flips": [
            dict(index=i, **fileio.flip_to_json(f)) for i, f in enumerate(flips)
        ],
    }


class Api:
    """Transport-independent request handling (also used directly in tests)."""

    def __init__(self, ttl: float = 3600.0):
        self.store = SessionStore(ttl=ttl)

    def create_session(self, body: dict) -> dict:
        try:
            config = fileio.points_from_json({"points": body.get("points", [])})
        except FormatError as exc:
            raise ApiError(422, {"error": str(exc)})
        k = body.get("k")
        if not isinstance(k, int):
            raise ApiError(422, {"error": "k must be an integer"})
        tier = genericity(config, k) if 1 <= k <= config.n - 1 else None
        if tier is None:
            raise ApiError(422, {"error": f"k={k} out of range"})
        if not tier.strongly_generic:
            raise ApiError(
                422,
                {"error": f"configuration not strongly generic: {tier.detail}"},
            )
        init = body.get("init", "coherent")
        if init == "coherent":
            if "heights" in body:
                try:
                    heights = fileio.heights_from_json(
                        {"heights": body["heights"]}, config.n
                    )
                except FormatError as exc:
                    raise ApiError(422, {"error": str(exc)})
            else:
                heights = HeightFunction.squared_norms(config)
            result = coherent_subdivision(config, k, heights)
            if isinstance(result, NonTriangularReport):
                raise ApiError(422, {"error": str(result)})
            state = result
        elif init == "file":
            try:
                state = fileio.triangles_from_json(
                    {
                        "n": config.n,
                        "k": k,
                        "triangles": body.get("triangles", []),
                    },
                    config,
                )
            except FormatError as exc:
                raise ApiError(422, {"error": str(exc)})
            report = validate(state)
            if not report.ok:
                raise ApiError(422, report.to_json())
        else:
            raise ApiError(422, {"error": f"unknown init mode {init!r}"})
        session = self.store.create(config, state)
        return {"id": session.id, "state": state_json(session)}

    def get_state(self, session_id: str) -> dict:
        session = self.store.get(session_id)
        with session.lock:
            return state_json(session)

    def get_flips(self, session_id: str) -> dict:
        session = self.store.get(session_id)
        with session.lock:
            return flips_json(session)

    def apply_flip(self, session_id: str, index: int, body: dict) -> dict:
        session = self.store.get(session_id)
        with session.lock:
            revision = body.get("revision")
            if revision is not None and revision != session.revision:
                raise ApiError(
                    409,
                    {
                        "error": "flip list is stale",
                        "expected_revision": session.revision,
                    },
                )
            flips = enumerate_flips(session.current)
            if not 0 <= index < len(flips):
                raise ApiError(404, {"error": f"no flip with index {index}"})
            try:
                new_state = apply_flip(session.current, flips[index])
            except FlipNotApplicable as exc:
                raise ApiError(409, {"error": str(exc)})
            session.mutate(
                new_state, {"op": "flip", "flip": fileio.flip_to_json(flips[index])}
            )
            return state_json(session)

    def age(self, session_id: str, body: dict) -> dict:
        session = self.store.get(session_id)
        with session.lock:
            direction = body.get("direction")
            t = session.current
            try:
                if direction == "up":
                    if t.k != 1:
                        raise ApiError(409, {"error": "can only age up from level 1"})
                    new_state = build_level2(session.config, t)
                elif direction == "down":
                    if t.k != 2:
                        raise ApiError(409, {"error": "can only age down from level 2"})
                    new_state = collapse_level2(t)
                else:
                    raise ApiError(422, {"error": "direction must be 'up' or 'down'"})
            except GenericityError as exc:
                raise ApiError(422, {"error": str(exc)})
            session.mutate(new_state, {"op": "age", "direction": direction})
            return state_json(session)

    def undo(self, session_id: str) -> dict:
        session = self.store.get(session_id)
        with session.lock:
            session.undo()
            return state_json(session)

    def get_gkz(self, session_id: str) -> dict:
        session = self.store.get(session_id)
        with session.lock:
            vector = gkz(session.current)
            data = fileio.gkz_to_json(vector)
            data["sum"] = format_rational(vector.total)
            return data


_ROUTES = [
    ("POST", re.compile(r"^/sessions$"), "create"),
    ("GET", re.compile(r"^/sessions/([0-9a-f]+)$"), "state"),
    ("GET", re.compile(r"^/sessions/([0-9a-f]+)/flips$"), "flips"),
    ("POST", re.compile(r"^/sessions/([0-9a-f]+)/flips/(\d+)$"), "apply"),
    ("POST", re.compile(r"^/sessions/([0-9a-f]+)/age$"), "age"),
    ("POST", re.compile(r"^/sessions/([0-9a-f]+)/undo$"), "undo"),
    ("GET", re.compile(r"^/sessions/([0-9a-f]+)/gkz$"), "gkz"),
]

_STATIC_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
}


def make_handler(api: Api, static_dir: str | None):
    static_root = Path(static_dir).resolve() if static_dir else None

    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args):
            pass

        def _send_json(self, status: int, payload):
            body = json.dumps(payload).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
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
                raise ApiError(422, {"error": "request body is not valid JSON"})

        def _dispatch(self, method: str):
            try:
                for verb, pattern, name in _ROUTES:
                    if verb != method:
                        continue
                    match = pattern.match(self.path)
                    if not match:
                        continue
                    if name == "create":
                        return self._send_json(200, api.create_session(self._body()))
                    if name == "state":
                        return self._send_json(200, api.get_state(match.group(1)))
                    if name == "flips":
                        return self._send_json(200, api.get_flips(match.group(1)))
                    if name == "apply":
                        return self._send_json(
                            200,
                            api.apply_flip(
                                match.group(1), int(match.group(2)), self._body()
                            ),
                        )
                    if name == "age":
                        return self._send_json(200, api.age(match.group(1), self._body()))
                    if name == "undo":
                        return self._send_json(200, api.undo(match.group(1)))
                    if name == "gkz":
                        return self._send_json(200, api.get_gkz(match.group(1)))
                if method == "GET" and static_root is not None:
                    return self._serve_static()
                self._send_json(404, {"error": f"no route for {method} {self.path}"})
            except ApiError as exc:
                self._send_json(exc.status, exc.payload)
            except HyperflipError as exc:
                self._send_json(422, {"error": str(exc)})

        def _serve_static(self):
            rel = self.path.lstrip("/") or "index.html"
            target = (static_root / rel).resolve()
            if not str(target).startswith(str(static_root)) or not target.is_file():
                return self._send_json(404, {"error": "not found"})
            body = target.read_bytes()
            self.send_response(200)
            ctype = _STATIC_TYPES.get(target.suffix, "application/octet-stream")
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self):
            self._dispatch("GET")

        def do_POST(self):
            self._dispatch("POST")

    return Handler


def make_server(host: str, port: int, static_dir: str | None = None,
                ttl: float = 3600.0) -> ThreadingHTTPServer:
    api = Api(ttl=ttl)
    handler = make_handler(api, static_dir)
    return ThreadingHTTPServer((host, port), handler)


def run_server(host: str, port: int, static_dir: str | None = None,
               ttl: float = 3600.0):
    server = make_server(host, port, static_dir, ttl)
    print(f"hyperflip session API on http://{host}:{server.server_address[1]}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
