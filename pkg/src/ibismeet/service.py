"""HTTP service over a store: documents, edits, validation, queries.

Meetings are served and accepted in their canonical JSON form.  Every
meeting response carries an ETag (the store checksum); writes may send
If-Match to detect lost updates.  Errors use one envelope:
``{"error": {"code": ..., "message": ...}}``.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .assist import suggest_annotations
from .canonical import meeting_from_dict, meeting_to_dict
from .errors import (
    GrammarError,
    IbismeetError,
    ModelError,
    NotFoundError,
    QueryParseError,
    ReplyOrderError,
    StoreError,
)
from .indexing import build_indexes
from .mds import add_reply_to, apply_edits, insert_episode, validate
from .model import ArgLabel, Meeting
from .queries import execute, parse_query
from .store import Store


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, **extra):
        self.status = status
        self.code = code
        self.message = message
        self.extra = extra


def _error_response(exc: ApiError) -> JSONResponse:
    body = {"error": {"code": exc.code, "message": exc.message, **exc.extra}}
    return JSONResponse(status_code=exc.status, content=body)


def _translate(exc: IbismeetError) -> ApiError:
    if isinstance(exc, NotFoundError):
        return ApiError(404, "NOT_FOUND", str(exc))
    if isinstance(exc, QueryParseError):
        return ApiError(400, "PARSE_ERROR", str(exc), offset=exc.offset)
    if isinstance(exc, GrammarError):
        return ApiError(400, "PARSE_ERROR", str(exc))
    if isinstance(exc, (ModelError, StoreError)):
        return ApiError(400, "INVALID_INPUT", str(exc))
    return ApiError(400, "INVALID_INPUT", str(exc))


class _IndexCache:
    """Corpus index rebuilt lazily after any write."""

    def __init__(self, store: Store):
        self.store = store
        self.index = None
        self.dirty = True

    def invalidate(self):
        self.dirty = True

    def get(self):
        if self.dirty or self.index is None:
            meetings = [self.store.load_meeting(e["id"]) for e in self.store.list_meetings()]
            self.index = build_indexes(meetings)
            self.dirty = False
        return self.index


def create_app(store: Store | str, ui_dir: str | None = None) -> FastAPI:
    """App over a store; with ui_dir, static workbench files are served
    from the same origin so the browser client needs no CORS setup."""
    if not isinstance(store, Store):
        store = Store(store)
    app = FastAPI(title="ibismeet", docs_url=None, redoc_url=None)
    cache = _IndexCache(store)

    @app.exception_handler(ApiError)
    async def on_api_error(request: Request, exc: ApiError):
        return _error_response(exc)

    @app.exception_handler(IbismeetError)
    async def on_domain_error(request: Request, exc: IbismeetError):
        return _error_response(_translate(exc))

    def meeting_response(meeting: Meeting, status: int = 200, **extra) -> JSONResponse:
        etag = store.etag(meeting.id)
        body = dict(meeting_to_dict(meeting))
        body.update(extra)
        return JSONResponse(status_code=status, content=body, headers={"ETag": f'"{etag}"'})

    def check_if_match(request: Request, meeting_id: str) -> None:
        wanted = request.headers.get("if-match")
        if wanted is None:
            return
        wanted = wanted.strip().removeprefix("W/").strip('"')
        current = store.etag(meeting_id)
        if wanted != current:
            raise ApiError(412, "CONFLICT", f"meeting {meeting_id} changed (etag {current})")

    async def read_json(request: Request) -> dict:
        try:
            payload = await request.json()
        except Exception:
            raise ApiError(400, "INVALID_INPUT", "request body must be JSON") from None
        if not isinstance(payload, dict):
            raise ApiError(400, "INVALID_INPUT", "request body must be a JSON object")
        return payload

    def save_checked(meeting: Meeting, strict: bool) -> None:
        if strict:
            report = validate(meeting, store.load_grammar())
            if not report.ok:
                raise ApiError(
                    422,
                    "VALIDATION_FAILED",
                    f"{len(report.violations)} violation(s)",
                    report=report.to_dict(),
                )
        store.save_meeting(meeting)
        cache.invalidate()

    def want_strict(request: Request) -> bool:
        return request.query_params.get("validate", "").lower() in ("1", "true", "strict")

    @app.get("/meetings")
    def list_meetings():
        return store.list_meetings()

    @app.get("/meetings/{meeting_id}")
    def get_meeting(meeting_id: str):
        return meeting_response(store.load_meeting(meeting_id))

    @app.put("/meetings/{meeting_id}")
    async def put_meeting(meeting_id: str, request: Request):
        payload = await read_json(request)
        meeting = meeting_from_dict(payload)
        if meeting.id != meeting_id:
            raise ApiError(
                400, "INVALID_INPUT", f"document id {meeting.id!r} does not match path {meeting_id!r}"
            )
        if store.has_meeting(meeting_id):
            check_if_match(request, meeting_id)
        save_checked(meeting, want_strict(request))
        return meeting_response(meeting)

    @app.post("/meetings/{meeting_id}/episodes")
    async def post_episode(meeting_id: str, request: Request):
        meeting = store.load_meeting(meeting_id)
        check_if_match(request, meeting_id)
        payload = await read_json(request)
        for field in ("parent", "category"):
            if field not in payload:
                raise ApiError(400, "INVALID_INPUT", f"missing field {field!r}")
        span = payload.get("turn_span")
        label = ArgLabel(
            category=payload["category"],
            parameter=payload.get("parameter"),
            topic=payload.get("topic"),
        )
        episode_id = payload.get("id") or meeting.next_episode_id()
        meeting = insert_episode(
            meeting,
            payload["parent"],
            label,
            tuple(span) if span else None,
            attributed_speaker=payload.get("attributed_speaker"),
            target=payload.get("target"),
            episode_id=episode_id,
            grammar=store.load_grammar(),
        )
        save_checked(meeting, want_strict(request))
        return meeting_response(meeting, status=201, created=episode_id)

    @app.post("/meetings/{meeting_id}/reply-to")
    async def post_reply_to(meeting_id: str, request: Request):
        meeting = store.load_meeting(meeting_id)
        check_if_match(request, meeting_id)
        payload = await read_json(request)
        for field in ("source", "targets"):
            if field not in payload:
                raise ApiError(400, "INVALID_INPUT", f"missing field {field!r}")
        try:
            meeting = add_reply_to(meeting, payload["source"], list(payload["targets"]))
        except ReplyOrderError as exc:
            report = {
                "meeting": meeting_id,
                "ok": False,
                "violations": [
                    {
                        "code": "REPLY_NOT_EARLIER",
                        "subject": payload["source"],
                        "message": str(exc),
                    }
                ],
            }
            raise ApiError(422, "VALIDATION_FAILED", str(exc), report=report) from exc
        save_checked(meeting, want_strict(request))
        return meeting_response(meeting)

    @app.post("/meetings/{meeting_id}/edits")
    async def post_edits(meeting_id: str, request: Request):
        meeting = store.load_meeting(meeting_id)
        check_if_match(request, meeting_id)
        payload = await read_json(request)
        edits = payload.get("edits")
        if not isinstance(edits, list):
            raise ApiError(400, "INVALID_INPUT", "body needs an 'edits' list")
        meeting = apply_edits(meeting, edits, grammar=store.load_grammar())
        save_checked(meeting, want_strict(request))
        return meeting_response(meeting)

    @app.post("/meetings/{meeting_id}/validate")
    def post_validate(meeting_id: str):
        meeting = store.load_meeting(meeting_id)
        return validate(meeting, store.load_grammar()).to_dict()

    @app.get("/meetings/{meeting_id}/suggestions")
    def get_suggestions(meeting_id: str):
        meeting = store.load_meeting(meeting_id)
        suggestions = suggest_annotations(meeting, store.load_grammar())
        return [
            {
                "label": str(s.label),
                "turn_span": list(s.turn_span),
                "confidence": s.confidence,
                "evidence": list(s.evidence),
                "children": [
                    {
                        "label": str(c.label),
                        "turn_span": list(c.turn_span),
                        "confidence": c.confidence,
                        "replies_to": c.replies_to,
                    }
                    for c in s.children
                ],
            }
            for s in suggestions
        ]

    @app.post("/index/rebuild")
    def rebuild_index():
        cache.invalidate()
        index = cache.get()
        return {
            "meetings": len(index.meetings),
            "segments": {g: index.segment_count(g) for g in index.vectors},
            "episodes": len(index.arg_entries),
        }

    @app.post("/query")
    async def post_query(request: Request):
        payload = await read_json(request)
        if "query" not in payload:
            raise ApiError(400, "INVALID_INPUT", "body needs a 'query' string")
        ast = parse_query(payload["query"])
        return execute(ast, cache.get()).to_dict()

    @app.get("/grammar")
    def get_grammar():
        return PlainTextResponse(store.grammar_text())

    @app.put("/grammar")
    async def put_grammar(request: Request):
        text = (await request.body()).decode("utf-8")
        store.save_grammar(text)
        return PlainTextResponse(store.grammar_text())

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        # Mounted last so the API routes above keep precedence.
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
