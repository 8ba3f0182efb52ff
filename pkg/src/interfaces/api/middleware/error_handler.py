"""
Error handling for the sandbox API.

Every error leaves the service as `{"error", "message", "details", "result"?}`
with a machine-readable code. The mapping from exceptions to codes and
status codes lives here and nowhere else.
"""

import time
from typing import Any, Callable, Optional

import structlog
from fastapi import FastAPI, Request, Response, status
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException
from starlette.middleware.base import BaseHTTPMiddleware

from src.application.exceptions import (
    RecordNotFoundException,
    SessionNotFoundException,
    StepLimitExceededException,
    TaskNotFoundException,
    TransportError,
)
from src.domain.entities.tools import ToolResult
from src.domain.exceptions import ToolArgumentError, TrajectoryDecodeError, UnknownToolError

logger = structlog.get_logger(__name__)


class ToolExecutionFailed(Exception):
    """A tool ran and reported a domain failure; the result travels with the error."""

    def __init__(self, tool: str, result: ToolResult):
        super().__init__(result.error_message or result.error_code or "tool failed")
        self.tool = tool
        self.result = result


def error_body(code: str, message: str, details: Optional[dict[str, Any]] = None, result: Optional[ToolResult] = None) -> dict[str, Any]:
    body: dict[str, Any] = {"error": code, "message": message, "details": details or {}}
    if result is not None:
        body["result"] = result.to_dict()
    return body


def _json(status_code: int, body: dict[str, Any]) -> JSONResponse:
    return JSONResponse(status_code=status_code, content=body)


async def _session_not_found(request: Request, exc: SessionNotFoundException) -> JSONResponse:
    return _json(404, error_body("not_found", exc.message, {"resource": "session", "id": exc.session_id}))


async def _task_not_found(request: Request, exc: TaskNotFoundException) -> JSONResponse:
    return _json(404, error_body("not_found", exc.message, {"resource": "task", "id": exc.task_id}))


async def _record_not_found(request: Request, exc: RecordNotFoundException) -> JSONResponse:
    return _json(404, error_body("not_found", exc.message, {"resource": "trajectory", "id": exc.record_id}))


async def _unknown_tool(request: Request, exc: UnknownToolError) -> JSONResponse:
    return _json(404, error_body("not_found", exc.message, {"resource": "tool", "name": exc.name}))


async def _bad_arguments(request: Request, exc: ToolArgumentError) -> JSONResponse:
    return _json(400, error_body("bad_request", exc.message, {"tool": exc.tool, "path": exc.path}))


async def _bad_record(request: Request, exc: TrajectoryDecodeError) -> JSONResponse:
    return _json(400, error_body("bad_request", exc.message, {"line": exc.line_number, "offset": exc.offset}))


async def _request_validation(request: Request, exc: RequestValidationError) -> JSONResponse:
    errors = exc.errors()
    first = errors[0] if errors else {"loc": (), "msg": "invalid request"}
    path = ".".join(str(p) for p in first["loc"])
    return _json(400, error_body("bad_request", f"{path}: {first['msg']}", {"path": path, "count": len(errors)}))


async def _tool_failed(request: Request, exc: ToolExecutionFailed) -> JSONResponse:
    return _json(
        409,
        error_body("tool_error", str(exc), {"tool": exc.tool, "error_code": exc.result.error_code}, exc.result),
    )


async def _step_limit(request: Request, exc: StepLimitExceededException) -> JSONResponse:
    return _json(
        429,
        error_body("limit_exceeded", exc.message, {"session_id": exc.session_id, "max_turns": exc.max_turns}),
    )


async def _transport(request: Request, exc: TransportError) -> JSONResponse:
    return _json(502, error_body("transport", exc.message, {"endpoint": exc.endpoint}))


async def _http_error(request: Request, exc: StarletteHTTPException) -> JSONResponse:
    if exc.status_code == status.HTTP_404_NOT_FOUND:
        return _json(404, error_body("not_found", f"Path {request.url.path} does not exist", {"resource": "path"}))
    return _json(exc.status_code, error_body("bad_request", str(exc.detail), {"method": request.method}))


def register_error_handlers(app: FastAPI) -> None:
    app.add_exception_handler(SessionNotFoundException, _session_not_found)
    app.add_exception_handler(TaskNotFoundException, _task_not_found)
    app.add_exception_handler(RecordNotFoundException, _record_not_found)
    app.add_exception_handler(UnknownToolError, _unknown_tool)
    app.add_exception_handler(ToolArgumentError, _bad_arguments)
    app.add_exception_handler(TrajectoryDecodeError, _bad_record)
    app.add_exception_handler(RequestValidationError, _request_validation)
    app.add_exception_handler(ToolExecutionFailed, _tool_failed)
    app.add_exception_handler(StepLimitExceededException, _step_limit)
    app.add_exception_handler(TransportError, _transport)
    app.add_exception_handler(StarletteHTTPException, _http_error)


class ErrorHandlerMiddleware(BaseHTTPMiddleware):
    """
    Logs every request and turns unhandled exceptions into a JSON error.

    Known errors are mapped by the exception handlers above before they
    reach this middleware.
    """

    async def dispatch(self, request: Request, call_next: Callable) -> Response:
        started = time.perf_counter()
        try:
            response = await call_next(request)
        except Exception as exc:
            logger.exception("unhandled exception", method=request.method, path=request.url.path)
            return _json(500, error_body("transport", "internal server error", {"exception": type(exc).__name__}))
        logger.info(
            "request completed",
            method=request.method,
            path=request.url.path,
            status=response.status_code,
            elapsed_ms=round((time.perf_counter() - started) * 1000, 1),
        )
        return response
