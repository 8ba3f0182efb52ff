# API middleware

from .error_handler import ErrorHandlerMiddleware, ToolExecutionFailed, error_body, register_error_handlers

__all__ = [
    "ErrorHandlerMiddleware",
    "ToolExecutionFailed",
    "error_body",
    "register_error_handlers",
]
