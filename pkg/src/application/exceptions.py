"""
Application layer exceptions.

Defines specific exceptions for use case errors.
"""


class ApplicationException(Exception):
    """Base exception for application layer errors."""

    def __init__(self, message: str, error_code: str = "APPLICATION_ERROR"):
        self.message = message
        self.error_code = error_code
        super().__init__(message)


class RepositoryException(ApplicationException):
    """Exception for repository errors."""

    def __init__(self, message: str):
        super().__init__(f"Repository error: {message}", "REPOSITORY_ERROR")


class SessionNotFoundException(ApplicationException):
    """Session does not exist or has expired."""

    def __init__(self, session_id: str):
        super().__init__(f"Session not found: {session_id}", "SESSION_NOT_FOUND")
        self.session_id = session_id


class TaskNotFoundException(ApplicationException):
    def __init__(self, task_id: str):
        super().__init__(f"Task not found: {task_id}", "TASK_NOT_FOUND")
        self.task_id = task_id


class RecordNotFoundException(ApplicationException):
    def __init__(self, record_id: str):
        super().__init__(f"Trajectory record not found: {record_id}", "RECORD_NOT_FOUND")
        self.record_id = record_id


class StepLimitExceededException(ApplicationException):
    """The session already used its maximum number of user steps."""

    def __init__(self, session_id: str, max_turns: int):
        super().__init__(
            f"Session {session_id} reached the limit of {max_turns} user steps", "STEP_LIMIT_EXCEEDED"
        )
        self.session_id = session_id
        self.max_turns = max_turns


class TransportError(ApplicationException):
    """An external actor (policy, user, judge, sandbox) was unreachable after retries."""

    def __init__(self, message: str, endpoint: str = ""):
        super().__init__(f"Transport failure{f' ({endpoint})' if endpoint else ''}: {message}", "TRANSPORT_ERROR")
        self.endpoint = endpoint
