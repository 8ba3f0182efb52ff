"""
Tool executors and the sandbox wire client.

`LocalToolExecutor` runs calls in-process against a private store snapshot.
`SandboxWireClient` talks to the sandbox service; `HttpToolExecutor` and
`HttpUserSimulator` drive one service session and rebuild the same
ToolResult values the in-process executor returns.
"""

from typing import Any, Optional, Sequence

import httpx
import structlog

from src.application.exceptions import TransportError
from src.application.ports.actors import ToolExecutor, UserSimulator
from src.domain.entities.retail import EntityStore
from src.domain.entities.tools import ArgType, ToolKind, ToolResult, ToolSpec
from src.domain.entities.trajectory import STOP_TOKEN, Speaker, Utterance
from src.domain.services.toolkit import ToolRegistry
from src.domain.value_objects.tool_call import ToolCall

logger = structlog.get_logger(__name__)


class LocalToolExecutor(ToolExecutor):
    def __init__(self, registry: ToolRegistry, store: EntityStore):
        self._registry = registry
        self._store = store

    @property
    def store(self) -> EntityStore:
        return self._store

    async def list_tools(self) -> list[ToolSpec]:
        return self._registry.list_tools()

    async def execute(self, call: ToolCall) -> ToolResult:
        return self._registry.execute(self._store, call)


def spec_from_descriptor(descriptor: dict[str, Any]) -> ToolSpec:
    return ToolSpec(
        name=descriptor["name"],
        kind=ToolKind(descriptor["kind"]),
        arg_schema=tuple((p["name"], ArgType(p["type"])) for p in descriptor["parameters"]),
        description=descriptor.get("description", ""),
        mutates=tuple(descriptor.get("mutates", ())),
    )


class SandboxWireClient:
    """Thin JSON client for the sandbox service endpoints."""

    def __init__(self, base_url: str, client: Optional[httpx.AsyncClient] = None, timeout: float = 30.0):
        self._base_url = base_url.rstrip("/")
        self._owns_client = client is None
        self._client = client or httpx.AsyncClient(timeout=timeout)

    async def close(self) -> None:
        if self._owns_client and not self._client.is_closed:
            await self._client.aclose()

    async def _request(self, method: str, path: str, **kwargs: Any) -> httpx.Response:
        url = f"{self._base_url}{path}"
        try:
            response = await self._client.request(method, url, **kwargs)
        except httpx.HTTPError as exc:
            raise TransportError(f"{type(exc).__name__}: {exc}", url) from exc
        if response.status_code >= 500:
            raise TransportError(f"HTTP {response.status_code}: {response.text[:200]}", url)
        return response

    async def list_tools(self) -> list[dict[str, Any]]:
        response = await self._request("GET", "/tools")
        return response.json()["tools"]

    async def create_episode(self, task_id: str) -> dict[str, Any]:
        response = await self._request("POST", "/episodes", json={"task_id": task_id})
        if response.status_code != 201:
            raise TransportError(f"episode creation rejected: {response.text[:200]}", "/episodes")
        return response.json()

    async def episode_status(self, session_id: str) -> dict[str, Any]:
        response = await self._request("GET", f"/episodes/{session_id}")
        if response.status_code != 200:
            raise TransportError(f"episode lookup failed: {response.text[:200]}", f"/episodes/{session_id}")
        return response.json()

    async def close_episode(self, session_id: str) -> None:
        await self._request("DELETE", f"/episodes/{session_id}")

    async def invoke_tool(self, session_id: str, name: str, arguments: dict[str, Any]) -> httpx.Response:
        return await self._request("POST", f"/episodes/{session_id}/tools/{name}", json={"arguments": arguments})

    async def user_step(self, session_id: str, message: str) -> httpx.Response:
        return await self._request("POST", f"/episodes/{session_id}/user-step", json={"message": message})


class WireEpisode:
    """One live service session shared by its tool executor and user simulator."""

    def __init__(self, client: SandboxWireClient, session_id: str, opening: str, max_turns: int):
        self.client = client
        self.session_id = session_id
        self.opening = opening
        self.max_turns = max_turns

    @classmethod
    async def open(cls, client: SandboxWireClient, task_id: str) -> "WireEpisode":
        body = await client.create_episode(task_id)
        logger.debug("wire episode opened", session_id=body["session_id"], task_id=task_id)
        return cls(client, body["session_id"], body["opening"], body["max_turns"])


def result_from_response(response: httpx.Response) -> ToolResult:
    """Rebuild the ToolResult an in-process execution would have produced."""
    body = response.json()
    if response.status_code == 200 or body.get("error") == "tool_error":
        return ToolResult.from_dict(body["result"])
    if body.get("error") == "bad_request":
        return ToolResult.failure("invalid_arguments", body["message"])
    if body.get("error") == "not_found" and body.get("details", {}).get("resource") == "tool":
        return ToolResult.failure("unknown_tool", body["message"])
    raise TransportError(f"unexpected tool response ({response.status_code}): {body.get('message', '')}")


class HttpToolExecutor(ToolExecutor):
    def __init__(self, episode: WireEpisode):
        self._episode = episode

    async def list_tools(self) -> list[ToolSpec]:
        return [spec_from_descriptor(d) for d in await self._episode.client.list_tools()]

    async def execute(self, call: ToolCall) -> ToolResult:
        response = await self._episode.client.invoke_tool(self._episode.session_id, call.name, call.arguments)
        return result_from_response(response)

    async def close(self) -> None:
        await self._episode.client.close_episode(self._episode.session_id)


class HttpUserSimulator(UserSimulator):
    def __init__(self, episode: WireEpisode):
        self._episode = episode

    async def first_message(self) -> str:
        return self._episode.opening

    async def next_message(self, history: Sequence[Utterance]) -> str:
        agent_text = next((u.text for u in reversed(history) if u.speaker == Speaker.AGENT), "")
        response = await self._episode.client.user_step(self._episode.session_id, agent_text)
        body = response.json()
        if response.status_code == 200:
            return body["reply"]
        if body.get("error") == "limit_exceeded":
            logger.warning("user step limit reached", session_id=self._episode.session_id)
            return STOP_TOKEN
        raise TransportError(f"user step failed ({response.status_code}): {body.get('message', '')}")
