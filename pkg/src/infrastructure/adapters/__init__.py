# External service adapters

from .actor_providers import LocalActorProvider, PolicyFactory, WireActorProvider
from .chat_client import ChatClientConfig, ChatCompletion, ChatCompletionClient, TokenBucket
from .llm_actors import ChatPolicyClient, LlmJudge, LlmUserFactory, LlmUserSimulator, load_template
from .scripted import PolicyCall, ScriptedPolicy, ScriptedUserFactory, ScriptedUserSimulator
from .tool_executors import (
    HttpToolExecutor,
    HttpUserSimulator,
    LocalToolExecutor,
    SandboxWireClient,
    WireEpisode,
)

__all__ = [
    "ChatClientConfig",
    "ChatCompletion",
    "ChatCompletionClient",
    "ChatPolicyClient",
    "HttpToolExecutor",
    "HttpUserSimulator",
    "LlmJudge",
    "LlmUserFactory",
    "LlmUserSimulator",
    "LocalActorProvider",
    "LocalToolExecutor",
    "PolicyCall",
    "PolicyFactory",
    "SandboxWireClient",
    "ScriptedPolicy",
    "ScriptedUserFactory",
    "ScriptedUserSimulator",
    "TokenBucket",
    "WireActorProvider",
    "WireEpisode",
    "load_template",
]
