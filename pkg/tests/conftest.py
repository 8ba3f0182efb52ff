"""
Global pytest configuration.

Shared fixtures: the bundled seed and task files, scripted actors, a
configured dependency container and an HTTP client bound to the app.
"""

import asyncio
import json
from pathlib import Path
from typing import AsyncGenerator, Optional, Sequence

import pytest
import pytest_asyncio
from httpx import ASGITransport, AsyncClient

from src.config.settings import Settings
from src.domain.entities.retail import EntityStore
from src.domain.entities.task import TaskSpec
from src.domain.entities.tools import ToolResult
from src.domain.entities.trajectory import Action, Stop, Trajectory, TrajectoryStatus, Turn, UserMessage
from src.domain.services.react import format_react
from src.domain.services.retail_env import load_seed
from src.domain.services.toolkit import ToolRegistry, build_retail_registry
from src.domain.services.trajectory_ops import agent_segment, environment_segment
from src.domain.value_objects.tool_call import ToolCall
from src.infrastructure.config.dependency_injection import DependencyContainer
from src.infrastructure.serialization.task_codec import TaskModel, load_tasks

DATA_DIR = Path(__file__).parent.parent / "data"
SEED_PATH = DATA_DIR / "seed" / "retail_seed.json"
TASKS_PATH = DATA_DIR / "tasks" / "retail_tasks.json"
JUDGE_PROMPT_PATH = DATA_DIR / "prompts" / "judge_prompt.txt"

EXCHANGE_TASK = "retail_exchange_noah"
CANCEL_TASK = "retail_cancel_mei"
MATH_TASK = "math_product"


@pytest.fixture(scope="session")
def event_loop():
    """Create an instance of the default event loop for the test session."""
    loop = asyncio.get_event_loop_policy().new_event_loop()
    yield loop
    loop.close()


@pytest.fixture(scope="session")
def seed_document() -> dict:
    """Raw seed document shipped in data/."""
    return json.loads(SEED_PATH.read_text(encoding="utf-8"))


@pytest.fixture
def seed_store(seed_document: dict) -> EntityStore:
    """Fresh store built from the bundled seed."""
    return load_seed(seed_document)


@pytest.fixture
def registry() -> ToolRegistry:
    return build_retail_registry()


@pytest.fixture(scope="session")
def task_models() -> dict[str, TaskModel]:
    """Bundled task file keyed by task id."""
    return {model.task_id: model for model in load_tasks(TASKS_PATH)}


@pytest.fixture
def exchange_task(task_models: dict[str, TaskModel]) -> TaskSpec:
    return task_models[EXCHANGE_TASK].to_domain()


@pytest.fixture
def cancel_task(task_models: dict[str, TaskModel]) -> TaskSpec:
    return task_models[CANCEL_TASK].to_domain()


@pytest.fixture
def math_task(task_models: dict[str, TaskModel]) -> TaskSpec:
    return task_models[MATH_TASK].to_domain()


@pytest.fixture
def exchange_call() -> ToolCall:
    """The ground-truth exchange of the backpack and the mouse."""
    return ToolCall(
        "exchange_delivered_order_items",
        {
            "order_id": "#W7678072",
            "item_ids": ["3557711149", "2193628750"],
            "new_item_ids": ["8084436579", "8214883393"],
            "payment_method_id": "paypal_5727330",
        },
    )


@pytest.fixture
def test_settings(tmp_path: Path) -> Settings:
    """Settings pointing at the bundled data with a private trajectory log."""
    return Settings(
        seed_path=SEED_PATH,
        tasks_path=TASKS_PATH,
        trajectory_log_path=tmp_path / "trajectories.jsonl",
        user_simulator="scripted",
        max_turns=30,
    )


@pytest_asyncio.fixture
async def test_container(test_settings: Settings) -> AsyncGenerator[DependencyContainer, None]:
    """Process-wide container configured for a test, reset afterwards."""
    container = DependencyContainer()
    container.configure(test_settings)
    yield container
    await container.memory_store.clear()
    await container.aclose()
    container.reset()


@pytest_asyncio.fixture
async def client(test_container: DependencyContainer) -> AsyncGenerator[AsyncClient, None]:
    """HTTP client bound to the app and the test container."""
    from src.interfaces.main import create_app

    async with AsyncClient(transport=ASGITransport(app=create_app()), base_url="http://test") as ac:
        yield ac


class TestDataBuilder:
    """Builder for trajectories and turns."""

    @staticmethod
    def turn(
        index: int,
        action: Action,
        thought: str = "",
        feedback: str = "",
        result: Optional[ToolResult] = None,
    ) -> Turn:
        text = format_react(thought, action)
        if isinstance(action, Stop):
            feedback = ""
        return Turn(
            index=index,
            thought=thought,
            action=action,
            agent=agent_segment(text),
            feedback=environment_segment(feedback),
            tool_result=result,
        )

    @staticmethod
    def trajectory(
        turns: Sequence[tuple[Action, str, str]] = (),
        task_id: str = "task",
        rollout_index: int = 0,
        terminal_reward: Optional[int] = None,
        status: TrajectoryStatus = TrajectoryStatus.COMPLETED,
    ) -> Trajectory:
        """Build from (action, thought, feedback) triples; tool calls succeed as writes."""
        built = []
        for index, (action, thought, feedback) in enumerate(turns, start=1):
            result = None
            if isinstance(action, ToolCall):
                result = ToolResult.success({"ok": True}, mutated=True)
            built.append(TestDataBuilder.turn(index, action, thought, feedback, result))
        return Trajectory(
            task_id=task_id,
            turns=built,
            rollout_index=rollout_index,
            terminal_reward=terminal_reward,
            status=status,
        )

    @staticmethod
    def chat_turns(count: int, thought: str = "thinking") -> list[tuple[Action, str, str]]:
        """`count` user-message turns, each answered by the user."""
        return [(UserMessage(f"message {i}"), thought, f"reply {i}") for i in range(count)]


@pytest.fixture
def test_data_builder() -> TestDataBuilder:
    """Fixture for the test data builder."""
    return TestDataBuilder()
