# Domain Services - Retail sandbox, trajectory model, rewards and advantages

from .advantages import (
    AssignMode,
    ClipConfig,
    PpoInputs,
    assign_rewards,
    batch_ppo_loss,
    broadcast_scalar_advantages,
    clipped_surrogate,
    entropy_top_mask,
    gae,
    grpo_advantages,
    kl_penalty,
    ppo_clip_loss,
    reward_to_go,
    rloo_advantages,
)
from .adjudication import parse_turn_scores, render_conversation, render_judge_prompt
from .evaluation import OutcomeMatrix, PassKEstimator, pass_hat_k, pass_table
from .intervention import CORRECTION_SENTENCE, InterventionDecision, InterventionPolicy
from .react import ParsedReact, format_react, parse_react, strip_reasoning, with_reasoning_prefix
from .retail_env import canonical_bytes, load_seed, snapshot, state_hash
from .scripted_user import ScriptedUser
from .tarl import TarlScale, categorize, combine, terminal_only
from .task_mixer import TaskMixer
from .tokenizer import DEFAULT_TOKENIZER, RegexTokenizer, Tokenizer
from .toolkit import ToolRegistry, build_retail_registry
from .trajectory_ops import (
    TrajectoryStats,
    agent_segment,
    build_loss_mask,
    environment_segment,
    stats,
)
from .verifier import extract_writes, output_check, verify, verify_math, verify_trajectory

__all__ = [
    "AssignMode",
    "CORRECTION_SENTENCE",
    "ClipConfig",
    "DEFAULT_TOKENIZER",
    "InterventionDecision",
    "InterventionPolicy",
    "OutcomeMatrix",
    "ParsedReact",
    "PassKEstimator",
    "PpoInputs",
    "RegexTokenizer",
    "ScriptedUser",
    "TarlScale",
    "TaskMixer",
    "Tokenizer",
    "ToolRegistry",
    "TrajectoryStats",
    "agent_segment",
    "assign_rewards",
    "batch_ppo_loss",
    "broadcast_scalar_advantages",
    "build_loss_mask",
    "build_retail_registry",
    "canonical_bytes",
    "categorize",
    "clipped_surrogate",
    "combine",
    "entropy_top_mask",
    "environment_segment",
    "extract_writes",
    "format_react",
    "gae",
    "grpo_advantages",
    "kl_penalty",
    "load_seed",
    "output_check",
    "parse_react",
    "parse_turn_scores",
    "pass_hat_k",
    "pass_table",
    "ppo_clip_loss",
    "render_conversation",
    "render_judge_prompt",
    "reward_to_go",
    "rloo_advantages",
    "snapshot",
    "state_hash",
    "stats",
    "strip_reasoning",
    "terminal_only",
    "verify",
    "verify_math",
    "verify_trajectory",
    "with_reasoning_prefix",
]
