# Domain Entities - Core business objects

from .retail import (
    Address,
    EntityStore,
    Fulfillment,
    Order,
    OrderStatus,
    PaymentKind,
    PaymentMethod,
    PaymentRecord,
    Product,
    User,
    Variant,
)
from .session import Session, utc_now
from .task import DomainTag, GroundTruth, ScriptStep, TaskSpec
from .tools import ArgType, ToolKind, ToolResult, ToolSpec, ToolStatus
from .trajectory import (
    STOP_TOKEN,
    Action,
    InvalidAction,
    Modality,
    RolloutGroup,
    Segment,
    SegmentRole,
    Speaker,
    Stop,
    Trajectory,
    TrajectoryStatus,
    Turn,
    UserMessage,
    Utterance,
)

__all__ = [
    "Action",
    "Address",
    "ArgType",
    "DomainTag",
    "EntityStore",
    "Fulfillment",
    "GroundTruth",
    "InvalidAction",
    "Modality",
    "Order",
    "OrderStatus",
    "PaymentKind",
    "PaymentMethod",
    "PaymentRecord",
    "Product",
    "RolloutGroup",
    "STOP_TOKEN",
    "ScriptStep",
    "Session",
    "Segment",
    "SegmentRole",
    "Speaker",
    "Stop",
    "TaskSpec",
    "ToolKind",
    "ToolResult",
    "ToolSpec",
    "ToolStatus",
    "Trajectory",
    "TrajectoryStatus",
    "Turn",
    "User",
    "UserMessage",
    "Utterance",
    "Variant",
    "utc_now",
]
