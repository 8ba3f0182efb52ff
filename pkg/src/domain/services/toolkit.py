"""
Retail toolkit: tool registry and execution semantics.

Read tools are pure queries. Write tools are single-call transactions: every
precondition is validated before the first mutation, so a failed write leaves
the store untouched. Price differences are charged (positive) or refunded
(negative) to the named payment method and recorded in the order's
append-only payment history; gift-card balances move accordingly.
"""

from collections import Counter
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Any, Callable, Iterable, Optional

import structlog

from src.domain.entities.retail import (
    Address,
    EntityStore,
    Order,
    OrderStatus,
    PaymentKind,
    PaymentMethod,
    PaymentRecord,
    User,
    money,
)
from src.domain.entities.tools import ArgType, ToolKind, ToolResult, ToolSpec
from src.domain.exceptions import ToolArgumentError, UnknownToolError
from src.domain.value_objects.tool_call import ToolCall

logger = structlog.get_logger(__name__)

ZERO = Decimal("0")
CANCEL_REASONS = ("no longer needed", "ordered by mistake")


class ToolFailure(Exception):
    """Domain-level tool failure, reported as a ToolResult error."""

    def __init__(self, code: str, message: str):
        self.code = code
        self.message = message
        super().__init__(message)


Handler = Callable[[EntityStore, dict[str, Any]], Any]


@dataclass(frozen=True)
class RegisteredTool:
    spec: ToolSpec
    handler: Handler


class ToolRegistry:
    """Stateless registry of tools; execution mutates only the given store."""

    def __init__(self, tools: Iterable[RegisteredTool] = ()):
        self._tools: dict[str, RegisteredTool] = {}
        for tool in tools:
            if tool.spec.name in self._tools:
                raise ValueError(f"duplicate tool name: {tool.spec.name}")
            self._tools[tool.spec.name] = tool

    def __len__(self) -> int:
        return len(self._tools)

    def __contains__(self, name: object) -> bool:
        return name in self._tools

    def list_tools(self) -> list[ToolSpec]:
        """Tool specs in stable name order."""
        return [self._tools[name].spec for name in sorted(self._tools)]

    def descriptor(self) -> list[dict[str, Any]]:
        return [spec.to_descriptor() for spec in self.list_tools()]

    def get_spec(self, name: str) -> ToolSpec:
        tool = self._tools.get(name)
        if tool is None:
            raise UnknownToolError(name)
        return tool.spec

    def is_write(self, name: str) -> bool:
        tool = self._tools.get(name)
        return tool is not None and tool.spec.kind == ToolKind.WRITE

    def write_tool_names(self) -> set[str]:
        return {name for name, tool in self._tools.items() if tool.spec.kind == ToolKind.WRITE}

    def filtered(self, names: Optional[Iterable[str]]) -> "ToolRegistry":
        """Registry restricted to `names` (None keeps every tool)."""
        if names is None:
            return self
        wanted = set(names)
        unknown = wanted - set(self._tools)
        if unknown:
            raise UnknownToolError(", ".join(sorted(unknown)))
        return ToolRegistry(t for n, t in self._tools.items() if n in wanted)

    def validate(self, call: ToolCall) -> ToolSpec:
        """
        Check that the tool exists and the arguments match its schema.

        Raises:
            UnknownToolError: Tool is not registered
            ToolArgumentError: Missing, unexpected or mistyped argument
        """
        spec = self.get_spec(call.name)
        params = spec.parameters
        for name in params:
            if name not in call.arguments:
                raise ToolArgumentError(spec.name, name, "missing required argument")
        for name, value in call.arguments.items():
            if name not in params:
                raise ToolArgumentError(spec.name, name, "unexpected argument")
            _check_type(spec.name, name, params[name], value)
        return spec

    def execute(self, store: EntityStore, call: ToolCall) -> ToolResult:
        """Execute a call against `store`; never raises for tool-level failures."""
        try:
            spec = self.validate(call)
        except UnknownToolError as exc:
            return ToolResult.failure("unknown_tool", exc.message)
        except ToolArgumentError as exc:
            return ToolResult.failure("invalid_arguments", exc.message)

        try:
            payload = self._tools[spec.name].handler(store, call.arguments)
        except ToolFailure as failure:
            logger.debug("tool failed", tool=spec.name, code=failure.code)
            return ToolResult.failure(failure.code, failure.message)

        if spec.kind == ToolKind.WRITE:
            store.record_write()
            logger.debug("write committed", tool=spec.name, version=store.version)
            return ToolResult.success(payload, mutated=True)
        return ToolResult.success(payload)


def _check_type(tool: str, name: str, arg_type: ArgType, value: Any) -> None:
    if arg_type == ArgType.STRING:
        ok = isinstance(value, str)
    elif arg_type == ArgType.STRING_LIST:
        ok = isinstance(value, list) and all(isinstance(v, str) for v in value)
        if isinstance(value, list) and not ok:
            bad = next(i for i, v in enumerate(value) if not isinstance(v, str))
            raise ToolArgumentError(tool, f"{name}[{bad}]", "expected string")
    elif arg_type == ArgType.DECIMAL:
        ok = False
        if not isinstance(value, bool) and isinstance(value, (int, float, str)):
            try:
                Decimal(str(value))
                ok = True
            except InvalidOperation:
                ok = False
    else:
        ok = isinstance(value, dict)
    if not ok:
        raise ToolArgumentError(tool, name, f"expected {arg_type.value}")


# Shared lookups


def _order(store: EntityStore, order_id: str) -> Order:
    order = store.orders.get(order_id)
    if order is None:
        raise ToolFailure("order_not_found", f"Order {order_id} not found")
    return order


def _user(store: EntityStore, user_id: str) -> User:
    user = store.users.get(user_id)
    if user is None:
        raise ToolFailure("user_not_found", f"User {user_id} not found")
    return user


def _method(user: User, method_id: str) -> PaymentMethod:
    method = user.payment_method(method_id)
    if method is None:
        raise ToolFailure("payment_method_not_found", f"Payment method {method_id} not found for user {user.user_id}")
    return method


def _require_status(order: Order, allowed: tuple[OrderStatus, ...], code: str, label: str) -> None:
    if order.status not in allowed:
        raise ToolFailure(code, f"Order {order.order_id} is not {label} (status: {order.status.value})")


def _require_items_in_order(order: Order, item_ids: list[str]) -> None:
    if not item_ids:
        raise ToolFailure("empty_item_list", "item_ids cannot be empty")
    missing = Counter(item_ids) - Counter(order.items)
    if missing:
        raise ToolFailure("item_not_in_order", f"Items not in order {order.order_id}: {sorted(missing)}")


def _check_swaps(store: EntityStore, item_ids: list[str], new_item_ids: list[str]) -> Decimal:
    """Validate positional (old, new) pairs; return the price difference."""
    if len(item_ids) != len(new_item_ids):
        raise ToolFailure("length_mismatch", "item_ids and new_item_ids must have the same length")
    delta = ZERO
    for old_id, new_id in zip(item_ids, new_item_ids):
        old = store.find_variant(old_id)
        new = store.find_variant(new_id)
        if old is None:
            raise ToolFailure("item_not_found", f"Item {old_id} not found")
        if new is None:
            raise ToolFailure("item_not_found", f"Item {new_id} not found")
        if old[0] != new[0]:
            raise ToolFailure("variant_mismatch", f"Item {new_id} is not a variant of the same product as {old_id}")
        if new_id == old_id:
            raise ToolFailure("same_item", f"Item {new_id} is identical to the item it replaces")
        if not new[1].available:
            raise ToolFailure("item_unavailable", f"Item {new_id} is not available")
        delta += new[1].price - old[1].price
    return delta


def _check_charge(method: PaymentMethod, amount: Decimal) -> None:
    if method.kind == PaymentKind.GIFT_CARD and amount > ZERO and (method.balance or ZERO) < amount:
        raise ToolFailure("insufficient_balance", f"Gift card {method.method_id} balance is insufficient")


def _post_payment(order: Order, method: PaymentMethod, amount: Decimal) -> None:
    """Append a payment record and move the gift-card balance; no-op for zero."""
    if amount == ZERO:
        return
    order.payment_history.append(PaymentRecord(method_id=method.method_id, amount=amount))
    if method.kind == PaymentKind.GIFT_CARD:
        method.balance = (method.balance or ZERO) - amount


def _swap_items(order: Order, item_ids: list[str], new_item_ids: list[str]) -> None:
    items = list(order.items)
    replaced: set[int] = set()
    for old_id, new_id in zip(item_ids, new_item_ids):
        position = next(i for i, item in enumerate(items) if item == old_id and i not in replaced)
        items[position] = new_id
        replaced.add(position)
    order.items = items


def _order_payload(store: EntityStore, order: Order) -> dict[str, Any]:
    payload = order.to_dict()
    details = []
    for item_id in order.items:
        found = store.find_variant(item_id)
        if found is None:
            continue
        product_id, variant = found
        details.append(
            {
                "item_id": item_id,
                "product_id": product_id,
                "name": store.products[product_id].name,
                "options": dict(variant.options),
                "price": money(variant.price),
            }
        )
    payload["item_details"] = details
    return payload


# Read tools


def find_user_id_by_email(store: EntityStore, args: dict[str, Any]) -> str:
    email = args["email"].strip().lower()
    for user in store.users.values():
        if user.email.lower() == email:
            return user.user_id
    raise ToolFailure("user_not_found", f"No user with email {args['email']}")


def get_user_details(store: EntityStore, args: dict[str, Any]) -> dict[str, Any]:
    return _user(store, args["user_id"]).to_dict()


def get_order_details(store: EntityStore, args: dict[str, Any]) -> dict[str, Any]:
    return _order_payload(store, _order(store, args["order_id"]))


def list_product_variants(store: EntityStore, args: dict[str, Any]) -> dict[str, Any]:
    product = store.products.get(args["product_id"])
    if product is None:
        raise ToolFailure("product_not_found", f"Product {args['product_id']} not found")
    return product.to_dict()


def calculate_refund(store: EntityStore, args: dict[str, Any]) -> dict[str, Any]:
    order = _order(store, args["order_id"])
    _require_items_in_order(order, args["item_ids"])
    refund = sum((store.item_price(i) for i in args["item_ids"]), ZERO)
    return {"order_id": order.order_id, "item_ids": list(args["item_ids"]), "refund_amount": money(refund)}


# Write tools


def exchange_delivered_order_items(store: EntityStore, args: dict[str, Any]) -> dict[str, Any]:
    order = _order(store, args["order_id"])
    _require_status(order, (OrderStatus.DELIVERED,), "order_not_delivered", "delivered")
    _require_items_in_order(order, args["item_ids"])
    delta = _check_swaps(store, args["item_ids"], args["new_item_ids"])
    method = _method(_user(store, order.user_id), args["payment_method_id"])
    _check_charge(method, delta)

    _swap_items(order, args["item_ids"], args["new_item_ids"])
    _post_payment(order, method, delta)
    order.status = OrderStatus.EXCHANGED

    payload = _order_payload(store, order)
    payload["price_difference"] = money(delta)
    return payload


def return_delivered_order_items(store: EntityStore, args: dict[str, Any]) -> dict[str, Any]:
    order = _order(store, args["order_id"])
    _require_status(order, (OrderStatus.DELIVERED,), "order_not_delivered", "delivered")
    _require_items_in_order(order, args["item_ids"])
    method = _method(_user(store, order.user_id), args["payment_method_id"])
    refund = sum((store.item_price(i) for i in args["item_ids"]), ZERO)

    _post_payment(order, method, -refund)
    order.returned_item_ids.extend(args["item_ids"])
    order.status = OrderStatus.RETURNED

    payload = _order_payload(store, order)
    payload["refund_amount"] = money(refund)
    return payload


def modify_pending_order_items(store: EntityStore, args: dict[str, Any]) -> dict[str, Any]:
    order = _order(store, args["order_id"])
    _require_status(order, (OrderStatus.PENDING,), "order_not_pending", "pending")
    _require_items_in_order(order, args["item_ids"])
    delta = _check_swaps(store, args["item_ids"], args["new_item_ids"])
    method = _method(_user(store, order.user_id), args["payment_method_id"])
    _check_charge(method, delta)

    _swap_items(order, args["item_ids"], args["new_item_ids"])
    _post_payment(order, method, delta)
    order.status = OrderStatus.MODIFIED

    payload = _order_payload(store, order)
    payload["price_difference"] = money(delta)
    return payload


def modify_pending_order_address(store: EntityStore, args: dict[str, Any]) -> dict[str, Any]:
    order = _order(store, args["order_id"])
    _require_status(order, (OrderStatus.PENDING, OrderStatus.MODIFIED), "order_not_pending", "pending")
    address = Address(
        address1=args["address1"],
        address2=args["address2"],
        city=args["city"],
        state=args["state"],
        country=args["country"],
        zip=args["zip"],
    )
    if address == order.address:
        raise ToolFailure("no_change", "New address is identical to the current address")

    order.address = address
    return _order_payload(store, order)


def modify_pending_order_payment(store: EntityStore, args: dict[str, Any]) -> dict[str, Any]:
    order = _order(store, args["order_id"])
    _require_status(order, (OrderStatus.PENDING, OrderStatus.MODIFIED), "order_not_pending", "pending")
    user = _user(store, order.user_id)
    new_method = _method(user, args["payment_method_id"])

    paid = {m: amount for m, amount in order.net_paid_by_method().items() if amount != ZERO}
    if len(paid) != 1:
        raise ToolFailure("ambiguous_payment", f"Order {order.order_id} is not paid by exactly one method")
    (old_method_id, total), = paid.items()
    if old_method_id == new_method.method_id:
        raise ToolFailure("same_payment_method", "New payment method is the current payment method")
    old_method = _method(user, old_method_id)
    _check_charge(new_method, total)

    _post_payment(order, old_method, -total)
    _post_payment(order, new_method, total)
    return _order_payload(store, order)


def cancel_pending_order(store: EntityStore, args: dict[str, Any]) -> dict[str, Any]:
    order = _order(store, args["order_id"])
    _require_status(order, (OrderStatus.PENDING,), "order_not_pending", "pending")
    reason = args["reason"].strip().lower()
    if reason not in CANCEL_REASONS:
        raise ToolFailure("invalid_reason", f"Reason must be one of {list(CANCEL_REASONS)}")
    user = _user(store, order.user_id)

    refunds = [(user.payment_method(m), amount) for m, amount in order.net_paid_by_method().items() if amount > ZERO]
    for method, amount in refunds:
        if method is not None:
            _post_payment(order, method, -amount)
    order.status = OrderStatus.CANCELLED

    payload = _order_payload(store, order)
    payload["cancel_reason"] = reason
    return payload


_S = ArgType.STRING
_L = ArgType.STRING_LIST


def _tool(name: str, kind: ToolKind, schema: list[tuple[str, ArgType]], description: str, handler: Handler,
          mutates: tuple[str, ...] = ()) -> RegisteredTool:
    return RegisteredTool(
        spec=ToolSpec(name=name, kind=kind, arg_schema=tuple(schema), description=description, mutates=mutates),
        handler=handler,
    )


def build_retail_registry() -> ToolRegistry:
    """The retail tool roster."""
    read, write = ToolKind.READ, ToolKind.WRITE
    return ToolRegistry(
        [
            _tool("find_user_id_by_email", read, [("email", _S)],
                  "Find a user id by email address.", find_user_id_by_email),
            _tool("get_user_details", read, [("user_id", _S)],
                  "Get user profile, payment methods and order ids.", get_user_details),
            _tool("get_order_details", read, [("order_id", _S)],
                  "Get order status, address, items, payment history and fulfillments.", get_order_details),
            _tool("list_product_variants", read, [("product_id", _S)],
                  "List a product's variants with options, price and availability.", list_product_variants),
            _tool("calculate_refund", read, [("order_id", _S), ("item_ids", _L)],
                  "Compute the refund amount for items of an order.", calculate_refund),
            _tool("exchange_delivered_order_items", write,
                  [("order_id", _S), ("item_ids", _L), ("new_item_ids", _L), ("payment_method_id", _S)],
                  "Exchange items of a delivered order for other variants of the same products; "
                  "the price difference is charged or refunded to the payment method.",
                  exchange_delivered_order_items, mutates=("orders", "users")),
            _tool("return_delivered_order_items", write,
                  [("order_id", _S), ("item_ids", _L), ("payment_method_id", _S)],
                  "Return items of a delivered order; the refund goes to the payment method.",
                  return_delivered_order_items, mutates=("orders", "users")),
            _tool("modify_pending_order_items", write,
                  [("order_id", _S), ("item_ids", _L), ("new_item_ids", _L), ("payment_method_id", _S)],
                  "Swap items of a pending order for other variants; allowed once per order.",
                  modify_pending_order_items, mutates=("orders", "users")),
            _tool("modify_pending_order_address", write,
                  [("order_id", _S), ("address1", _S), ("address2", _S), ("city", _S),
                   ("state", _S), ("country", _S), ("zip", _S)],
                  "Change the shipping address of a pending order.",
                  modify_pending_order_address, mutates=("orders",)),
            _tool("modify_pending_order_payment", write,
                  [("order_id", _S), ("payment_method_id", _S)],
                  "Move the payment of a pending order to another payment method.",
                  modify_pending_order_payment, mutates=("orders", "users")),
            _tool("cancel_pending_order", write,
                  [("order_id", _S), ("reason", _S)],
                  "Cancel a pending order ('no longer needed' or 'ordered by mistake'); paid amounts are refunded.",
                  cancel_pending_order, mutates=("orders", "users")),
        ]
    )
