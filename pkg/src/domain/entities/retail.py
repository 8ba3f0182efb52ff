"""
Retail domain entities.

Users, products and orders held by the episode's EntityStore. Monetary
values are exact decimals; the store is mutated only by write tools.
"""

import copy
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from typing import Any, Optional

CENT = Decimal("0.01")


def money(value: Decimal) -> str:
    """Fixed two-digit rendering used for canonical form and payloads."""
    return str(value.quantize(CENT))


class PaymentKind(str, Enum):
    CREDIT_CARD = "credit_card"
    PAYPAL = "paypal"
    GIFT_CARD = "gift_card"


class OrderStatus(str, Enum):
    PENDING = "pending"
    DELIVERED = "delivered"
    CANCELLED = "cancelled"
    EXCHANGED = "exchanged"
    RETURNED = "returned"
    MODIFIED = "modified"


@dataclass
class Address:
    address1: str
    address2: str
    city: str
    state: str
    country: str
    zip: str

    def to_dict(self) -> dict[str, str]:
        return {
            "address1": self.address1,
            "address2": self.address2,
            "city": self.city,
            "state": self.state,
            "country": self.country,
            "zip": self.zip,
        }


@dataclass
class PaymentMethod:
    method_id: str
    kind: PaymentKind
    balance: Optional[Decimal] = None  # gift cards only

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"method_id": self.method_id, "kind": self.kind.value}
        if self.balance is not None:
            data["balance"] = money(self.balance)
        return data


@dataclass
class User:
    user_id: str
    name: str
    email: str
    address: Address
    payment_methods: list[PaymentMethod] = field(default_factory=list)
    order_ids: list[str] = field(default_factory=list)

    @property
    def zip(self) -> str:
        return self.address.zip

    def payment_method(self, method_id: str) -> Optional[PaymentMethod]:
        return next((m for m in self.payment_methods if m.method_id == method_id), None)

    def to_dict(self) -> dict[str, Any]:
        return {
            "user_id": self.user_id,
            "name": self.name,
            "email": self.email,
            "address": self.address.to_dict(),
            "payment_methods": [m.to_dict() for m in sorted(self.payment_methods, key=lambda m: m.method_id)],
            "order_ids": list(self.order_ids),
        }


@dataclass
class Variant:
    item_id: str
    options: dict[str, str]
    price: Decimal
    available: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "item_id": self.item_id,
            "options": dict(sorted(self.options.items())),
            "price": money(self.price),
            "available": self.available,
        }


@dataclass
class Product:
    product_id: str
    name: str
    variants: dict[str, Variant] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "product_id": self.product_id,
            "name": self.name,
            "variants": {k: self.variants[k].to_dict() for k in sorted(self.variants)},
        }


@dataclass
class PaymentRecord:
    """One append-only payment-history entry; negative amounts are refunds."""

    method_id: str
    amount: Decimal

    def to_dict(self) -> dict[str, str]:
        return {"method_id": self.method_id, "amount": money(self.amount)}


@dataclass
class Fulfillment:
    tracking_ids: list[str]
    item_ids: list[str]

    def to_dict(self) -> dict[str, list[str]]:
        return {"tracking_ids": list(self.tracking_ids), "item_ids": list(self.item_ids)}


@dataclass
class Order:
    order_id: str
    user_id: str
    address: Address
    items: list[str]
    status: OrderStatus
    payment_history: list[PaymentRecord] = field(default_factory=list)
    fulfillments: list[Fulfillment] = field(default_factory=list)
    returned_item_ids: list[str] = field(default_factory=list)

    def net_paid_by_method(self) -> dict[str, Decimal]:
        """Net amount paid per payment method (charges minus refunds)."""
        totals: dict[str, Decimal] = {}
        for record in self.payment_history:
            totals[record.method_id] = totals.get(record.method_id, Decimal("0")) + record.amount
        return totals

    def to_dict(self) -> dict[str, Any]:
        return {
            "order_id": self.order_id,
            "user_id": self.user_id,
            "address": self.address.to_dict(),
            "items": list(self.items),
            "status": self.status.value,
            "payment_history": [p.to_dict() for p in self.payment_history],
            "fulfillments": [f.to_dict() for f in self.fulfillments],
            "returned_item_ids": list(self.returned_item_ids),
        }


@dataclass
class EntityStore:
    """
    Relational retail state for one episode.

    `version` is a monotonic counter of successful writes. Products are never
    mutated by tools, so the item index built at construction stays valid.
    """

    users: dict[str, User] = field(default_factory=dict)
    products: dict[str, Product] = field(default_factory=dict)
    orders: dict[str, Order] = field(default_factory=dict)
    version: int = 0

    def __post_init__(self) -> None:
        self._item_index: dict[str, tuple[str, Variant]] = {
            item_id: (product.product_id, variant)
            for product in self.products.values()
            for item_id, variant in product.variants.items()
        }

    def find_variant(self, item_id: str) -> Optional[tuple[str, Variant]]:
        """Return (product_id, variant) for an item id."""
        return self._item_index.get(item_id)

    def item_price(self, item_id: str) -> Decimal:
        found = self.find_variant(item_id)
        if found is None:
            raise KeyError(item_id)
        return found[1].price

    def record_write(self) -> None:
        self.version += 1

    def snapshot(self) -> "EntityStore":
        """Independent deep copy; the copy keeps the current version."""
        return copy.deepcopy(self)

    def to_canonical(self) -> dict[str, Any]:
        """Canonical content (entities sorted by id, fixed-precision decimals)."""
        return {
            "orders": {k: self.orders[k].to_dict() for k in sorted(self.orders)},
            "products": {k: self.products[k].to_dict() for k in sorted(self.products)},
            "users": {k: self.users[k].to_dict() for k in sorted(self.users)},
        }

    def __repr__(self) -> str:
        return (
            f"EntityStore(users={len(self.users)}, products={len(self.products)}, "
            f"orders={len(self.orders)}, version={self.version})"
        )
