"""
Retail environment: seed loading, snapshots and state hashing.

The seed document is a JSON-compatible mapping with three collections
(`users`, `products`, `orders`) keyed by entity id; see docs/seed_schema.md.
"""

import hashlib
import json
from decimal import Decimal
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.domain.entities.retail import (
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
from src.domain.exceptions import DanglingReferenceError, SeedValidationError
from src.domain.value_objects.state_hash import StateHash


class _SeedModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class AddressSeed(_SeedModel):
    address1: str
    address2: str = ""
    city: str
    state: str
    country: str
    zip: str


class PaymentMethodSeed(_SeedModel):
    method_id: str
    kind: PaymentKind
    balance: Optional[Decimal] = Field(default=None, ge=0)


class UserSeed(_SeedModel):
    name: str
    email: str
    address: AddressSeed
    payment_methods: list[PaymentMethodSeed] = Field(default_factory=list)
    order_ids: list[str] = Field(default_factory=list)


class VariantSeed(_SeedModel):
    options: dict[str, str] = Field(default_factory=dict)
    price: Decimal = Field(ge=0)
    available: bool = True


class ProductSeed(_SeedModel):
    name: str
    variants: dict[str, VariantSeed] = Field(default_factory=dict)


class PaymentRecordSeed(_SeedModel):
    method_id: str
    amount: Decimal


class FulfillmentSeed(_SeedModel):
    tracking_ids: list[str] = Field(default_factory=list)
    item_ids: list[str] = Field(default_factory=list)


class OrderSeed(_SeedModel):
    user_id: str
    address: AddressSeed
    items: list[str]
    status: OrderStatus
    payment_history: list[PaymentRecordSeed] = Field(default_factory=list)
    fulfillments: list[FulfillmentSeed] = Field(default_factory=list)
    returned_item_ids: list[str] = Field(default_factory=list)


class SeedDocument(_SeedModel):
    users: dict[str, UserSeed] = Field(default_factory=dict)
    products: dict[str, ProductSeed] = Field(default_factory=dict)
    orders: dict[str, OrderSeed] = Field(default_factory=dict)


def _address(seed: AddressSeed) -> Address:
    return Address(**seed.model_dump())


def _first_error_path(exc: ValidationError) -> tuple[str, str]:
    first = exc.errors()[0]
    path = ".".join(str(part) for part in first["loc"]) or "<root>"
    return path, first["msg"]


def load_seed(seed_document: dict[str, Any]) -> EntityStore:
    """
    Build an EntityStore from a seed document.

    Raises:
        SeedValidationError: Schema violation, naming the first offending path
        DanglingReferenceError: Cross-reference that does not resolve
    """
    try:
        document = SeedDocument.model_validate(seed_document)
    except ValidationError as exc:
        path, reason = _first_error_path(exc)
        raise SeedValidationError(path, reason)

    users = {
        user_id: User(
            user_id=user_id,
            name=seed.name,
            email=seed.email,
            address=_address(seed.address),
            payment_methods=[
                PaymentMethod(method_id=m.method_id, kind=m.kind, balance=m.balance)
                for m in seed.payment_methods
            ],
            order_ids=list(seed.order_ids),
        )
        for user_id, seed in document.users.items()
    }
    products = {
        product_id: Product(
            product_id=product_id,
            name=seed.name,
            variants={
                item_id: Variant(
                    item_id=item_id,
                    options=dict(v.options),
                    price=v.price,
                    available=v.available,
                )
                for item_id, v in seed.variants.items()
            },
        )
        for product_id, seed in document.products.items()
    }
    orders = {
        order_id: Order(
            order_id=order_id,
            user_id=seed.user_id,
            address=_address(seed.address),
            items=list(seed.items),
            status=seed.status,
            payment_history=[PaymentRecord(p.method_id, p.amount) for p in seed.payment_history],
            fulfillments=[Fulfillment(list(f.tracking_ids), list(f.item_ids)) for f in seed.fulfillments],
            returned_item_ids=list(seed.returned_item_ids),
        )
        for order_id, seed in document.orders.items()
    }

    _check_uniqueness(users, products)
    store = EntityStore(users=users, products=products, orders=orders, version=0)
    _check_references(store)
    return store


def _check_uniqueness(users: dict[str, User], products: dict[str, Product]) -> None:
    seen_emails: dict[str, str] = {}
    for user in users.values():
        email = user.email.strip().lower()
        if email in seen_emails:
            raise SeedValidationError(f"users.{user.user_id}.email", f"email duplicates user {seen_emails[email]}")
        seen_emails[email] = user.user_id

        method_ids = [m.method_id for m in user.payment_methods]
        if len(method_ids) != len(set(method_ids)):
            raise SeedValidationError(f"users.{user.user_id}.payment_methods", "duplicate method_id")

        for method in user.payment_methods:
            if method.kind == PaymentKind.GIFT_CARD and method.balance is None:
                method.balance = Decimal("0")

    seen_items: dict[str, str] = {}
    for product in products.values():
        for item_id in product.variants:
            if item_id in seen_items:
                raise SeedValidationError(
                    f"products.{product.product_id}.variants.{item_id}",
                    f"item id also used by product {seen_items[item_id]}",
                )
            seen_items[item_id] = product.product_id


def _check_references(store: EntityStore) -> None:
    for order in store.orders.values():
        user = store.users.get(order.user_id)
        if user is None:
            raise DanglingReferenceError([order.order_id, order.user_id], "order references unknown user")

        missing_items = [i for i in order.items + order.returned_item_ids if store.find_variant(i) is None]
        if missing_items:
            raise DanglingReferenceError([order.order_id, *missing_items], "order references unknown items")

        unknown_methods = [p.method_id for p in order.payment_history if user.payment_method(p.method_id) is None]
        if unknown_methods:
            raise DanglingReferenceError(
                [order.order_id, *unknown_methods], "payment history references unknown payment methods"
            )

    for user in store.users.values():
        missing_orders = [o for o in user.order_ids if o not in store.orders]
        if missing_orders:
            raise DanglingReferenceError([user.user_id, *missing_orders], "user references unknown orders")


def snapshot(store: EntityStore) -> EntityStore:
    """Independent copy; writes to it never affect `store`."""
    return store.snapshot()


def canonical_bytes(store: EntityStore) -> bytes:
    """Compact, key-sorted UTF-8 JSON of the canonical store content."""
    return json.dumps(
        store.to_canonical(),
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    ).encode("utf-8")


def state_hash(store: EntityStore) -> StateHash:
    """SHA-256 digest of the canonical content (independent of insertion order)."""
    return StateHash(digest=hashlib.sha256(canonical_bytes(store)).digest())
