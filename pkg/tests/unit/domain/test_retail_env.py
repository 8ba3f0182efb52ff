"""
Unit tests for seed loading, snapshots and state hashing.
"""

import copy
from decimal import Decimal

import pytest

from src.domain.entities.retail import OrderStatus, PaymentKind
from src.domain.exceptions import DanglingReferenceError, SeedValidationError
from src.domain.services.retail_env import canonical_bytes, load_seed, snapshot, state_hash


class TestLoadSeed:
    """Tests for building an EntityStore from a seed document."""

    def test_load_bundled_seed(self, seed_document):
        """The bundled seed loads with every collection populated."""
        store = load_seed(seed_document)

        assert set(store.users) == {"noah_brown_6181", "mei_kovacs_8020"}
        assert len(store.products) == 3
        assert len(store.orders) == 4
        assert store.version == 0

    def test_decimals_are_exact(self, seed_store):
        """Prices and balances are Decimals, never floats."""
        gift_card = seed_store.users["mei_kovacs_8020"].payment_method("gift_card_1776915")

        assert gift_card.kind == PaymentKind.GIFT_CARD
        assert gift_card.balance == Decimal("57.36")
        assert seed_store.item_price("8084436579") == Decimal("219.43")

    def test_item_index(self, seed_store):
        """Item ids resolve to their product and variant."""
        product_id, variant = seed_store.find_variant("6906307980")

        assert product_id == "2524789262"
        assert variant.available is False
        assert seed_store.find_variant("0000000000") is None

    def test_missing_field_names_the_path(self, seed_document):
        """A schema violation names the first offending path."""
        broken = copy.deepcopy(seed_document)
        del broken["users"]["noah_brown_6181"]["email"]

        with pytest.raises(SeedValidationError) as exc_info:
            load_seed(broken)

        assert exc_info.value.path == "users.noah_brown_6181.email"

    def test_unknown_field_rejected(self, seed_document):
        broken = copy.deepcopy(seed_document)
        broken["orders"]["#W7678072"]["coupon"] = "SAVE10"

        with pytest.raises(SeedValidationError) as exc_info:
            load_seed(broken)

        assert "coupon" in exc_info.value.path

    def test_negative_price_rejected(self, seed_document):
        broken = copy.deepcopy(seed_document)
        broken["products"]["8310926033"]["variants"]["2343503231"]["price"] = "-1.00"

        with pytest.raises(SeedValidationError):
            load_seed(broken)

    def test_duplicate_email_rejected(self, seed_document):
        """Emails are unique across users, ignoring case."""
        broken = copy.deepcopy(seed_document)
        broken["users"]["mei_kovacs_8020"]["email"] = "NOAH.BROWN7922@example.com"

        with pytest.raises(SeedValidationError) as exc_info:
            load_seed(broken)

        assert exc_info.value.path == "users.mei_kovacs_8020.email"

    def test_dangling_user_reference(self, seed_document):
        """An order pointing at an unknown user is rejected with the ids involved."""
        broken = copy.deepcopy(seed_document)
        broken["orders"]["#W3818056"]["user_id"] = "ghost_0001"

        with pytest.raises(DanglingReferenceError) as exc_info:
            load_seed(broken)

        assert exc_info.value.entity_ids == ["#W3818056", "ghost_0001"]

    def test_dangling_item_reference(self, seed_document):
        broken = copy.deepcopy(seed_document)
        broken["orders"]["#W8065207"]["items"] = ["1111111111"]

        with pytest.raises(DanglingReferenceError) as exc_info:
            load_seed(broken)

        assert "1111111111" in exc_info.value.entity_ids

    def test_dangling_order_reference(self, seed_document):
        broken = copy.deepcopy(seed_document)
        broken["users"]["noah_brown_6181"]["order_ids"].append("#W0000000")

        with pytest.raises(DanglingReferenceError):
            load_seed(broken)

    def test_unknown_payment_method_in_history(self, seed_document):
        broken = copy.deepcopy(seed_document)
        broken["orders"]["#W6390527"]["payment_history"][0]["method_id"] = "paypal_0000000"

        with pytest.raises(DanglingReferenceError):
            load_seed(broken)


class TestSnapshotAndHash:
    """Tests for snapshot isolation and the canonical state hash."""

    def test_hash_is_deterministic(self, seed_document):
        """Two loads of the same document hash identically."""
        assert state_hash(load_seed(seed_document)) == state_hash(load_seed(seed_document))

    def test_hash_ignores_insertion_order(self, seed_document):
        """Reordering collection keys does not change the digest."""
        reordered = copy.deepcopy(seed_document)
        for collection in ("users", "products", "orders"):
            reordered[collection] = dict(reversed(list(reordered[collection].items())))

        assert canonical_bytes(load_seed(reordered)) == canonical_bytes(load_seed(seed_document))
        assert state_hash(load_seed(reordered)) == state_hash(load_seed(seed_document))

    def test_hash_is_32_bytes(self, seed_store):
        digest = state_hash(seed_store)

        assert len(digest.digest) == 32
        assert len(digest.hex) == 64

    def test_snapshot_is_independent(self, seed_store):
        """Mutating a snapshot never touches the original."""
        before = state_hash(seed_store)

        copy_store = snapshot(seed_store)
        copy_store.orders["#W3818056"].status = OrderStatus.CANCELLED
        copy_store.users["mei_kovacs_8020"].payment_methods[0].balance = Decimal("0")

        assert state_hash(seed_store) == before
        assert state_hash(copy_store) != before
        assert seed_store.orders["#W3818056"].status == OrderStatus.PENDING

    def test_snapshot_keeps_version(self, seed_store):
        seed_store.record_write()

        assert snapshot(seed_store).version == 1
