"""Base-station side of the auction: bid bookkeeping, shadow price,
convergence test, and the final allocation."""

from __future__ import annotations

from typing import Iterable

from .ue import BidMessage, PriceUpdate


class DegenerateBidsError(RuntimeError):
    """Every current bid is zero; the shadow price would be degenerate."""


class BidLedger:
    """Current and previous bid vectors for one capacity pool.

    Bids are keyed by user id, so ingestion order within a round does not
    matter.  ``delta`` is the absolute per-user bid-change threshold under
    which the auction is declared converged.
    """

    def __init__(self, capacity: float, delta: float) -> None:
        if not capacity > 0:
            raise ValueError(f"capacity must be > 0, got {capacity}")
        if not delta > 0:
            raise ValueError(f"delta must be > 0, got {delta}")
        self.capacity = capacity
        self.delta = delta
        self.round = 0
        self.current: dict[int, float] = {}
        self.previous: dict[int, float] = {}

    def ingest(self, bids: Iterable[BidMessage]) -> None:
        """Replace the current bids with a new round, keeping the old round."""
        incoming: dict[int, float] = {}
        for msg in bids:
            if msg.bid < 0:
                raise ValueError(f"user {msg.user_id} sent negative bid {msg.bid}")
            if msg.user_id in incoming:
                raise ValueError(f"duplicate bid from user {msg.user_id}")
            incoming[msg.user_id] = msg.bid
        if not incoming:
            raise ValueError("a bid round must contain at least one bid")
        self.previous = self.current
        self.current = incoming
        self.round += 1

    def compute_price(self) -> PriceUpdate:
        """Shadow price = sum of current bids / capacity."""
        total = sum(self.current.values())
        if not total > 0:
            raise DegenerateBidsError("all current bids are zero")
        return PriceUpdate(iteration=self.round, price=total / self.capacity)

    def check_convergence(self) -> bool:
        """True iff every user's absolute bid change is within delta.

        False until two full rounds covering the same users exist.  The
        absolute value matters: a signed test would fire on any bid
        decrease long before the auction settles.
        """
        if not self.previous or self.previous.keys() != self.current.keys():
            return False
        return all(
            abs(self.current[uid] - self.previous[uid]) <= self.delta
            for uid in self.current
        )

    def allocate_rates(self, price: float) -> dict[int, float]:
        """Final rates bid/price per user.

        With the price from :meth:`compute_price` these sum to the capacity
        identically (each rate is bid * capacity / total bids).
        """
        if not price > 0:
            raise ValueError(f"price must be > 0, got {price}")
        return {uid: bid / price for uid, bid in self.current.items()}
