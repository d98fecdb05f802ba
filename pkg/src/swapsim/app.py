"""Composition root: wires the store, buses, services, harness, and views into
one running simulator.

Construction order fixes the subscription order on the event bus, which in
turn fixes the relative order of reactive appends; keeping it constant is part
of what makes two identical runs produce identical logs. A restart over a
file-backed store rebuilds the harness and query views by refolding the log;
aggregates rebuild lazily on first access.

Simulation reset erases the event log (and restarts sequencing) but keeps the
party registry: onboarding outlives any individual simulation run.
"""

from __future__ import annotations

from pathlib import Path

from .errors import InvalidCommand
from .eventstore import CommandBus, FileEventStore, InMemoryEventStore
from .fmi import FmiCommandService, QueryService
from .harness import LifecycleInitiator, SimulationHarness
from .registry import PartyRegistry

DEFAULT_SEED = 42

EVENT_LOG_FILENAME = "events.log"
PARTIES_FILENAME = "parties.json"


class SimulatorApp:
    def __init__(
        self,
        storage: str = "memory",
        data_dir: str | Path | None = None,
        seed: int = DEFAULT_SEED,
    ) -> None:
        if storage not in ("memory", "file"):
            raise InvalidCommand(f"storage must be 'memory' or 'file', got {storage!r}")
        if storage == "file" and data_dir is None:
            raise InvalidCommand("file storage requires a data directory")
        self.seed = seed
        self.storage = storage
        self.data_dir = Path(data_dir) if data_dir is not None else None

        if storage == "file":
            self.store: InMemoryEventStore = FileEventStore(self.data_dir / EVENT_LOG_FILENAME)
        else:
            self.store = InMemoryEventStore()
        self.registry = PartyRegistry(
            path=self.data_dir / PARTIES_FILENAME if self.data_dir is not None else None
        )
        self.bus = CommandBus()
        # Subscription order is part of the run's deterministic behaviour:
        # harness first, then the settlement chain, the initiator, the views.
        self.harness = SimulationHarness(self.store)
        self.fmi = FmiCommandService(
            self.store,
            self.bus,
            self.registry,
            now=self.harness.now_or_epoch,
            seed=lambda: self.seed,
        )
        self.initiator = LifecycleInitiator(self.store, self.bus, now=self.harness.now_or_epoch)
        self.query = QueryService(self.store, self.registry)
        self.registry.set_in_use_check(self.fmi.party_in_use)
        if self.store.last_sequence() > 0:
            self.rebuild()

    def rebuild(self) -> None:
        """Refold all read-side state from the log (after loading a file store)."""
        self.harness.rebuild()
        self.query.rebuild()
        self.fmi.clear()

    def reset_simulation(self, seed: int | None = None) -> int:
        """Erase the simulation: empty log, fresh sequence numbers, no clock.
        Registered parties survive. Returns the seed now in force."""
        if seed is not None:
            self.seed = seed
        self.store.reset()
        self.harness.clear()
        self.query.clear()
        self.fmi.clear()
        return self.seed

    def close(self) -> None:
        close = getattr(self.store, "close", None)
        if close is not None:
            close()
