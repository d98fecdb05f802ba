"""Party reference-data registry.

Plain CRUD state, deliberately not event-sourced: parties are reference data
keyed by registry-assigned ids (``party-1``, ``party-2``, ...) that are never
reused, even after deletion. Legal entity identifiers are unique across the
registry. Deletion is refused while any non-terminal trade references the
party; that check is injected by the application so the registry stays
ignorant of trade storage.

With a data directory configured the registry writes itself through to a JSON
file and reloads from it on startup. Party data survives simulation resets.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Callable, Iterable

from .errors import DuplicateLei, InvalidParty, NotFound, PartyInUse
from .model import Party
from .serialization import canonical_dumps, party_from_json, party_to_json


class PartyRegistry:
    def __init__(self, path: str | Path | None = None) -> None:
        self._path = Path(path) if path is not None else None
        self._parties: dict[str, Party] = {}
        self._next_id = 1
        self._in_use_check: Callable[[str], bool] = lambda party_id: False
        if self._path is not None and self._path.exists():
            self._load()

    def set_in_use_check(self, check: Callable[[str], bool]) -> None:
        """Install the predicate deciding whether a party backs a live trade."""
        self._in_use_check = check

    # -- commands -----------------------------------------------------------

    def register(self, name: str, legal_entity_id: str) -> Party:
        if not name.strip():
            raise InvalidParty("party name must not be empty")
        if not legal_entity_id.strip():
            raise InvalidParty("legal entity id must not be empty")
        self._require_unique_lei(legal_entity_id, exclude=None)
        party = Party(party_id=f"party-{self._next_id}", name=name, legal_entity_id=legal_entity_id)
        self._next_id += 1
        self._parties[party.party_id] = party
        self._save()
        return party

    def update(self, party_id: str, name: str, legal_entity_id: str) -> Party:
        existing = self.get(party_id)
        if not name.strip():
            raise InvalidParty("party name must not be empty")
        if not legal_entity_id.strip():
            raise InvalidParty("legal entity id must not be empty")
        self._require_unique_lei(legal_entity_id, exclude=party_id)
        updated = Party(party_id=existing.party_id, name=name, legal_entity_id=legal_entity_id)
        self._parties[party_id] = updated
        self._save()
        return updated

    def delete(self, party_id: str) -> None:
        self.get(party_id)
        if self._in_use_check(party_id):
            raise PartyInUse(
                f"party {party_id!r} is referenced by at least one live trade",
                details={"partyId": party_id},
            )
        del self._parties[party_id]
        self._save()

    # -- queries ------------------------------------------------------------

    def get(self, party_id: str) -> Party:
        party = self._parties.get(party_id)
        if party is None:
            raise NotFound(f"no party with id {party_id!r}", details={"partyId": party_id})
        return party

    def maybe_get(self, party_id: str) -> Party | None:
        return self._parties.get(party_id)

    def list(self) -> list[Party]:
        return sorted(self._parties.values(), key=lambda p: int(p.party_id.split("-")[-1]))

    def contains(self, party_id: str) -> bool:
        return party_id in self._parties

    def missing(self, party_ids: Iterable[str]) -> list[str]:
        return [pid for pid in party_ids if pid not in self._parties]

    # -- persistence --------------------------------------------------------

    def _require_unique_lei(self, legal_entity_id: str, exclude: str | None) -> None:
        for party in self._parties.values():
            if party.legal_entity_id == legal_entity_id and party.party_id != exclude:
                raise DuplicateLei(
                    f"legal entity id {legal_entity_id!r} is already registered to {party.party_id!r}",
                    details={"legalEntityId": legal_entity_id, "partyId": party.party_id},
                )

    def _save(self) -> None:
        if self._path is None:
            return
        self._path.parent.mkdir(parents=True, exist_ok=True)
        document = {
            "nextId": self._next_id,
            "parties": [party_to_json(p) for p in self.list()],
        }
        self._path.write_text(canonical_dumps(document), encoding="utf-8")

    def _load(self) -> None:
        document = json.loads(self._path.read_text(encoding="utf-8"))
        self._next_id = document["nextId"]
        for obj in document["parties"]:
            party = party_from_json(obj)
            self._parties[party.party_id] = party
