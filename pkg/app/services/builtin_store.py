from __future__ import annotations

import logging
from typing import Dict, List, Optional, Protocol

from app.geometry.builtins import BuiltinEntry, builtin_catalog
from app.geometry.family import HypersurfaceFamily

logger = logging.getLogger(__name__)


class FamilyStoreProtocol(Protocol):
    def get(self, name: str) -> HypersurfaceFamily:
        ...

    def names(self) -> List[str]:
        ...

    def entries(self) -> List[BuiltinEntry]:
        ...


class BuiltinFamilyStore:
    """Named built-in families, built on first use."""

    def __init__(self) -> None:
        self._entries: Optional[Dict[str, BuiltinEntry]] = None

    def _catalog(self) -> Dict[str, BuiltinEntry]:
        if self._entries is None:
            self._entries = {entry.name: entry for entry in builtin_catalog()}
            logger.debug("builtin_store: loaded %d built-in families", len(self._entries))
        return self._entries

    def get(self, name: str) -> HypersurfaceFamily:
        try:
            return self._catalog()[name].family
        except KeyError as exc:
            raise ValueError(f"unknown built-in {name!r}; choose one of {', '.join(self.names())}") from exc

    def names(self) -> List[str]:
        return list(self._catalog())

    def entries(self) -> List[BuiltinEntry]:
        return list(self._catalog().values())


builtin_store: FamilyStoreProtocol = BuiltinFamilyStore()
