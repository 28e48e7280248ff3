from __future__ import annotations

from typing import Callable, Dict, Generic, List, TypeVar

T = TypeVar("T")


class Registry(Generic[T]):
    """Central registry for named, immutable model definitions."""

    def __init__(self, kind: str) -> None:
        self.kind = kind
        self._entries: Dict[str, T] = {}

    def register(self, name: str, entry: T) -> T:
        """Register a new entry under ``name``."""
        if name in self._entries:
            raise ValueError(f"{self.kind.capitalize()} '{name}' already registered.")
        self._entries[name] = entry
        return entry

    def register_from_factory(self, factory: Callable[[], T], name_attr: str = "name") -> T:
        """Decorator/helper to register via a factory callable."""
        entry = factory()
        return self.register(getattr(entry, name_attr), entry)

    def get(self, name: str) -> T:
        try:
            return self._entries[name]
        except KeyError as exc:
            raise KeyError(f"Unknown {self.kind} '{name}'.") from exc

    def names(self) -> List[str]:
        return sorted(self._entries)

    def __contains__(self, name: object) -> bool:
        return name in self._entries


__all__ = ["Registry"]
