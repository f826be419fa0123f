"""
Symbol interning: source names (and invented names) to positive integers.
"""
from __future__ import annotations

from dataclasses import dataclass, field

PRED = "pred"
FUNC = "func"


@dataclass
class SymTable:
    """Bidirectional map between (kind, name, arity) and integer symbols"""
    _ids: dict[tuple[str, str, int], int] = field(default_factory=dict)
    _entries: list[tuple[str, str, int]] = field(default_factory=lambda: [("", "", 0)])

    def intern(self, kind: str, name: str, arity: int) -> int:
        key = (kind, str(name), arity)
        if (sym := self._ids.get(key)) is None:
            sym = len(self._entries)
            self._ids[key] = sym
            self._entries.append(key)
        return sym

    def pred(self, name: str, arity: int) -> int:
        return self.intern(PRED, name, arity)

    def func(self, name: str, arity: int) -> int:
        return self.intern(FUNC, name, arity)

    def lookup(self, kind: str, name: str, arity: int) -> int | None:
        return self._ids.get((kind, str(name), arity))

    def name(self, sym: int) -> str:
        return self._entries[abs(sym)][1]

    def arity(self, sym: int) -> int:
        return self._entries[abs(sym)][2]

    def kind(self, sym: int) -> str:
        return self._entries[abs(sym)][0]

    def symbols(self, kind: str | None = None) -> list[int]:
        """All symbols in interning order"""
        return [
            sym for sym, entry in enumerate(self._entries)
            if sym and (kind is None or entry[0] == kind)
        ]

    def __len__(self) -> int:
        return len(self._entries) - 1
