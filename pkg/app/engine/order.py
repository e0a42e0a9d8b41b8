"""The stratification preorder, stored as an ascending list of classes."""
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from app.exceptions import PresentationError, UsageError


@dataclass(frozen=True)
class StratOrder:
    """
    A total preorder on the vertex set.

    ``classes[0]`` holds the smallest vertices. Two vertices in the same class
    are equivalent; a vertex in an earlier class is strictly smaller.
    """

    classes: Tuple[Tuple[str, ...], ...]

    @classmethod
    def from_classes(cls, classes: Iterable[Iterable[str]], vertices: Sequence[str]) -> "StratOrder":
        """
        Build and validate an order against a vertex set.

        Raises:
            PresentationError: the classes do not partition the vertices
        """
        result = tuple(tuple(c) for c in classes)
        seen: List[str] = []
        for c in result:
            if not c:
                raise PresentationError("order contains an empty class")
            seen.extend(c)
        if len(seen) != len(set(seen)):
            raise PresentationError("order lists a vertex twice")
        if set(seen) != set(vertices):
            missing = sorted(set(vertices) - set(seen))
            extra = sorted(set(seen) - set(vertices))
            raise PresentationError(f"order is not a partition of the vertices (missing {missing}, unknown {extra})")
        return cls(result)

    @classmethod
    def full(cls, vertices: Sequence[str]) -> "StratOrder":
        """The full relation: every vertex equivalent to every other one."""
        if not vertices:
            return cls(())
        return cls((tuple(vertices),))

    @property
    def rank(self) -> Dict[str, int]:
        return {v: i for i, c in enumerate(self.classes) for v in c}

    def class_of(self, v: str) -> Tuple[str, ...]:
        return self.classes[self.rank[v]]

    def precedes(self, u: str, v: str) -> bool:
        """u ≺ v"""
        r = self.rank
        return r[u] < r[v]

    def preceq(self, u: str, v: str) -> bool:
        r = self.rank
        return r[u] <= r[v]

    def equivalent(self, u: str, v: str) -> bool:
        r = self.rank
        return r[u] == r[v]

    def above(self, v: str) -> List[str]:
        """Vertices strictly above v."""
        r = self.rank
        return [u for c in self.classes[r[v] + 1:] for u in c]

    def at_or_above(self, v: str) -> List[str]:
        r = self.rank
        return [u for c in self.classes[r[v]:] for u in c]

    def below(self, v: str) -> List[Tuple[str, ...]]:
        """Classes strictly below v, largest first."""
        return list(reversed(self.classes[:self.rank[v]]))

    def is_maximal(self, cls: Iterable[str]) -> bool:
        return bool(self.classes) and frozenset(cls) == frozenset(self.classes[-1])

    def opposite(self) -> "StratOrder":
        return StratOrder(tuple(reversed(self.classes)))

    def without(self, cls: Iterable[str]) -> "StratOrder":
        removed: FrozenSet[str] = frozenset(cls)
        return StratOrder(tuple(c for c in self.classes if frozenset(c) != removed))

    def renamed(self, mapping: Dict[str, str]) -> "StratOrder":
        return StratOrder(tuple(tuple(mapping[v] for v in c) for c in self.classes))

    def concat(self, other: "StratOrder") -> "StratOrder":
        return StratOrder(self.classes + other.classes)

    def to_text(self) -> str:
        return " < ".join(",".join(c) for c in self.classes)

    def check_maximal(self, cls: Iterable[str]) -> None:
        if not self.is_maximal(cls):
            raise UsageError(f"class {sorted(cls)} is not maximal in the order {self.to_text()}")
