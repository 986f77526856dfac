from dataclasses import dataclass, field
from typing import Iterator, Tuple

from .group_element import GroupElement


@dataclass(frozen=True)
class CosetList:
    """Truncated list of coset representatives for Gamma_0 \\ Gamma.

    For the parabolic stabilizer the reps are double-coset reps, one per row
    (c, d mod c); the series engine sums each family of right translates g T^n in closed form.
    """

    reps: Tuple[GroupElement, ...]
    stabilizer_tag: str
    bound: int
    group_tag: str
    base_point: complex = field(default=1j, compare=False)

    def __len__(self) -> int:
        return len(self.reps)

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.reps)

    def keys(self) -> set:
        return {g.key() for g in self.reps}

    def __repr__(self):
        return (f"<CosetList(stabilizer={self.stabilizer_tag}, group={self.group_tag}, "
                f"bound={self.bound}, reps={len(self.reps)})>")
