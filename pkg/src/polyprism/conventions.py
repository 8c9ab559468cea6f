"""Sign conventions for the boundary and the infinitesimal-side maps.

The printed definitions of the infinitesimal maps are not mutually
consistent: the two displayed forms of the weight-2 infinitesimal boundary
differ term-wise from each other and from the composite around the
corresponding square, and the weight-3 boundary is displayed once with a
(1-a) second slot and once with a dlog(a) second slot.  Rather than guessing,
every ambiguous sign is a parameter of a :class:`ConventionTable`, and the
verifier's sign audit searches the whole finite space for the assignments
under which all structurally-checkable faces commute.  The shipped default
below is the unique assignment found by that audit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from itertools import product
from typing import Iterator


@dataclass(frozen=True, slots=True)
class ConventionTable:
    """One point of the sign space.

    boundary_index_base   b: the omission differential carries (-1)**(i + b).
    partial2              (p1, p2): the infinitesimal weight-2 boundary is
                          [[a]] -> p1 * dlog(1-a) (x) a  +  p2 * dlog(a) (x) (1-a).
    tau2_0_sign           global sign of the 3-point infinitesimal map.
    partial32             (q1, q2, q3): the middle infinitesimal weight-3
                          boundary is [[a]](x)b -> q1 * dlog(1-a) (x) a^b
                          + q2 * dlog(a) (x) (1-a)^b, and x(x)[y] ->
                          q3 * x (x) (1-y)^y.
    tau3_0_sign           global sign of the 4-point infinitesimal map.
    tau3_1_sign           global sign of the 5-point infinitesimal map.
    partial3_second_term  second summand of [[a]]_3's boundary: "dlog_a" for
                          dlog(a) (x) [a]_2, "one_minus_a" for (1-a) (x) [a]_2.
    """

    boundary_index_base: int = 0
    partial2: tuple[int, int] = (1, -1)
    tau2_0_sign: int = -1
    partial32: tuple[int, int, int] = (1, -1, 1)
    tau3_0_sign: int = 1
    tau3_1_sign: int = 1
    partial3_second_term: str = "dlog_a"

    def to_dict(self) -> dict:
        return {
            "boundary_index_base": self.boundary_index_base,
            "partial2": list(self.partial2),
            "tau2_0_sign": self.tau2_0_sign,
            "partial32": list(self.partial32),
            "tau3_0_sign": self.tau3_0_sign,
            "tau3_1_sign": self.tau3_1_sign,
            "partial3_second_term": self.partial3_second_term,
        }

    @staticmethod
    def from_dict(d: dict) -> "ConventionTable":
        return ConventionTable(
            boundary_index_base=int(d.get("boundary_index_base", 0)),
            partial2=tuple(d.get("partial2", (1, -1))),
            tau2_0_sign=int(d.get("tau2_0_sign", -1)),
            partial32=tuple(d.get("partial32", (1, -1, 1))),
            tau3_0_sign=int(d.get("tau3_0_sign", 1)),
            tau3_1_sign=int(d.get("tau3_1_sign", 1)),
            partial3_second_term=d.get("partial3_second_term", "dlog_a"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @staticmethod
    def from_json(text: str) -> "ConventionTable":
        return ConventionTable.from_dict(json.loads(text))

    def but(self, **kw) -> "ConventionTable":
        return replace(self, **kw)


#: The audited default: the unique table under which every structurally
#: checkable face of both prisms commutes.
SHIPPED = ConventionTable()

#: Literal transcription of the printed definitions (1-based omission signs,
#: the displayed weight-2 boundary, the displayed 3-point map, the displayed
#: one_minus second slot).  Several faces provably fail under it.
LITERAL_PAPER = ConventionTable(
    boundary_index_base=1,
    partial2=(-1, 1),
    tau2_0_sign=1,
    partial32=(1, -1, 1),
    tau3_0_sign=1,
    tau3_1_sign=1,
    partial3_second_term="one_minus_a",
)

SIGNS = (1, -1)


def sign_space() -> Iterator[ConventionTable]:
    """All 2048 points of the convention space, in a fixed deterministic order."""
    for base, p, u20, q, u30, u31, sec in product(
        (0, 1),
        product(SIGNS, SIGNS),
        SIGNS,
        product(SIGNS, SIGNS, SIGNS),
        SIGNS,
        SIGNS,
        ("dlog_a", "one_minus_a"),
    ):
        yield ConventionTable(
            boundary_index_base=base,
            partial2=p,
            tau2_0_sign=u20,
            partial32=q,
            tau3_0_sign=u30,
            tau3_1_sign=u31,
            partial3_second_term=sec,
        )
