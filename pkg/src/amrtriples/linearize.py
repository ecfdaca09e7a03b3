"""One switchboard over both encodings.

A :class:`LinearizationConfig` names one of the six model variants, e.g.
``Triple_O_var_X_invrole`` or ``Penman_X_var_O_invrole``, and knows how to
encode and decode with it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .graph import AmrGraph
from .penman import PenmanConfig, parse_penman, render_penman
from .triples import TripleConfig, decode_triples, render_triples

__all__ = ["LinearizationConfig", "VARIANTS", "FORMATS"]

FORMATS = ("penman", "triple")

_NAME = re.compile(r"^(penman|triple)_([ox])_var_([ox])_invrole$", re.IGNORECASE)


@dataclass(frozen=True)
class LinearizationConfig:
    format: str = "triple"
    keep_variables: bool = True
    keep_inverse_roles: bool = True

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}; expected penman or triple")
        if self.format == "penman" and not self.keep_inverse_roles:
            raise ValueError("Penman output always keeps inverse roles")

    @classmethod
    def from_name(cls, name: str) -> "LinearizationConfig":
        m = _NAME.match(name)
        if not m:
            raise ValueError(f"unrecognized variant name {name!r}")
        fmt, var, inv = m.groups()
        return cls(fmt.lower(), var.lower() == "o", inv.lower() == "o")

    @property
    def name(self) -> str:
        v = "O" if self.keep_variables else "X"
        r = "O" if self.keep_inverse_roles else "X"
        return f"{self.format.capitalize()}_{v}_var_{r}_invrole"

    @property
    def task(self) -> str:
        return self.format

    def render(self, graph: AmrGraph):
        """``(tokens, anchors)`` with one ``(edge, source_pos, target_pos)``
        anchor per graph edge."""
        if self.format == "penman":
            rendered = render_penman(graph, PenmanConfig(self.keep_variables))
            return rendered.tokens, [(b.edge, s, t) for b, s, t in rendered.anchors]
        return render_triples(graph, TripleConfig(self.keep_variables, self.keep_inverse_roles))

    def encode(self, graph: AmrGraph) -> str:
        return " ".join(self.render(graph)[0])

    def decode(self, text: str) -> AmrGraph:
        if self.format == "penman":
            return parse_penman(text, keep_variables=self.keep_variables)
        return decode_triples(text, TripleConfig(self.keep_variables, self.keep_inverse_roles))


VARIANTS = {
    c.name: c
    for c in (
        LinearizationConfig("triple", False, False),
        LinearizationConfig("triple", False, True),
        LinearizationConfig("triple", True, True),
        LinearizationConfig("triple", True, False),
        LinearizationConfig("penman", True, True),
        LinearizationConfig("penman", False, True),
    )
}
