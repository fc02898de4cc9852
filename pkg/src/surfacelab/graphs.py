"""Folded directed edge-labeled graphs.

Vertices are 0..v-1.  An edge is (source, target, label) with label a
positive generator index (a_i = 2i-1, b_i = 2i).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .words import Word, letter_name


@dataclass(frozen=True)
class LabeledGraph:
    v: int
    edges: tuple[tuple[int, int, int], ...]
    genus: int = 2

    def __post_init__(self):
        for s, t, f in self.edges:
            if not (0 <= s < self.v and 0 <= t < self.v):
                raise ValueError(f"edge {(s, t, f)} out of range")
            if not 1 <= f <= 2 * self.genus:
                raise ValueError(f"label {f} out of range for genus {self.genus}")

    @property
    def e(self) -> int:
        return len(self.edges)

    def e_f(self) -> tuple[int, ...]:
        """Edge count per label, indexed by label - 1."""
        out = [0] * (2 * self.genus)
        for _, _, f in self.edges:
            out[f - 1] += 1
        return tuple(out)

    def labels(self) -> set[int]:
        return {f for _, _, f in self.edges}

    def is_folded(self) -> bool:
        outs, ins = set(), set()
        for s, t, f in self.edges:
            if (s, f) in outs or (t, f) in ins:
                return False
            outs.add((s, f))
            ins.add((t, f))
        return True

    def out_map(self) -> dict[tuple[int, int], int]:
        """(vertex, signed letter) -> neighbour, following edges both ways."""
        m = {}
        for s, t, f in self.edges:
            m[(s, f)] = t
            m[(t, -f)] = s
        return m

    def to_json(self) -> str:
        adj = {str(i): [] for i in range(self.v)}
        for s, t, f in sorted(self.edges):
            adj[str(s)].append([t, letter_name(f)])
        return json.dumps({"genus": self.genus, "v": self.v, "adjacency": adj}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "LabeledGraph":
        from .words import parse_word
        d = json.loads(text)
        edges = []
        for s, outs in d["adjacency"].items():
            for t, name in outs:
                edges.append((int(s), int(t), parse_word(name, d["genus"]).letters[0]))
        return cls(d["v"], tuple(sorted(edges)), d["genus"])


def point_graph(genus: int = 2) -> LabeledGraph:
    return LabeledGraph(1, (), genus)


def path_graph(word: Word) -> LabeledGraph:
    """A path 0 -> 1 -> ... -> |w| spelling the word (not closed)."""
    edges = []
    for i, x in enumerate(word.letters):
        edges.append((i, i + 1, x) if x > 0 else (i + 1, i, -x))
    return LabeledGraph(len(word) + 1, tuple(edges), word.genus)
