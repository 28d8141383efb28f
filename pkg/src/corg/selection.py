"""Problem-relevant axiom selection.

Three shrinking devices, usable together or alone:

* occurrence-based triggering from goal symbols, iterated to a bounded
  depth (an axiom is triggered by its least statistically general symbols,
  within a tolerance);
* the same, with the goal seed widened to every indexed symbol whose
  embedding is close to a goal symbol;
* a pre-translation triple filter keeping only triples whose object is
  similar to the problem's words.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .embeddings import EmbeddingTable, OovPolicy
from .errors import EmptyGoal
from .fol import Formula, symbols
from .kg import Triple


@dataclass
class SineConfig:
    """Knobs for occurrence-based selection.

    ``tolerance`` >= 1 widens triggering beyond the strictly least general
    symbol of an axiom.  ``max_depth=None`` iterates to the fixpoint.
    Symbols occurring in at most ``generality_threshold`` axioms trigger
    every axiom they appear in (0 disables this).  ``similarity_threshold``
    switches on embedding-widened goal seeding when set.
    """

    tolerance: float = 1.5
    max_depth: int | None = 3
    generality_threshold: int = 0
    similarity_threshold: float | None = None

    def __post_init__(self):
        if self.tolerance < 1:
            raise ValueError("tolerance must be >= 1")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be positive or None")


@dataclass
class AxiomIndex:
    """Occurrence counts and symbol-to-axiom buckets over one axiom set."""

    occ: dict[str, int] = field(default_factory=dict)
    by_symbol: dict[str, list[str]] = field(default_factory=dict)
    axiom_symbols: dict[str, frozenset[str]] = field(default_factory=dict)
    min_occ: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.axiom_symbols)


def build_index(axioms: Mapping[str, Formula]) -> AxiomIndex:
    """Index a set of named closed axioms; each axiom counts once per symbol."""
    idx = AxiomIndex()
    for aid, f in axioms.items():
        syms = symbols(f)
        idx.axiom_symbols[aid] = syms
        for s in syms:
            idx.occ[s] = idx.occ.get(s, 0) + 1
            idx.by_symbol.setdefault(s, []).append(aid)
    for aid, syms in idx.axiom_symbols.items():
        idx.min_occ[aid] = min((idx.occ[s] for s in syms), default=0)
    return idx


def _triggers(idx: AxiomIndex, sym: str, aid: str, cfg: SineConfig) -> bool:
    occ = idx.occ[sym]
    if 0 < cfg.generality_threshold and occ <= cfg.generality_threshold:
        return True
    return occ <= cfg.tolerance * idx.min_occ[aid]


def _closure(idx: AxiomIndex, seed: Iterable[str], cfg: SineConfig) -> set[str]:
    reached = set(seed)
    frontier = set(reached)
    selected: set[str] = set()
    depth = 0
    while frontier and (cfg.max_depth is None or depth < cfg.max_depth):
        newly: set[str] = set()
        for s in frontier:
            for aid in idx.by_symbol.get(s, ()):
                if aid in selected:
                    continue
                if _triggers(idx, s, aid, cfg):
                    selected.add(aid)
                    newly |= idx.axiom_symbols[aid]
        frontier = newly - reached
        reached |= newly
        depth += 1
    return selected


def sine_select(idx: AxiomIndex, goal_symbols: Iterable[str],
                cfg: SineConfig | None = None) -> set[str]:
    """Axiom ids reachable from the goal symbols under tolerance triggering.

    A symbol s triggers axiom A iff s occurs in A and
    occ(s) <= tolerance * min occ over A's symbols (or s is rarer than the
    generality threshold).  Symbols of selected axioms become reached;
    iteration stops at max_depth or at the fixpoint.
    """
    goals = set(goal_symbols)
    if not goals:
        raise EmptyGoal("selection needs at least one goal symbol")
    return _closure(idx, goals, cfg or SineConfig())


def similarity_sine_select(idx: AxiomIndex, goal_symbols: Iterable[str],
                           cfg: SineConfig, table: EmbeddingTable,
                           policy: OovPolicy | None = None) -> set[str]:
    """sine_select with the seed widened by embedding similarity.

    Every indexed symbol whose cosine to some goal symbol reaches
    ``cfg.similarity_threshold`` joins the seed before triggering starts.
    """
    goals = set(goal_symbols)
    if not goals:
        raise EmptyGoal("selection needs at least one goal symbol")
    seed = set(goals)
    if cfg.similarity_threshold is not None and idx.occ:
        policy = policy or OovPolicy()
        goal_mat = _unit_rows(np.stack([table.vector(g, policy) for g in sorted(goals)]))
        candidates = list(idx.occ)
        cand_mat = _unit_rows(np.stack([table.vector(s, policy) for s in candidates]))
        best = (cand_mat @ goal_mat.T).max(axis=1)
        for sym, sim in zip(candidates, best):
            if sim >= cfg.similarity_threshold:
                seed.add(sym)
    return _closure(idx, seed, cfg)


def _unit_rows(mat: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(mat, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return mat / norms


class Prefilter:
    """Reusable triple filter: keep triples whose object is near problem words.

    Building the object-vector matrix is the expensive part, so one
    Prefilter is meant to be built per loaded graph and applied once per
    problem.  ``include_subject=True`` widens the test to either endpoint.
    """

    def __init__(self, triples: Sequence[Triple], table: EmbeddingTable,
                 policy: OovPolicy | None = None, include_subject: bool = False):
        self.triples = list(triples)
        self.table = table
        self.policy = policy or OovPolicy()
        self.include_subject = include_subject
        tokens: list[str] = []
        seen: dict[str, int] = {}
        per_triple: list[tuple[int, ...]] = []
        for t in self.triples:
            ends = (t.object, t.subject) if include_subject else (t.object,)
            row = []
            for tok in ends:
                if tok not in seen:
                    seen[tok] = len(tokens)
                    tokens.append(tok)
                row.append(seen[tok])
            per_triple.append(tuple(row))
        self._token_rows = per_triple
        if tokens:
            mat = np.stack([table.vector(tok, self.policy) for tok in tokens])
            self._token_mat = _unit_rows(mat)
        else:
            self._token_mat = np.zeros((0, table.dimension))

    def apply_indices(self, problem_words: Sequence[str], theta: float) -> list[int]:
        """Indices (into the triple list) of triples that pass at threshold theta."""
        if not problem_words:
            raise EmptyGoal("prefilter needs at least one problem word")
        words = np.stack([self.table.vector(w, self.policy) for w in problem_words])
        sims = self._token_mat @ _unit_rows(words).T
        best = sims.max(axis=1) if sims.size else np.zeros(len(self._token_mat))
        return [i for i, row in enumerate(self._token_rows)
                if any(best[j] >= theta for j in row)]

    def apply(self, problem_words: Sequence[str], theta: float) -> list[Triple]:
        return [self.triples[i] for i in self.apply_indices(problem_words, theta)]


def triple_prefilter(triples: Sequence[Triple], problem_words: Sequence[str],
                     theta: float, table: EmbeddingTable,
                     policy: OovPolicy | None = None,
                     include_subject: bool = False) -> list[Triple]:
    """Keep triples whose object (optionally: either endpoint) has cosine
    similarity >= theta to some problem word, preserving input order."""
    return Prefilter(triples, table, policy, include_subject).apply(problem_words, theta)
