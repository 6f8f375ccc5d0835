"""Resolution derivations over clause sets.

A ResolutionState is an append-only derivation graph: initial clauses come
from a CNF formula, every derived clause records its two parents and the
pivot variable, and the goal flag is set once the empty clause appears.
auto_refute is the machine prover used as a test oracle and for hints; it
saturates with subsumption pruning and returns a replayable derivation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AmbiguousPivot, CapExceeded, NotResolvable, UnknownClause
from .formulas import Formula
from .normalforms import clause_sort_key, clauses

Clause = "frozenset[tuple[str, bool]]"


def literal_text(lit) -> str:
    name, positive = lit
    return name if positive else f"!{name}"


def parse_literal(text: str):
    if text.startswith("!"):
        return (text[1:], False)
    return (text, True)


def clause_literals(clause) -> list[str]:
    return [literal_text(lit) for lit in sorted(clause, key=lambda l: (l[0], not l[1]))]


def complementary_pivots(c1, c2) -> tuple[str, ...]:
    """Variables occurring positively in one clause and negatively in the other."""
    out = set()
    for name, positive in c1:
        if (name, not positive) in c2:
            out.add(name)
    return tuple(sorted(out))


def resolve_clauses(c1, c2, pivot: str):
    """The resolvent of c1 and c2 on `pivot`."""
    if (pivot, True) in c1 and (pivot, False) in c2:
        pos, neg = c1, c2
    elif (pivot, False) in c1 and (pivot, True) in c2:
        pos, neg = c2, c1
    else:
        raise NotResolvable(f"no complementary pair on {pivot!r}")
    return (pos - {(pivot, True)}) | (neg - {(pivot, False)})


def is_tautology(clause) -> bool:
    return any((name, not positive) in clause for name, positive in clause)


@dataclass
class ClauseNode:
    id: int
    clause: object
    parents: tuple[int, int] | None = None  # None for initial clauses
    pivot: str | None = None


@dataclass
class DerivationRecord:
    """Serialized derivation step: stable across replay."""

    child: int
    parents: tuple[int, int]
    pivot: str
    literals: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "child": self.child,
            "parents": list(self.parents),
            "pivot": self.pivot,
            "literals": list(self.literals),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DerivationRecord":
        return cls(
            int(data["child"]),
            (int(data["parents"][0]), int(data["parents"][1])),
            data["pivot"],
            tuple(data["literals"]),
        )


class ResolutionState:
    """Session-owned derivation graph; mutations happen through resolve_step."""

    def __init__(self, initial):
        self.nodes: list[ClauseNode] = []
        self._ids: dict = {}
        for clause in sorted(initial, key=clause_sort_key):
            self._add(clause, None, None)

    def _add(self, clause, parents, pivot) -> ClauseNode:
        node = ClauseNode(len(self.nodes), clause, parents, pivot)
        self.nodes.append(node)
        self._ids[clause] = node.id
        return node

    def node(self, clause_id: int) -> ClauseNode:
        if not 0 <= clause_id < len(self.nodes):
            raise UnknownClause(clause_id)
        return self.nodes[clause_id]

    @property
    def goal_reached(self) -> bool:
        return frozenset() in self._ids

    def resolve_step(self, id1: int, id2: int, pivot: str | None = None):
        """Resolve two clauses; returns (node, created, tautology).

        The pivot may be omitted only when exactly one complementary pair
        exists. Re-deriving an existing clause succeeds and returns the
        existing node untouched.
        """
        if id1 == id2:
            raise NotResolvable("a clause cannot be resolved with itself")
        c1 = self.node(id1).clause
        c2 = self.node(id2).clause
        candidates = complementary_pivots(c1, c2)
        if pivot is None:
            if not candidates:
                raise NotResolvable("the clauses have no complementary pair")
            if len(candidates) > 1:
                raise AmbiguousPivot(candidates)
            pivot = candidates[0]
        elif pivot not in candidates:
            raise NotResolvable(f"no complementary pair on {pivot!r}")
        resolvent = resolve_clauses(c1, c2, pivot)
        existing = self._ids.get(resolvent)
        if existing is not None:
            return self.nodes[existing], False, is_tautology(resolvent)
        node = self._add(resolvent, (id1, id2), pivot)
        return node, True, is_tautology(resolvent)

    def derivation(self) -> list[DerivationRecord]:
        return [
            DerivationRecord(n.id, n.parents, n.pivot, tuple(clause_literals(n.clause)))
            for n in self.nodes
            if n.parents is not None
        ]

    def initial_clauses(self):
        return [n.clause for n in self.nodes if n.parents is None]


def init_resolution(f: Formula) -> ResolutionState:
    """Seed a derivation with the clauses of a CNF formula."""
    return ResolutionState(clauses(f))


def replay_derivation(state: ResolutionState, records) -> ResolutionState:
    """Re-apply serialized derivation records onto a state; record ids are
    remapped to the ids actually assigned."""
    id_map = {n.id: n.id for n in state.nodes}
    for record in records:
        p1, p2 = record.parents
        node, _, _ = state.resolve_step(id_map[p1], id_map[p2], record.pivot)
        id_map[record.child] = node.id
        if tuple(clause_literals(node.clause)) != record.literals:
            raise NotResolvable(
                f"replayed clause {clause_literals(node.clause)} does not match record {record.literals}"
            )
    return state


DEFAULT_NODE_CAP = 10_000


def auto_refute(clause_set, node_cap: int = DEFAULT_NODE_CAP):
    """Saturate by resolution; returns derivation records reaching the empty
    clause, or None at a satisfiable fixpoint.

    New clauses subsumed by a kept clause are dropped, kept clauses
    subsumed by a new one are deleted from the working set (their
    derivation info is retained for reconstruction), and tautological
    resolvents are dropped outright. Raises CapExceeded when more than
    node_cap clauses would be kept.
    """
    initial = sorted(clause_set, key=clause_sort_key)
    parents: dict = {}
    active: list = []
    for clause in initial:
        if clause not in parents:
            parents[clause] = None
            active.append(clause)
    if frozenset() in parents:
        return []

    active_set = set(active)
    rejected: set = set()  # subsumed or tautological resolvents, never retried
    kept = len(active)
    frontier = list(active)
    while frontier:
        new_clauses = []
        for given in frontier:
            if given not in active_set:
                continue  # deleted by a subsuming clause
            for other in list(active):
                if other is given or other not in active_set or given not in active_set:
                    continue
                for pivot in complementary_pivots(given, other):
                    resolvent = resolve_clauses(given, other, pivot)
                    if resolvent in parents or resolvent in rejected:
                        continue
                    if is_tautology(resolvent) or any(old <= resolvent for old in active):
                        rejected.add(resolvent)
                        continue
                    parents[resolvent] = (given, other, pivot)
                    if not resolvent:
                        return _reconstruct(initial, parents)
                    deleted = [old for old in active if resolvent <= old]
                    if deleted:
                        active = [old for old in active if not resolvent <= old]
                        active_set.difference_update(deleted)
                    active.append(resolvent)
                    active_set.add(resolvent)
                    new_clauses.append(resolvent)
                    kept += 1
                    if kept > node_cap:
                        raise CapExceeded(f"resolution saturation exceeded {node_cap} clauses")
        frontier = new_clauses
    return None


def _reconstruct(initial, parents):
    """Minimal replayable derivation for the empty clause."""
    needed: list = []
    seen = set()

    def visit(clause):
        if clause in seen:
            return
        seen.add(clause)
        info = parents.get(clause)
        if info is None:
            return
        c1, c2, pivot = info
        visit(c1)
        visit(c2)
        needed.append((clause, c1, c2, pivot))

    visit(frozenset())

    ids = {}
    for idx, clause in enumerate(sorted(initial, key=clause_sort_key)):
        ids.setdefault(clause, idx)
    next_id = len(ids)
    records = []
    for clause, c1, c2, pivot in needed:
        ids[clause] = next_id
        records.append(
            DerivationRecord(next_id, (ids[c1], ids[c2]), pivot, tuple(clause_literals(clause)))
        )
        next_id += 1
    return records
