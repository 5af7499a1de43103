"""
Weighted Inverse X-Digraph Module
Pseudo-conjugacy graph substrate: Loop(u), vertex identification, weight
shift, folding with gcd modulus updates and R-completion.

Folding runs on a union-find whose links carry shift values: the total
shift of a vertex is the sum of the link shifts up to its class root, so a
merge that needs to shift a whole class only writes one link. Every directed
edge is a record (origin, k, terminus) over raw vertex ids whose current
weight is k + shift(origin) - shift(terminus).
"""
import logging
from collections import deque
from math import gcd
from pathlib import Path
from typing import Deque, Dict, FrozenSet, Iterable, List, Optional, Tuple
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))
from config.settings import WEIGHT_LIMIT
from model.errors import DegeneratePresentation, WeightOverflowError
from model.words import LETTERS, Word, cyclic_core

logger = logging.getLogger(__name__)

# Modulus sentinel for N = infinity
INFINITE = 0

EdgeRecord = Tuple[int, int, int]          # (origin, k, terminus)
PendingRecord = Tuple[int, int, int, int]  # (origin, label, k, terminus)
Edge = Tuple[int, int, int, int]           # (origin, label, weight, terminus)


def _check_weight(value: int) -> int:
    if not -WEIGHT_LIMIT <= value < WEIGHT_LIMIT:
        raise WeightOverflowError(f"edge weight {value} outside the signed 64-bit range")
    return value


def modulus_text(modulus: int) -> str:
    return "inf" if modulus == INFINITE else str(modulus)


class WeightedDigraph:
    """
    Weighted inverse X-digraph with modulus N (0 encodes infinity)

    Each class root owns four label slots; edges that collide with an
    occupied slot wait in a FIFO pending queue until fold() resolves them.
    """

    def __init__(self, modulus: int = INFINITE):
        self.modulus = modulus
        self.root = 0
        self.parent: List[int] = []
        self.delta: List[int] = []
        self.rank: List[int] = []
        self.slots: List[Optional[List[Optional[EdgeRecord]]]] = []
        self.pending: Deque[PendingRecord] = deque()

    # -- union-find with shifts ---------------------------------------------

    def add_vertex(self) -> int:
        vertex = len(self.parent)
        self.parent.append(vertex)
        self.delta.append(0)
        self.rank.append(0)
        self.slots.append([None, None, None, None])
        return vertex

    def find(self, vertex: int) -> Tuple[int, int]:
        """
        Class root of a vertex and its total shift

        Path compression rewrites each link shift to the total shift so the
        value reported for every vertex on the path is preserved.
        """
        parent = self.parent
        path = []
        while parent[vertex] != vertex:
            path.append(vertex)
            vertex = parent[vertex]
        root = vertex
        if not path:
            return root, 0
        total = 0
        for node in reversed(path):
            total = self._reduce(total + self.delta[node])
            self.delta[node] = total
            parent[node] = root
        return root, total

    def total_shift(self, vertex: int) -> int:
        return self.find(vertex)[1]

    def _reduce(self, value: int) -> int:
        if self.modulus != INFINITE:
            return value % self.modulus
        return _check_weight(value)

    def _link(self, child: int, root: int, shift: int) -> None:
        """Hang class `child` under class `root`, shifting every vertex of it by `shift`"""
        self.parent[child] = root
        self.delta[child] = self._reduce(shift)
        if self.rank[child] >= self.rank[root]:
            self.rank[root] = self.rank[child] + 1
        moved = self.slots[child]
        self.slots[child] = None
        for label, record in enumerate(moved):
            if record is None:
                continue
            if self.slots[root][label] is None:
                self.slots[root][label] = record
            else:
                self.pending.append((record[0], label, record[1], record[2]))

    # -- edges ----------------------------------------------------------------

    def _record_weight(self, origin: int, k: int, terminus: int) -> int:
        return self._reduce(k + self.total_shift(origin) - self.total_shift(terminus))

    def _install(self, origin: int, label: int, k: int, terminus: int) -> None:
        root = self.find(origin)[0]
        if self.slots[root][label] is None:
            self.slots[root][label] = (origin, k, terminus)
        else:
            self.pending.append((origin, label, k, terminus))

    def add_edge(self, origin: int, label: int, weight: int, terminus: int) -> None:
        """Add origin -(label, weight)-> terminus together with its inverse edge"""
        k = self._reduce(weight - self.total_shift(origin) + self.total_shift(terminus))
        self._install(origin, label, k, terminus)
        self._install(terminus, label ^ 1, self._reduce(-k), origin)

    def is_folded(self) -> bool:
        return not self.pending

    def vertices(self) -> List[int]:
        """Class roots in id order"""
        return [v for v in range(len(self.parent)) if self.parent[v] == v]

    def vertex_count(self) -> int:
        return sum(1 for v in range(len(self.parent)) if self.parent[v] == v)

    def out_edge(self, vertex: int, label: int) -> Optional[Tuple[int, int]]:
        """(weight, terminus) of the slotted edge leaving a vertex, or None"""
        root = self.find(vertex)[0]
        record = self.slots[root][label]
        if record is None:
            return None
        origin, k, terminus = record
        return self._record_weight(origin, k, terminus), self.find(terminus)[0]

    def edges(self) -> List[Edge]:
        """All directed edges (slotted and pending) with resolved endpoints"""
        result = []
        for v in self.vertices():
            for label, record in enumerate(self.slots[v]):
                if record is not None:
                    origin, k, terminus = record
                    result.append((v, label, self._record_weight(origin, k, terminus),
                                   self.find(terminus)[0]))
        for origin, label, k, terminus in self.pending:
            result.append((self.find(origin)[0], label,
                           self._record_weight(origin, k, terminus), self.find(terminus)[0]))
        return result

    def adjacency(self) -> Dict[int, List[Tuple[int, int, int]]]:
        """vertex -> [(label, weight, terminus)] over the slotted edges"""
        adjacency: Dict[int, List[Tuple[int, int, int]]] = {}
        for v in self.vertices():
            out = []
            for label, record in enumerate(self.slots[v]):
                if record is not None:
                    origin, k, terminus = record
                    out.append((label, self._record_weight(origin, k, terminus),
                                self.find(terminus)[0]))
            adjacency[v] = out
        return adjacency

    def copy(self) -> "WeightedDigraph":
        clone = WeightedDigraph(self.modulus)
        clone.root = self.root
        clone.parent = list(self.parent)
        clone.delta = list(self.delta)
        clone.rank = list(self.rank)
        clone.slots = [list(s) if s is not None else None for s in self.slots]
        clone.pending = deque(self.pending)
        return clone

    # -- graph operations -----------------------------------------------------

    def shift(self, vertex: int, amount: int) -> None:
        """
        Add `amount` to the weight of every edge leaving the vertex and
        subtract it from every edge entering it; loops are unchanged.
        """
        if amount == 0:
            return
        target = self.find(vertex)[0]

        def adjust(origin: int, k: int, terminus: int) -> int:
            source_hit = self.find(origin)[0] == target
            terminus_hit = self.find(terminus)[0] == target
            if source_hit and not terminus_hit:
                return self._reduce(k + amount)
            if terminus_hit and not source_hit:
                return self._reduce(k - amount)
            return k

        for v in self.vertices():
            slots = self.slots[v]
            for label, record in enumerate(slots):
                if record is not None:
                    origin, k, terminus = record
                    slots[label] = (origin, adjust(origin, k, terminus), terminus)
        self.pending = deque(
            (origin, label, adjust(origin, k, terminus), terminus)
            for origin, label, k, terminus in self.pending
        )

    def identify(self, first: int, second: int) -> None:
        """Merge two vertices without shifting; colliding edges become pending"""
        a, _ = self.find(first)
        b, _ = self.find(second)
        if a == b:
            return
        if self.rank[a] < self.rank[b]:
            a, b = b, a
        # both vertices keep their current total shift
        self._link(b, a, 0)

    def _update_modulus(self, difference: int) -> None:
        new_modulus = gcd(self.modulus, difference)
        if new_modulus == self.modulus:
            return
        logger.debug(f"modulus {modulus_text(self.modulus)} -> {new_modulus}")
        self.modulus = new_modulus
        self.delta = [d % new_modulus for d in self.delta]

    def fold(self) -> "WeightedDigraph":
        """Resolve every pending edge; returns self for chaining"""
        pending = self.pending
        while pending:
            origin, label, k2, terminus2 = pending.popleft()
            u, shift_origin2 = self.find(origin)
            current = self.slots[u][label]
            if current is None:
                self.slots[u][label] = (origin, k2, terminus2)
                continue
            origin1, k1, terminus1 = current
            shift_origin1 = self.find(origin1)[1]
            r1, shift_t1 = self.find(terminus1)
            r2, shift_t2 = self.find(terminus2)
            a = self._reduce(k1 + shift_origin1 - shift_t1)
            b = self._reduce(k2 + shift_origin2 - shift_t2)
            if r1 == r2:
                if a != b:
                    self._update_modulus(b - a)
                continue
            # the shifted class must not contain the common origin
            if r2 != u and (r1 == u or self.rank[r1] >= self.rank[r2]):
                self._link(r2, r1, b - a)
            else:
                self._link(r1, r2, a - b)
        return self

    def circuit(self, vertex: int, word: Word) -> Optional[Tuple[int, int]]:
        """Follow a label path from a vertex: (end vertex, weight) or None"""
        current = self.find(vertex)[0]
        weight = 0
        for letter in word:
            step = self.out_edge(current, letter)
            if step is None:
                return None
            weight = self._reduce(weight + step[0])
            current = step[1]
        return current, weight

    def weight_key(self, weight: int) -> int:
        return weight % self.modulus if self.modulus != INFINITE else weight


# =============================================================================
# Construction
# =============================================================================

def loop_graph(word: Word) -> WeightedDigraph:
    """
    Loop(u): a cycle reading u from the root, weight 1 on the first edge

    Raises:
        DegeneratePresentation: if u is empty
    """
    if not word:
        raise DegeneratePresentation("Loop(u) needs a nonempty word")
    graph = WeightedDigraph()
    vertices = [graph.add_vertex() for _ in range(len(word))]
    for index, letter in enumerate(word):
        graph.add_edge(vertices[index], letter, 1 if index == 0 else 0,
                       vertices[(index + 1) % len(vertices)])
    graph.root = vertices[0]
    return graph


def from_edges(edges: Iterable[Tuple[int, object, int, int]], modulus: int = INFINITE,
               root: int = 0) -> WeightedDigraph:
    """
    Build an unfolded graph from (origin, label, weight, terminus) tuples

    Labels may be codes or letters; inverse edges are added automatically.
    """
    edges = list(edges)
    graph = WeightedDigraph(modulus)
    highest = max([root] + [max(e[0], e[3]) for e in edges])
    for _ in range(highest + 1):
        graph.add_vertex()
    for origin, label, weight, terminus in edges:
        code = LETTERS.index(label) if isinstance(label, str) else label
        graph.add_edge(origin, code, weight, terminus)
    graph.root = root
    return graph


def subgroup_graph(words: Iterable[Word]) -> WeightedDigraph:
    """
    Unfolded flower of weight-0 petals reading each word from the root

    Folded, it is the Stallings graph of the subgroup the words generate.
    """
    graph = WeightedDigraph()
    graph.root = graph.add_vertex()
    for word in words:
        current = graph.root
        for index, letter in enumerate(word):
            terminus = graph.root if index == len(word) - 1 else graph.add_vertex()
            graph.add_edge(current, letter, 0, terminus)
            current = terminus
    return graph


def generates_free_group(words: Iterable[Word]) -> bool:
    """True when the words generate all of F(x, y)"""
    graph = subgroup_graph(words).fold()
    root = graph.find(graph.root)[0]
    return (graph.vertex_count() == 1
            and all(graph.out_edge(root, label) is not None for label in range(4)))


def fold(graph: WeightedDigraph) -> WeightedDigraph:
    """Folded copy of a graph"""
    return graph.copy().fold()


def shift(graph: WeightedDigraph, vertex: int, amount: int) -> WeightedDigraph:
    result = graph.copy()
    result.shift(vertex, amount)
    return result


def identify(graph: WeightedDigraph, first: int, second: int) -> WeightedDigraph:
    result = graph.copy()
    result.identify(first, second)
    return result


# =============================================================================
# R-completion
# =============================================================================

def symmetrize(relator: Word) -> FrozenSet[Word]:
    """All cyclic permutations of the cyclic reduction of r and of r^-1"""
    core = cyclic_core(relator)
    if not core:
        raise DegeneratePresentation(f"relator {relator} is trivial")
    return frozenset(core.rotations() + core.inverse().rotations())


def _attach_relator(graph: WeightedDigraph, vertex: int, relator: Word) -> int:
    """
    Attach a weight-0 circuit labeled `relator` at a vertex

    Existing edges are traced forward and backward from the vertex; only the
    untraced middle is added as a fresh path carrying the compensating
    weight on its first edge. Returns the number of edges added.
    """
    letters = relator.letters
    n = len(letters)
    start = graph.find(vertex)[0]

    forward_end, forward_weight, i = start, 0, 0
    while i < n - 1:
        step = graph.out_edge(forward_end, letters[i])
        if step is None:
            break
        forward_weight += step[0]
        forward_end = step[1]
        i += 1

    backward_end, backward_weight, j = start, 0, 0
    while j < n - i - 1:
        step = graph.out_edge(backward_end, letters[n - 1 - j] ^ 1)
        if step is None:
            break
        # traced against the edge direction, so its weight is subtracted back
        backward_weight -= step[0]
        backward_end = step[1]
        j += 1

    gap = letters[i:n - j]
    current = forward_end
    for index, letter in enumerate(gap):
        terminus = backward_end if index == len(gap) - 1 else graph.add_vertex()
        weight = -(forward_weight + backward_weight) if index == 0 else 0
        graph.add_edge(current, letter, weight, terminus)
        current = terminus
    return len(gap)


def r_complete(graph: WeightedDigraph, relators: Iterable[Word]) -> WeightedDigraph:
    """
    One round of R-completion: a weight-0 circuit for every relator at every
    vertex present before the round, then fold

    `relators` is a symmetrized set; one orientation of each inverse pair
    is attached since a circuit read backwards gives the other.
    """
    result = fold(graph)
    words = sorted(w for w in set(relators) if w <= w.inverse())
    if not words:
        return result
    added = 0
    done = set()
    for vertex in result.vertices():
        root = result.find(vertex)[0]
        if root in done:
            continue
        for word in words:
            added += _attach_relator(result, root, word)
        result.fold()
        done.add(result.find(vertex)[0])
    logger.debug(
        f"R-completion added {added} edges, {result.vertex_count()} vertices, "
        f"N={modulus_text(result.modulus)}"
    )
    return result


# =============================================================================
# Naive eager folding (differential oracle)
# =============================================================================

def naive_fold(graph: WeightedDigraph) -> WeightedDigraph:
    """
    Quadratic folding over an explicit edge list with eager shifts

    Serves as an oracle for fold(); no union-find is involved.
    """
    modulus = graph.modulus
    edges: List[List[int]] = []
    for origin, label, weight, terminus in graph.edges():
        edges.append([origin, label, weight, terminus])

    def normalize(value: int) -> int:
        return value % modulus if modulus != INFINITE else value

    def remove(edge: List[int]) -> None:
        edges.remove(edge)

    root = graph.find(graph.root)[0]
    while True:
        conflict = None
        seen: Dict[Tuple[int, int], List[int]] = {}
        for edge in edges:
            key = (edge[0], edge[1])
            if key in seen:
                conflict = (seen[key], edge)
                break
            seen[key] = edge
        if conflict is None:
            break
        e1, e2 = conflict
        v, label = e1[0], e1[1]
        a, t1, b, t2 = e1[2], e1[3], e2[2], e2[3]
        if t1 == t2:
            remove(e2)
            remove([t2, label ^ 1, normalize(-b), v])
            if normalize(a - b) != 0:
                modulus = gcd(modulus, a - b)
                for edge in edges:
                    edge[2] = normalize(edge[2])
            continue
        # shift the terminus that is not the common origin, then merge it away
        if t2 != v:
            moving, keeping, amount = t2, t1, b - a
        else:
            moving, keeping, amount = t1, t2, a - b
        for edge in edges:
            if edge[0] == moving and edge[3] != moving:
                edge[2] = normalize(edge[2] + amount)
            elif edge[3] == moving and edge[0] != moving:
                edge[2] = normalize(edge[2] - amount)
        for edge in edges:
            if edge[0] == moving:
                edge[0] = keeping
            if edge[3] == moving:
                edge[3] = keeping
        if root == moving:
            root = keeping
        weight = e1[2]
        remove([v, label, weight, keeping])
        remove([keeping, label ^ 1, normalize(-weight), v])

    result = WeightedDigraph(modulus)
    for _ in range(len(graph.parent)):
        result.add_vertex()
    for origin, label, weight, terminus in edges:
        result.slots[origin][label] = (origin, normalize(weight), terminus)
    result.root = root
    return result


# =============================================================================
# Canonical form and debug dump
# =============================================================================

def canonical_form(graph: WeightedDigraph) -> Tuple[int, Tuple[Edge, ...]]:
    """
    Shift-invariant image of the part of a folded graph reachable from the
    root: vertices renumbered in breadth-first order (labels in code order)
    and weights normalized so the breadth-first tree edges weigh 0
    """
    folded = fold(graph)
    start = folded.find(folded.root)[0]
    number = {start: 0}
    potential = {start: 0}
    queue = deque([start])
    edges = []
    while queue:
        v = queue.popleft()
        for label in range(4):
            step = folded.out_edge(v, label)
            if step is None:
                continue
            weight, terminus = step
            if terminus not in number:
                number[terminus] = len(number)
                potential[terminus] = potential[v] + weight
                queue.append(terminus)
            normalized = folded.weight_key(weight + potential[v] - potential[terminus])
            edges.append((number[v], label, normalized, number[terminus]))
    return folded.modulus, tuple(sorted(edges))


def dump(graph: WeightedDigraph) -> str:
    """Debug text: header "N=<modulus> root=<id>", then "origin label weight terminus" lines"""
    lines = [f"N={modulus_text(graph.modulus)} root={graph.find(graph.root)[0]}"]
    for origin, label, weight, terminus in sorted(graph.edges()):
        lines.append(f"{origin} {LETTERS[label]} {weight} {terminus}")
    return "\n".join(lines) + "\n"
