"""Acyclicity-based termination-class analyzers.

Four of the five classes are "no cycle through an existential edge"
conditions over position graphs that differ in which edges they draw:
the flow graph (SW) connects every body variable to every head
variable, the extended graph (RA) sends existential edges from all body
variables, the dependency graph (WA) only looks at frontier variables,
and the propagation graph (SD) further restricts everything to affected
positions.  The fifth (sWA) works on places of the Skolemized program.

All analyzers return (member, certificate): the certificate is an
offending cycle when membership fails, None otherwise.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .chase import ChaseConfig, run
from .model import (
    Atom, Dependency, Instance, VAR, const, unify, var,
)
from .rewrite import skolemize, _fresh_symbol, _schema

Position = tuple[str, int]  # (relation, 1-based index)


def _require_tgds(deps, what):
    for d in deps:
        if d.kind == "egd":
            raise ValueError(
                f"{what} is defined for tgds; rewrite egds first "
                "(egds_to_tgds)")
        if d.kind == "denial":
            raise ValueError(f"{what} is defined for tgds; denial "
                             "constraints are not supported")


### position graphs

@dataclass
class PositionGraph:
    vertices: set = field(default_factory=set)
    edges: set = field(default_factory=set)  # (src, dst, "universal"|"existential")

    def add_edge(self, u: Position, v: Position, label: str):
        self.vertices.add(u)
        self.vertices.add(v)
        self.edges.add((u, v, label))

    def cycle_through_existential(self):
        """A cycle [p0, p1, ..., p0] using >=1 existential edge, or None."""
        adj: dict[Position, list[Position]] = {v: [] for v in self.vertices}
        for u, v, _ in sorted(self.edges):
            adj[u].append(v)
        for u, v, label in sorted(self.edges):
            if label != "existential":
                continue
            back = _shortest_path(adj, v, u)
            if back is not None:
                return [u] + back
        return None


def _shortest_path(adj, src, dst):
    """BFS path [src, ..., dst] or None; [src] when src == dst."""
    if src == dst:
        return [src]
    parent = {src: None}
    fringe = deque([src])
    while fringe:
        node = fringe.popleft()
        for nxt in adj.get(node, ()):
            if nxt in parent:
                continue
            parent[nxt] = node
            if nxt == dst:
                path = [dst]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            fringe.append(nxt)
    return None


def positions_of(deps) -> set[Position]:
    return {(rel, i + 1)
            for rel, arity in _schema(deps).items() for i in range(arity)}


def _occurrences(atoms, x) -> list[Position]:
    out = []
    for a in atoms:
        for i, t in enumerate(a.args):
            if t == x:
                out.append((a.relation, i + 1))
    return out


def dependency_graph(deps) -> PositionGraph:
    """Frontier variable x at body position p: universal edges p -> each
    head position of x; existential edges p -> each position holding an
    existential variable."""
    _require_tgds(deps, "the dependency graph")
    g = PositionGraph(positions_of(deps), set())
    for d in deps:
        ex_positions = [pos for z in d.exists
                        for pos in _occurrences(d.head, z)]
        for x in d.frontier:
            for p in _occurrences(d.body, x):
                for q in _occurrences(d.head, x):
                    g.add_edge(p, q, "universal")
                for q in ex_positions:
                    g.add_edge(p, q, "existential")
    return g


def flow_graph(deps) -> PositionGraph:
    """Every body variable u at p, every head variable v at q: edge
    p -> q, existential when v is existentially quantified."""
    _require_tgds(deps, "the flow graph")
    g = PositionGraph(positions_of(deps), set())
    for d in deps:
        body_positions = [p for u in d.universals
                          for p in _occurrences(d.body, u)]
        ex = set(d.exists)
        head_vars = {t for a in d.head for t in a.args if t.kind == VAR}
        for v in head_vars:
            label = "existential" if v in ex else "universal"
            for q in _occurrences(d.head, v):
                for p in body_positions:
                    g.add_edge(p, q, label)
    return g


def extended_dependency_graph(deps) -> PositionGraph:
    """Universal edges as in the dependency graph; existential edges
    from every body variable's positions."""
    _require_tgds(deps, "the extended dependency graph")
    g = PositionGraph(positions_of(deps), set())
    for d in deps:
        ex_positions = [pos for z in d.exists
                        for pos in _occurrences(d.head, z)]
        body_positions = [p for u in d.universals
                          for p in _occurrences(d.body, u)]
        for x in d.frontier:
            for p in _occurrences(d.body, x):
                for q in _occurrences(d.head, x):
                    g.add_edge(p, q, "universal")
        for p in body_positions:
            for q in ex_positions:
                g.add_edge(p, q, "existential")
    return g


### affected positions and the propagation graph

def affected_positions(deps) -> set[Position]:
    """Least fixpoint: positions of existential variables, plus head
    positions of a universal x all of whose body occurrences are already
    affected."""
    _require_tgds(deps, "affected positions")
    aff: set[Position] = set()
    for d in deps:
        for z in d.exists:
            aff.update(_occurrences(d.head, z))
    changed = True
    while changed:
        changed = False
        for d in deps:
            for x in d.frontier:
                body_occ = _occurrences(d.body, x)
                if body_occ and all(p in aff for p in body_occ):
                    for q in _occurrences(d.head, x):
                        if q not in aff:
                            aff.add(q)
                            changed = True
    return aff


def propagation_graph(deps) -> PositionGraph:
    """Like the dependency graph, restricted to affected positions: a
    frontier variable x contributes only when every body atom containing
    x has at least one x-occurrence at an affected position, and then
    only its affected body occurrences source edges; universal edges
    target x's affected head positions."""
    _require_tgds(deps, "the propagation graph")
    aff = affected_positions(deps)
    g = PositionGraph(positions_of(deps), set())
    for d in deps:
        ex_positions = [pos for z in d.exists
                        for pos in _occurrences(d.head, z)]
        for x in d.frontier:
            per_atom_ok = True
            for a in d.body:
                occ = [(a.relation, i + 1)
                       for i, t in enumerate(a.args) if t == x]
                if occ and not any(p in aff for p in occ):
                    per_atom_ok = False
                    break
            if not per_atom_ok:
                continue
            for p in _occurrences(d.body, x):
                if p not in aff:
                    continue
                for q in _occurrences(d.head, x):
                    if q in aff:
                        g.add_edge(p, q, "universal")
                for q in ex_positions:
                    g.add_edge(p, q, "existential")
    return g


### the four graph classes

def _graph_class(builder, deps):
    cycle = builder(deps).cycle_through_existential()
    return cycle is None, cycle


def is_sw(deps):
    return _graph_class(flow_graph, deps)


def is_ra(deps):
    return _graph_class(extended_dependency_graph, deps)


def is_wa(deps):
    return _graph_class(dependency_graph, deps)


def is_sd(deps):
    return _graph_class(propagation_graph, deps)


### super-weak acyclicity

def _rename_apart(deps):
    """Copies with no variable names shared across dependencies."""
    out = []
    for i, d in enumerate(deps):
        sub = {t: var(f"u{i}_{t.label}")
               for a in list(d.body) + list(d.head)
               for t in a.args if t.kind == VAR}
        body = tuple(Atom(a.relation, tuple(sub.get(t, t) for t in a.args))
                     for a in d.body)
        head = tuple(Atom(a.relation, tuple(sub.get(t, t) for t in a.args))
                     for a in d.head)
        exists = tuple(sub.get(z, var(f"u{i}_{z.label}")) for z in d.exists)
        out.append(Dependency("tgd", body, head, None, exists, d.label))
    return out


def _contains_var(term, x) -> bool:
    if term == x:
        return True
    if term.kind == "skolem":
        return any(_contains_var(a, x) for a in term.args)
    return False


def _contains_fn(term, fn) -> bool:
    if term.kind == "skolem":
        return term.fn == fn or any(_contains_fn(a, fn) for a in term.args)
    return False


class _Swa:
    """Workspace for the place machinery: place = (occurrence key, atom,
    1-based index); occurrence keys make places from repeated atoms
    distinct."""

    def __init__(self, deps):
        renamed = _rename_apart(deps)
        program = skolemize(renamed, "sobl").deps
        self.rules = []  # (body atoms, head atoms, universals, frontier, exists of original)
        for d, orig in zip(program, renamed):
            self.rules.append((d.body, d.head, orig.universals,
                               orig.frontier, orig.exists))
        self.places = []
        for r, (body, head, *_rest) in enumerate(self.rules):
            for part, atoms in (("b", body), ("h", head)):
                for j, a in enumerate(atoms):
                    for i in range(len(a.args)):
                        self.places.append(((r, part, j), a, i + 1))
        self._sim: dict = {}

    def similar(self, p, q) -> bool:
        """Unifiability of places: same index and the two atoms unify
        after renaming apart, substitutions ranging over full terms."""
        key = (p[0], p[2], q[0], q[2])
        if key in self._sim:
            return self._sim[key]
        ok = False
        if p[2] == q[2]:
            a, b = p[1], q[1]
            if a.relation == b.relation and len(a.args) == len(b.args):
                b2 = _freshen(b)
                ok = unify(list(zip(a.args, b2.args))) is not None
        self._sim[key] = ok
        return ok

    def gamma(self, rule_idx, part, x):
        """Places in the rule's body ('b') or head ('h') whose argument
        term contains the variable x (including inside Skolem args)."""
        body, head, *_ = self.rules[rule_idx]
        atoms = body if part == "b" else head
        out = []
        for j, a in enumerate(atoms):
            for i, t in enumerate(a.args):
                if _contains_var(t, x):
                    out.append(((rule_idx, part, j), a, i + 1))
        return out

    def subsumed(self, places, pool) -> bool:
        return all(any(self.similar(p, q) for q in pool) for p in places)

    def move(self, start):
        """Closure: add Gamma_x(head) whenever Gamma_x(body) fits the
        pool up to place unifiability."""
        pool = list(start)
        keys = {(p[0], p[2]) for p in pool}
        changed = True
        while changed:
            changed = False
            for r, (_body, _head, universals, *_rest) in enumerate(self.rules):
                for x in universals:
                    if not self.subsumed(self.gamma(r, "b", x), pool):
                        continue
                    for p in self.gamma(r, "h", x):
                        if (p[0], p[2]) not in keys:
                            keys.add((p[0], p[2]))
                            pool.append(p)
                            changed = True
        return pool

    def out_places(self, rule_idx, y):
        """Head places whose term mentions y's Skolem function."""
        fn = f"f{rule_idx + 1}_{y.label}"
        _body, head, *_ = self.rules[rule_idx]
        out = []
        for j, a in enumerate(head):
            for i, t in enumerate(a.args):
                if _contains_fn(t, fn):
                    out.append(((rule_idx, "h", j), a, i + 1))
        return out


def _freshen(atom: Atom) -> Atom:
    def fresh(t):
        if t.kind == VAR:
            return var(f"r_{t.label}")
        if t.kind == "skolem":
            return type(t)(t.fn, tuple(fresh(a) for a in t.args))
        return t

    return Atom(atom.relation, tuple(fresh(t) for t in atom.args))


def is_swa(deps):
    """Acyclicity of the trigger relation: rule i points at rule j when
    some existential y of i and frontier x of j satisfy
    In(j,x) subsumed-by Move(Out(i,y))."""
    _require_tgds(deps, "super-weak acyclicity")
    deps = list(deps)
    ws = _Swa(deps)
    n = len(deps)
    edges = set()
    for i in range(n):
        exists_i = ws.rules[i][4]
        if not exists_i:
            continue
        moves = {y: ws.move(ws.out_places(i, y)) for y in exists_i}
        for j in range(n):
            frontier_j = ws.rules[j][3]
            if any(ws.subsumed(ws.gamma(j, "b", x), moves[y])
                   for y in exists_i for x in frontier_j):
                edges.add((i, j))
    cycle = _digraph_cycle(range(n), edges)
    return cycle is None, cycle


def _digraph_cycle(nodes, edges):
    """Any directed cycle as a node list [v0, ..., v0], or None."""
    adj: dict = {v: [] for v in nodes}
    for u, v in sorted(edges):
        adj[u].append(v)
    state = dict.fromkeys(adj, 0)
    for start in adj:
        if state[start]:
            continue
        stack = [start]
        path = []
        on_path = {}
        while stack:
            node = stack[-1]
            if state[node] == 0:
                state[node] = 1
                on_path[node] = len(path)
                path.append(node)
            advanced = False
            for nxt in adj[node]:
                if state[nxt] == 1:
                    return path[on_path[nxt]:] + [nxt]
                if state[nxt] == 0:
                    stack.append(nxt)
                    advanced = True
                    break
            if not advanced:
                state[node] = 2
                stack.pop()
                path.pop()
                on_path.pop(node, None)
    return None


### critical instance

def critical_instance(deps) -> Instance:
    """One atom per relation of the set, every position filled with one
    designated fresh constant."""
    _require_tgds(deps, "the critical instance")
    schema = _schema(deps)
    taken = {t.label for d in deps
             for a in list(d.body) + list(d.head)
             for t in a.args if t.kind == "const"}
    c = const(_fresh_symbol("c", taken))
    return Instance(Atom(rel, (c,) * arity) for rel, arity in schema.items())


def uniform_termination_semidecision(deps, variant="sobl", fuel=10_000) -> str:
    """Run the oblivious or semi-oblivious chase on the critical
    instance: termination there implies termination on all instances."""
    if variant not in ("obl", "sobl"):
        raise ValueError("the semi-decision applies to variants obl and sobl")
    outcome = run(critical_instance(deps), list(deps),
                  ChaseConfig(variant=variant, fuel=fuel))
    return "terminates_all" if outcome.status == "terminated" else "unknown"
