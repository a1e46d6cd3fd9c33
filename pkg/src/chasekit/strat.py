"""Precedence orders between tgds, chase graphs, and the stratification
class tests (Str, CStr, IR).

precedes_c decides "firing xi1 can turn a satisfied instance of xi2
into a violated one" by replaying the defining scenario on a minimal
witness: anchor a head atom of xi1 onto a body atom of xi2 with a most
general unifier, ground everything else with distinct nulls, fire the
one oblivious step, and check the instantiated xi2 fails afterwards.
precedes_str adds trigger activeness (and the static no-idempotent-fold
filter); precedes_p adds the position-restriction condition used by the
2-restriction systems behind IR.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .classes import Position, _occurrences, _rename_apart, is_sd, is_wa
from .model import (
    Atom, Dependency, Instance, NULL, VAR,
    find_homomorphisms, null, resolve, unify,
)


### precedence witnesses

@dataclass
class PrecedenceWitness:
    t: Atom                  # head atom of xi1 anchored into xi2's body
    h1: dict                 # universal images for xi1
    h2: dict                 # universal images for xi2 (the a-bar values)
    instance: Instance       # witness I
    fired: Atom              # image of t added by the step
    j_instance: Instance     # J = I plus the fired head


class CycleCapExceeded(RuntimeError):
    def __init__(self, cap):
        super().__init__(f"simple-cycle enumeration exceeded cap {cap}")
        self.cap = cap


def _vars_of(atoms):
    seen: dict = {}
    for a in atoms:
        for t in a.args:
            if t.kind == VAR:
                seen.setdefault(t)
    return list(seen)


def mgu_pairs(t: Atom, alpha2) -> list[tuple[dict, dict]]:
    """Most general unifying pairs (h1, h2) with h1(t) = h2(t') for some
    t' in alpha2; assumes t and alpha2 use disjoint variables."""
    alpha2 = list(alpha2)
    out = []
    for tp in alpha2:
        if tp.relation != t.relation or len(tp.args) != len(t.args):
            continue
        sigma = unify(list(zip(t.args, tp.args)))
        if sigma is None:
            continue
        h1 = {v: resolve(sigma, v) for v in _vars_of([t])}
        h2 = {v: resolve(sigma, v) for v in _vars_of(alpha2)}
        out.append((h1, h2))
    return out


def _idempotent_fold(d: Dependency) -> bool:
    """An idempotent homomorphism from d's head into d's body (variables
    fixed on their own image) — such a tgd can never fire usefully."""
    for h in find_homomorphisms(d.head, Instance(d.body), movable=(VAR,)):
        if all(h.get(w, w) == w for w in h.values() if w.kind == VAR):
            return True
    return False


def _replay(x1: Dependency, x2: Dependency, active: bool, P=None):
    """Search for a minimal witness to x1 preceding x2; None if none.

    For every head atom t of x1 unifiable with a body atom of x2: ground
    all remaining variables with distinct nulls, except the existential
    images of x1, which become the fresh nulls of the oblivious step.
    The witness instance I holds x1's body image plus whatever of x2's
    body image the step does not provide; J adds the fired head.  The
    candidate succeeds when the fired anchor atom is genuinely new, the
    instantiated x2 has no conclusion-completion in J, activeness holds
    when requested, and (for the P-restricted order) some a-bar null in
    x2's conclusion sits only at positions inside P.
    """
    exists1 = set(x1.exists)
    for t in x1.head:
        for tp in x2.body:
            if tp.relation != t.relation or len(tp.args) != len(t.args):
                continue
            sigma = unify(list(zip(t.args, tp.args)))
            if sigma is None:
                continue
            witness = _check_candidate(x1, x2, t, sigma, exists1, active, P)
            if witness is not None:
                return witness
    return None


def _check_candidate(x1, x2, t, sigma, exists1, active, P):
    e_imgs = [resolve(sigma, y) for y in x1.exists]
    # a real firing hands every existential a fresh, pairwise-distinct null
    if any(v.kind != VAR for v in e_imgs):
        return None
    if len(set(e_imgs)) != len(e_imgs):
        return None
    eset = set(e_imgs)
    if any(resolve(sigma, u) in eset for u in x1.universals):
        return None

    def image(atom):
        return Atom(atom.relation,
                    tuple(resolve(sigma, a) if a.kind == VAR else a
                          for a in atom.args))

    body1 = [image(a) for a in x1.body]
    head1 = [image(a) for a in x1.head]
    body2 = [image(a) for a in x2.body]
    fired_set = set(head1)
    rest2 = [a for a in body2 if a not in fired_set]
    # fresh nulls must not pre-exist in the witness
    for a in body1 + rest2:
        if any(arg in eset for arg in a.args):
            return None

    g: dict = {}

    def ground(term):
        if term.kind != VAR:
            return term
        if term not in g:
            g[term] = null(f"p{len(g) + 1}")
        return g[term]

    def ground_atom(atom):
        return Atom(atom.relation, tuple(ground(a) for a in atom.args))

    i_atoms = [ground_atom(a) for a in body1] + [ground_atom(a) for a in rest2]
    witness_i = Instance(i_atoms)
    fired = ground_atom(image(t))
    if fired in witness_i:  # the anchor atom must be new (else nothing changes)
        return None
    h1 = {u: ground(resolve(sigma, u)) for u in x1.universals}
    if active and find_homomorphisms(x1.head, witness_i, base=h1, limit=1):
        return None  # trigger not active on the witness
    fired_head = [ground_atom(a) for a in head1]
    witness_j = witness_i.copy()
    witness_j.update(fired_head)
    h2 = {u: ground(resolve(sigma, u)) for u in x2.universals}
    if P is not None:
        if not any(h2[x].kind == NULL
                   and nullpos([h2[x]], witness_i) <= set(P)
                   for x in x2.frontier):
            return None
    if find_homomorphisms(x2.head, witness_j, base=h2, limit=1):
        return None  # the step did not break x2 after all
    return PrecedenceWitness(t, h1, h2, witness_i, fired, witness_j)


def _as_pair(xi1, xi2):
    a, b = _rename_apart([xi1, xi2])
    return a, b


def precedes_c(xi1: Dependency, xi2: Dependency):
    """The oblivious-step precedence order; (bool, witness-or-None)."""
    x1, x2 = _as_pair(xi1, xi2)
    w = _replay(x1, x2, active=False)
    return w is not None, w


def precedes_str(xi1: Dependency, xi2: Dependency) -> bool:
    """Active-trigger precedence: as precedes_c with trigger activeness,
    plus the static filter that xi1's head does not fold into its body."""
    x1, x2 = _as_pair(xi1, xi2)
    if _idempotent_fold(x1):
        return False
    return _replay(x1, x2, active=True) is not None


def precedes_p(xi1: Dependency, xi2: Dependency, P) -> bool:
    """precedes_c restricted to steps whose broken conclusion carries a
    null confined to positions in P (fresh nulls always qualify)."""
    x1, x2 = _as_pair(xi1, xi2)
    return _replay(x1, x2, active=False, P=set(P)) is not None


### chase graphs and stratification

def chase_graph(deps, order="str") -> nx.DiGraph:
    """Nodes are dependency indices; edge i -> j when deps[i] precedes
    deps[j] under the chosen order ("str" or "cstr")."""
    if order not in ("str", "cstr"):
        raise ValueError(f"unknown precedence order {order!r}")
    deps = list(deps)
    g = nx.DiGraph()
    g.add_nodes_from(range(len(deps)))
    for i, a in enumerate(deps):
        for j, b in enumerate(deps):
            if order == "str":
                hit = precedes_str(a, b)
            else:
                hit, _ = precedes_c(a, b)
            if hit:
                g.add_edge(i, j)
    return g


def _strata_ok(deps, order, cap):
    deps = list(deps)
    graph = chase_graph(deps, order)
    count = 0
    for cycle in nx.simple_cycles(graph):
        count += 1
        if count > cap:
            raise CycleCapExceeded(cap)
        members = sorted(set(cycle))
        ok, cert = is_wa([deps[i] for i in members])
        if not ok:
            return False, {"cycle": cycle, "stratum": members,
                           "wa_cycle": cert}
    return True, None


def is_stratified(deps, cap=1_000_000):
    """Every simple cycle of the active-trigger chase graph must be a
    weakly acyclic dependency set."""
    return _strata_ok(deps, "str", cap)


def is_c_stratified(deps, cap=1_000_000):
    """As is_stratified over the oblivious-step chase graph."""
    return _strata_ok(deps, "cstr", cap)


### restriction systems and inconsistency robustness

def nullpos(nulls, instance) -> set[Position]:
    """Positions where any of the given nulls occurs."""
    ns = set(nulls)
    out = set()
    for a in instance:
        for i, arg in enumerate(a.args):
            if arg in ns:
                out.add((a.relation, i + 1))
    return out


def affcl(xi: Dependency, P) -> set[Position]:
    """Head positions that can receive a null confined to P: positions
    all of whose universal occupants have every body occurrence inside P,
    plus positions holding an existential variable.  Occupants are
    aggregated across head atoms, so a position shared by two head atoms
    only qualifies when every universal sitting there is confined."""
    P = set(P)
    exist = set(xi.exists)
    universals = set(xi.universals)
    confined = {x for x in universals
                if all(p in P for p in _occurrences(xi.body, x))}
    occupants: dict[Position, set] = {}
    for a in xi.head:
        for i, t in enumerate(a.args):
            occupants.setdefault((a.relation, i + 1), set()).add(t)
    out = set()
    for pos, terms in occupants.items():
        if all(t in confined for t in terms if t in universals):
            out.add(pos)
        elif any(t in exist for t in terms):
            out.add(pos)
    return out


@dataclass
class RestrictionSystem:
    edges: set                      # (i, j) index pairs
    positions: set                  # the position set P
    minimal: bool = True


def minimal_2restriction(deps) -> RestrictionSystem:
    """Least fixpoint from ((deps, no edges), empty P): add an edge when
    precedes_p holds under the current P, then close P under affcl over
    the edge endpoints; repeat until stable.  precedes_p is monotone in
    P, so settled edges are never re-checked."""
    deps = list(deps)
    n = len(deps)
    edges: set = set()
    P: set = set()
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if (i, j) in edges:
                    continue
                if precedes_p(deps[i], deps[j], P):
                    edges.add((i, j))
                    changed = True
        while True:
            grown = set(P)
            for i, j in edges:
                grown |= affcl(deps[i], grown) | affcl(deps[j], grown)
            if grown == P:
                break
            P = grown
            changed = True
    return RestrictionSystem(edges, P)


def part2(deps) -> list[list[Dependency]]:
    """Dependency sets of the nontrivial strongly connected components
    (an internal edge or self-loop) of the minimal 2-restriction system.
    """
    deps = list(deps)
    system = minimal_2restriction(deps)
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(deps)))
    graph.add_edges_from(system.edges)
    parts = []
    for scc in nx.strongly_connected_components(graph):
        scc = sorted(scc)
        if len(scc) > 1 or (scc[0], scc[0]) in system.edges:
            parts.append([deps[i] for i in scc])
    return parts


def is_ir(deps):
    """Membership in the inconsistency-robust class: every part of the
    minimal 2-restriction system passes the SD test."""
    for part in part2(deps):
        ok, cert = is_sd(part)
        if not ok:
            return False, {"part": [d.label for d in part], "sd_cycle": cert}
    return True, None
