"""Terms, atoms, instances, homomorphisms, cores.

The ground machinery everything else sits on: three disjoint term
namespaces (constants, nulls, variables), atoms over named relations,
duplicate-free ordered instances, backtracking homomorphism search, and
deterministic core computation by repeated retraction.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

### terms

CONST = "const"
NULL = "null"
VAR = "var"


@dataclass(frozen=True, order=False)
class Term:
    kind: str
    label: str

    def __post_init__(self):
        # terms are hashed constantly (domains, indexes, instances), so
        # pay for the field hash once
        object.__setattr__(self, "_hash", hash((self.kind, self.label)))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.kind[0]}:{self.label}"


def const(label) -> Term:
    return Term(CONST, str(label))


def null(label) -> Term:
    return Term(NULL, str(label))


def var(label) -> Term:
    return Term(VAR, str(label))


# Fresh nulls come from a process-wide counter.  Labels already in play
# (parsed from files, say) are registered so a fresh null never collides
# with one the caller chose by hand.
_null_counter = itertools.count(1)
_used_null_labels: set[str] = set()


def register_null_labels(labels) -> None:
    _used_null_labels.update(str(x) for x in labels)


def fresh_null() -> Term:
    while True:
        label = f"n{next(_null_counter)}"
        if label not in _used_null_labels:
            _used_null_labels.add(label)
            return Term(NULL, label)


_digit_run = re.compile(r"(\d+)")


def natural_key(label: str):
    """Sort key treating digit runs numerically, so n2 < n10."""
    return tuple(
        int(piece) if piece.isdigit() else piece
        for piece in _digit_run.split(label)
    )


def term_rank(t: Term):
    """Total order used when an equality merge must pick a survivor:
    constants beat nulls, then label order."""
    return (0 if t.kind == CONST else 1, natural_key(t.label))


def term_sort_key(t: Term):
    return (t.kind, natural_key(t.label))


### atoms

@dataclass(frozen=True)
class Atom:
    relation: str
    args: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        object.__setattr__(self, "_hash", hash((self.relation, self.args)))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.relation}({','.join(map(repr, self.args))})"


def atom(relation: str, *args: Term) -> Atom:
    return Atom(relation, tuple(args))


def render_term(t) -> str:
    if t.kind == NULL:
        return f"?{t.label}"
    if t.kind == CONST:
        return t.label if t.label.isdigit() else f"'{t.label}'"
    if t.kind == "skolem":  # compound terms from Skolemization
        return f"{t.fn}({', '.join(render_term(a) for a in t.args)})"
    return t.label


def render_atom(a: Atom) -> str:
    return f"{a.relation}({', '.join(render_term(t) for t in a.args)})"


### instances

class Instance:
    """Finite set of ground atoms (constants and nulls, no variables).

    Backed by a dict so iteration follows insertion order — everything
    downstream (core retraction order, chase trigger order) leans on
    that for reproducibility — while equality is plain set equality.
    """

    __slots__ = ("_atoms",)

    def __init__(self, atoms=()):
        self._atoms: dict[Atom, None] = {}
        for a in atoms:
            self._atoms[a] = None

    def add(self, a: Atom) -> bool:
        if a in self._atoms:
            return False
        self._atoms[a] = None
        return True

    def discard(self, a: Atom) -> None:
        self._atoms.pop(a, None)

    def update(self, atoms) -> None:
        for a in atoms:
            self._atoms[a] = None

    def __contains__(self, a) -> bool:
        return a in self._atoms

    def __iter__(self):
        return iter(self._atoms)

    def __len__(self) -> int:
        return len(self._atoms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Instance):
            return self._atoms.keys() == other._atoms.keys()
        if isinstance(other, (set, frozenset)):
            return set(self._atoms) == other
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._atoms))

    def __repr__(self):
        return "{" + ", ".join(render_atom(a) for a in self) + "}"

    def copy(self) -> "Instance":
        return Instance(self._atoms)

    def atoms(self) -> list[Atom]:
        return list(self._atoms)

    def terms(self) -> set[Term]:
        return {t for a in self._atoms for t in a.args}

    def nulls(self) -> set[Term]:
        return {t for t in self.terms() if t.kind == NULL}

    def constants(self) -> set[Term]:
        return {t for t in self.terms() if t.kind == CONST}

    def relations(self) -> dict[str, int]:
        """Relation name -> arity, in first-occurrence order."""
        out: dict[str, int] = {}
        for a in self._atoms:
            out.setdefault(a.relation, len(a.args))
        return out


def as_instance(atoms) -> Instance:
    return atoms if isinstance(atoms, Instance) else Instance(atoms)


### substitution application

def apply_term(h: dict, t):
    if t.kind == "skolem":
        return type(t)(t.fn, tuple(apply_term(h, a) for a in t.args))
    return h.get(t, t)


def apply_atom(h: dict, a: Atom) -> Atom:
    return Atom(a.relation, tuple(apply_term(h, t) for t in a.args))


def apply_atoms(h: dict, atoms) -> list[Atom]:
    return [apply_atom(h, a) for a in atoms]


def compose(g: dict, h: dict) -> dict:
    """(g ∘ h): apply h first, then g."""
    out = {k: apply_term(g, v) for k, v in h.items()}
    for k, v in g.items():
        out.setdefault(k, v)
    return out


### homomorphism search

def _term_order(t):
    """Deterministic total order on terms, including function terms."""
    if t.kind == "skolem":
        return ("skolem", natural_key(t.fn),
                tuple(_term_order(a) for a in t.args))
    return (t.kind, natural_key(t.label), ())


def find_homomorphisms(source, target, base=None, limit=None, movable=(VAR,)):
    """All extensions h of `base` with h(source) ⊆ target.

    `movable` says which term kinds h may remap (variables for queries
    and dependency bodies, nulls for endomorphism/retraction search);
    everything else must match the target literally.

    Search keeps a per-term candidate domain narrowed to an
    arc-consistent fixpoint, branches on the tightest term, and
    re-propagates after every binding; retraction tests on rigid
    instances are refuted by propagation alone.  Deterministic: branch
    terms by first occurrence, values in term order.
    """
    target = as_instance(target)
    source = list(source)
    base = dict(base) if base else {}
    by_rel: dict[tuple[str, int], list[Atom]] = {}
    for a in target:
        by_rel.setdefault((a.relation, len(a.args)), []).append(a)

    # per atom: distinct movable terms appearing as plain args
    movs_of: list[list[Term]] = []
    order: list[Term] = []  # all plain movable terms, first occurrence
    atoms_by_term: dict[Term, list[int]] = {}
    for k, sa in enumerate(source):
        seen: list[Term] = []
        for s in sa.args:
            if s.kind in movable:
                if s not in seen:
                    seen.append(s)
                if s not in atoms_by_term:
                    atoms_by_term[s] = []
                    order.append(s)
                if k not in atoms_by_term[s]:
                    atoms_by_term[s].append(k)
            elif s.kind == "skolem":
                for n in _nested_movables(s, movable):
                    atoms_by_term.setdefault(n, [])
                    if k not in atoms_by_term[n]:
                        atoms_by_term[n].append(k)
        movs_of.append(seen)

    domains: dict[Term, set] = {s: {v} for s, v in base.items()}

    def image(t):
        """The forced image of t, or None while t is undetermined."""
        if t.kind in movable:
            d = domains.get(t)
            if d is not None and len(d) == 1:
                return next(iter(d))
            return None
        if t.kind == "skolem":
            args = []
            for a in t.args:
                ia = image(a)
                if ia is None:
                    return None
                args.append(ia)
            return type(t)(t.fn, tuple(args))
        return t

    def revise(k: int, trail: list):
        """Narrow the domains of atom k's undetermined terms to values
        supported by a compatible target atom; False on wipeout."""
        sa = source[k]
        imgs = [image(s) for s in sa.args]
        if all(i is not None for i in imgs):
            return Atom(sa.relation, tuple(imgs)) in target, ()
        undet = [s for s, i in zip(sa.args, imgs) if i is None
                 and s.kind in movable]
        support: dict[Term, set] = {s: set() for s in undet}
        hit = False
        for ta in by_rel.get((sa.relation, len(sa.args)), ()):
            bound: dict[Term, Term] = {}
            ok = True
            for s, i, t in zip(sa.args, imgs, ta.args):
                if i is not None:
                    if i != t:
                        ok = False
                        break
                elif s.kind in movable:
                    d = domains.get(s)
                    if d is not None and t not in d:
                        ok = False
                        break
                    if s in bound and bound[s] != t:
                        ok = False
                        break
                    bound[s] = t
                # undetermined function terms match anything for now;
                # the final leaf check verifies them
            if ok:
                hit = True
                for s, t in bound.items():
                    support[s].add(t)
        if not hit:
            return False, ()
        changed = []
        for s in set(support):
            d = domains.get(s)
            nd = support[s] if d is None else d & support[s]
            if d is None or nd != d:
                trail.append((s, d))
                domains[s] = nd
                changed.append(s)
                if not nd:
                    return False, ()
        return True, changed

    def propagate(seeds, trail) -> bool:
        queue = list(seeds)
        queued = set(queue)
        while queue:
            k = queue.pop()
            queued.discard(k)
            ok, changed = revise(k, trail)
            if not ok:
                return False
            for s in changed:
                for k2 in atoms_by_term.get(s, ()):
                    if k2 != k and k2 not in queued:
                        queue.append(k2)
                        queued.add(k2)
        return True

    def undo(trail, mark=0):
        while len(trail) > mark:
            s, old = trail.pop()
            if old is None:
                del domains[s]
            else:
                domains[s] = old

    results: list[dict] = []

    def leaf() -> bool:
        for sa in source:
            imgs = [image(s) for s in sa.args]
            if any(i is None for i in imgs):
                return False  # unbindable function-term argument
            if Atom(sa.relation, tuple(imgs)) not in target:
                return False
        h = dict(base)
        for s in order:
            h[s] = next(iter(domains[s]))
        results.append(h)
        return True

    def solve() -> bool:
        """True to stop the enumeration (limit reached)."""
        pick = None
        for s in order:
            d = domains.get(s)
            if d is not None and len(d) > 1 \
                    and (pick is None or len(d) < len(domains[pick])):
                pick = s
        if pick is None:
            done = leaf()
            return done and limit is not None and len(results) >= limit
        for v in sorted(domains[pick], key=_term_order):
            trail: list = [(pick, domains[pick])]
            domains[pick] = {v}
            if propagate(atoms_by_term[pick], trail):
                if solve():
                    undo(trail)
                    return True
            undo(trail)
        return False

    root: list = []
    if propagate(range(len(source)), root):
        solve()
    return results


def _nested_movables(t, movable):
    if t.kind in movable:
        yield t
    elif t.kind == "skolem":
        for a in t.args:
            yield from _nested_movables(a, movable)


_EMPTY_SET: frozenset = frozenset()


def _self_retraction(current: Instance):
    """One proper retraction of `current`: an endomorphism (nulls
    movable) mapping the whole instance into itself minus one atom.
    Returns the endomorphism, or None when no atom can be dropped.

    The instance is both source and target for every drop test, so the
    heavy lifting is shared: terms and atoms are encoded as ints,
    (relation, position, term) indexes and an arc-consistent candidate
    domain per null are built once for the full self-map, and support
    counts record how many atoms back each candidate value.  A single
    test then starts from that fixpoint and only repairs the support
    the dropped atom provided — most tests die immediately because some
    atom's image is pinned onto the dropped one — before a propagation-
    driven search settles the rest.  Assumes no function terms.
    """
    atoms = current.atoms()
    n = len(atoms)

    ### integer encodings
    term_ids: dict[Term, int] = {}
    terms: list[Term] = []
    for a in atoms:
        for t in a.args:
            if t not in term_ids:
                term_ids[t] = len(terms)
                terms.append(t)
    is_null = [t.kind == NULL for t in terms]
    rank = [0] * len(terms)  # deterministic value order for branching
    for pos, i in enumerate(sorted(range(len(terms)),
                                   key=lambda i: _term_order(terms[i]))):
        rank[i] = pos

    rels = [a.relation for a in atoms]
    enc = [tuple(term_ids[t] for t in a.args) for a in atoms]
    atom_ids = {(rels[k], enc[k]): k for k in range(n)}
    keys = [(a.relation, len(a.args)) for a in atoms]
    bucket: dict[tuple, list[int]] = {}
    bucket_set: dict[tuple, set[int]] = {}
    index: dict[tuple, set[int]] = {}
    for k in range(n):
        bucket.setdefault(keys[k], []).append(k)
        bucket_set.setdefault(keys[k], set()).add(k)
        for p, t in enumerate(enc[k]):
            index.setdefault((rels[k], p, t), set()).add(k)

    order: list[int] = []  # null ids, first occurrence
    atoms_by_term: dict[int, list[int]] = {}
    movs_of: list[tuple[int, ...]] = []
    for k in range(n):
        seen: list[int] = []
        for s in enc[k]:
            if is_null[s]:
                if s not in atoms_by_term:
                    atoms_by_term[s] = []
                    order.append(s)
                lst = atoms_by_term[s]
                if not lst or lst[-1] != k:
                    lst.append(k)
                if s not in seen:
                    seen.append(s)
        movs_of.append(tuple(seen))

    domains: list = [None] * len(terms)
    dropped = -1

    def image(s: int):
        """Forced image of term s, or None while undetermined."""
        if is_null[s]:
            d = domains[s]
            if d is not None and len(d) == 1:
                for v in d:
                    return v
            return None
        return s

    def candidates(k: int, imgs):
        """Target atom ids compatible with atom k's determined args."""
        rel = rels[k]
        cand = None
        for p, im in enumerate(imgs):
            if im is not None:
                ids = index.get((rel, p, im))
                if not ids:
                    return None
                cand = ids if cand is None else cand & ids
                if not cand:
                    return None
        if cand is None:
            cand = bucket_set[keys[k]]
        if len(cand) > 8:
            # run the tightest unset position through the index too
            best_d = best_p = None
            for p, (s, im) in enumerate(zip(enc[k], imgs)):
                if im is None:
                    d = domains[s]
                    if d is not None and (best_d is None or len(d) < len(best_d)):
                        best_d, best_p = d, p
            if best_d is not None and len(best_d) * 3 < len(cand):
                u = set()
                for v in best_d:
                    u |= index.get((rel, best_p, v), _EMPTY_SET)
                cand = cand & u
        return cand

    def revise(k: int, trail: list):
        sargs = enc[k]
        imgs = [image(s) for s in sargs]
        undet = {s for s, i in zip(sargs, imgs) if i is None}
        if not undet:
            aid = atom_ids.get((rels[k], tuple(imgs)))
            return (aid is not None and aid != dropped), ()
        cand = candidates(k, imgs)
        if not cand:
            return False, ()
        support: dict[int, set] = {s: set() for s in undet}
        hit = False
        for tid in cand:
            if tid == dropped:
                continue
            bound: dict[int, int] = {}
            ok = True
            for s, i, t in zip(sargs, imgs, enc[tid]):
                if i is not None:
                    if i != t:
                        ok = False
                        break
                else:
                    d = domains[s]
                    if d is not None and t not in d:
                        ok = False
                        break
                    prev = bound.get(s)
                    if prev is not None and prev != t:
                        ok = False
                        break
                    bound[s] = t
            if ok:
                hit = True
                for s, t in bound.items():
                    support[s].add(t)
        if not hit:
            return False, ()
        changed = []
        for s, sup in support.items():
            d = domains[s]
            nd = sup if d is None else d & sup
            if d is None or nd != d:
                trail.append((s, d))
                domains[s] = nd
                changed.append(s)
                if not nd:
                    return False, ()
        return True, changed

    def propagate(queue: list, qset: set, trail: list) -> bool:
        while queue:
            k = queue.pop()
            qset.discard(k)
            ok, changed = revise(k, trail)
            if not ok:
                return False
            for s in changed:
                for k2 in atoms_by_term[s]:
                    if k2 != k and k2 not in qset:
                        qset.add(k2)
                        queue.append(k2)
        return True

    def undo(trail: list, mark: int = 0):
        while len(trail) > mark:
            s, old = trail.pop()
            domains[s] = old

    ### base fixpoint for the full self-map (identity makes it total)
    base_ok = propagate(list(range(n)), set(range(n)), [])
    assert base_ok, "self-map propagation cannot fail"

    ### forced images and per-value support counts at the base fixpoint
    fimg = [-1] * n
    forced_on: dict[int, list[int]] = {}
    supcnt: list = [None] * n
    for k in range(n):
        imgs = [image(s) for s in enc[k]]
        if None not in imgs:
            aid = atom_ids[(rels[k], tuple(imgs))]
            fimg[k] = aid
            forced_on.setdefault(aid, []).append(k)
            continue
        cnts: dict[int, dict[int, int]] = {
            s: {} for s, i in zip(enc[k], imgs) if i is None}
        for tid in candidates(k, imgs):
            bound = {}
            ok = True
            for s, i, t in zip(enc[k], imgs, enc[tid]):
                if i is not None:
                    if i != t:
                        ok = False
                        break
                else:
                    d = domains[s]
                    if d is not None and t not in d:
                        ok = False
                        break
                    prev = bound.get(s)
                    if prev is not None and prev != t:
                        ok = False
                        break
                    bound[s] = t
            if ok:
                for s, t in bound.items():
                    m = cnts[s]
                    m[t] = m.get(t, 0) + 1
        supcnt[k] = cnts

    def contrib(k: int, d0: int):
        """How the dropped atom d0 supports atom k: bound {term: value},
        or None if d0 is not a compatible image for k right now."""
        bound: dict[int, int] = {}
        for s, t in zip(enc[k], enc[d0]):
            i = image(s)
            if i is not None:
                if i != t:
                    return None
            else:
                d = domains[s]
                if d is not None and t not in d:
                    return None
                prev = bound.get(s)
                if prev is not None and prev != t:
                    return None
                bound[s] = t
        return bound

    def pick_term():
        best = None
        best_len = 0
        for s in movs_of[dropped]:  # the dropped atom's own nulls first
            d = domains[s]
            if len(d) > 1 and (best is None or len(d) < best_len):
                best, best_len = s, len(d)
        if best is None:
            for s in order:
                d = domains[s]
                if len(d) > 1 and (best is None or len(d) < best_len):
                    best, best_len = s, len(d)
        return best

    def finish():
        for k in range(n):
            imgs = tuple(image(s) for s in enc[k])
            aid = atom_ids.get((rels[k], imgs))
            if aid is None or aid == dropped:
                return None
        return {terms[s]: terms[next(iter(domains[s]))] for s in order}

    def search(trail: list):
        s = pick_term()
        if s is None:
            return finish()
        for v in sorted(domains[s], key=lambda v: rank[v]):
            mark = len(trail)
            trail.append((s, domains[s]))
            domains[s] = {v}
            queue = list(atoms_by_term[s])
            if propagate(queue, set(queue), trail):
                h = search(trail)
                if h is not None:
                    return h
            undo(trail, mark)
        return None

    ### drop tests, in insertion order
    for d0 in range(n):
        if not movs_of[d0]:
            continue  # a ground atom can only map to itself
        if forced_on.get(d0):
            continue  # some atom's image is pinned onto d0
        dropped = d0
        trail: list = []
        queue: list[int] = []
        qset: set[int] = set()
        alive = True
        for k in bucket[keys[d0]]:
            if fimg[k] >= 0:
                continue
            bound = contrib(k, d0)
            if bound is None:
                continue
            cnts = supcnt[k]
            for s, t in bound.items():
                if cnts[s].get(t, 0) <= 1:
                    d = domains[s]
                    if t in d:
                        trail.append((s, d))
                        nd = set(d)
                        nd.discard(t)
                        domains[s] = nd
                        if not nd:
                            alive = False
                            break
                        for k2 in atoms_by_term[s]:
                            if k2 not in qset:
                                qset.add(k2)
                                queue.append(k2)
            if not alive:
                break
        if alive and propagate(queue, qset, trail):
            h = search(trail)
            if h is not None:
                undo(trail)
                return h
        undo(trail)
        dropped = -1
    return None


def has_homomorphism(source, target, base=None, movable=(VAR,)) -> bool:
    return bool(find_homomorphisms(source, target, base=base, limit=1,
                                   movable=movable))


def hom_equivalent(a, b) -> bool:
    """Homomorphisms both ways (nulls movable, constants fixed)."""
    a, b = as_instance(a), as_instance(b)
    return (has_homomorphism(a.atoms(), b, movable=(NULL,))
            and has_homomorphism(b.atoms(), a, movable=(NULL,)))


def isomorphic(a, b) -> bool:
    """Equal up to a bijective renaming of nulls."""
    a, b = as_instance(a), as_instance(b)
    if len(a) != len(b):
        return False
    for h in find_homomorphisms(a.atoms(), b, movable=(NULL,)):
        if len(set(h.values())) == len(h) and Instance(apply_atoms(h, a.atoms())) == b:
            return True
    return len(a) == 0


### cores

def core(instance) -> Instance:
    """Deterministic core by repeated proper retraction.

    Fast paths: ground instances are their own cores; if every null can
    be collapsed onto one constant the ground part is the core; single
    null folds shrink the instance cheaply.  The general loop then tries
    to drop one atom at a time via an endomorphism into the rest.
    """
    current = as_instance(instance).copy()
    nulls = current.nulls()
    if not nulls:
        return current

    # collapse-all-nulls-to-one-constant fast path
    for c in sorted(current.constants(), key=term_sort_key):
        h = {n: c for n in nulls}
        image = Instance(apply_atoms(h, current.atoms()))
        if all(a in current for a in image):
            return image

    # single-null folds (checking only the atoms that mention the null)
    changed = True
    while changed:
        changed = False
        by_term: dict[Term, list[Atom]] = {}
        for a in current:
            for t in set(a.args):
                by_term.setdefault(t, []).append(a)
        terms = sorted(current.terms(), key=term_rank)
        for n in sorted(current.nulls(), key=term_sort_key):
            touched = by_term[n]
            for t in terms:
                if t == n:
                    continue
                if all(apply_atom({n: t}, a) in current for a in touched):
                    current = Instance(apply_atoms({n: t}, current.atoms()))
                    changed = True
                    break
            if changed:
                break

    # general retraction loop: drop one atom via an endomorphism
    if not any(t.kind == "skolem" for a in current for t in a.args):
        while True:
            h = _self_retraction(current)
            if h is None:
                return current
            current = Instance(apply_atoms(h, current.atoms()))

    # fallback for instances carrying function terms
    while True:
        for a in current.atoms():
            if not any(t.kind == NULL for t in a.args):
                continue
            rest = current.copy()
            rest.discard(a)
            found = find_homomorphisms(current.atoms(), rest, limit=1,
                                       movable=(NULL,))
            if found:
                current = Instance(apply_atoms(found[0], current.atoms()))
                break
        else:
            return current


def is_core(instance) -> bool:
    return core(instance) == as_instance(instance)


### herbrand base, graphs

def herbrand_base(instance, schema, extra_constants=()) -> Instance:
    """Every atom formable over the schema from the instance's constants
    plus `extra_constants`.  `schema` maps relation name -> arity."""
    instance = as_instance(instance)
    if not isinstance(schema, dict):
        schema = dict(schema)
    domain = sorted(instance.constants() | set(extra_constants),
                    key=term_sort_key)
    out = Instance()
    for rel in schema:
        for args in itertools.product(domain, repeat=schema[rel]):
            out.add(Atom(rel, args))
    return out


_GRAPH_RELATIONS = {"E": (0, 2), "Estar": (0, 1), "L": (0, 1), "R": (0, 1)}


def instance_graph(instance) -> set[tuple[Term, Term]]:
    """Edge set over terms: E(x,z,y) contributes (x,y) (the middle label
    is projected out); Estar, L, R contribute their two endpoints;
    anything else is ignored."""
    edges = set()
    for a in as_instance(instance):
        proj = _GRAPH_RELATIONS.get(a.relation)
        if proj is not None and len(a.args) > max(proj):
            edges.add((a.args[proj[0]], a.args[proj[1]]))
    return edges


def is_cyclic(edges) -> bool:
    adj: dict = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, [])
    state = dict.fromkeys(adj, 0)  # 0 unseen, 1 on stack, 2 done
    for start in adj:
        if state[start]:
            continue
        stack = [(start, iter(adj[start]))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if state[nxt] == 1:
                    return True
                if state[nxt] == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(adj[nxt])))
                    break
            else:
                state[node] = 2
                stack.pop()
    return False


### unification (used by class analyzers)

def unify(pairs):
    """Most general unifier for term pairs, or None.  Handles compound
    (Skolem) terms duck-typed via .fn/.args; variables bind, constants
    and nulls only match themselves."""
    subst: dict = {}

    def walk(t):
        while t.kind != "skolem" and t in subst:
            t = subst[t]
        return t

    def occurs(v, t):
        t = walk(t)
        if t.kind == "skolem":
            return any(occurs(v, a) for a in t.args)
        return t == v

    work = list(pairs)
    while work:
        s, t = work.pop()
        s, t = walk(s), walk(t)
        if s == t:
            continue
        if s.kind == VAR:
            if occurs(s, t):
                return None
            subst[s] = t
        elif t.kind == VAR:
            if occurs(t, s):
                return None
            subst[t] = s
        elif s.kind == "skolem" and t.kind == "skolem":
            if s.fn != t.fn or len(s.args) != len(t.args):
                return None
            work.extend(zip(s.args, t.args))
        else:
            return None
    return subst


def resolve(subst: dict, t):
    """Fully apply a unifier produced by `unify` to a term."""
    if t.kind == "skolem":
        return type(t)(t.fn, tuple(resolve(subst, a) for a in t.args))
    seen = set()
    while t.kind != "skolem" and t in subst and t not in seen:
        seen.add(t)
        t = subst[t]
    if t.kind == "skolem":
        return resolve(subst, t)
    return t


### dependencies

@dataclass(frozen=True)
class Dependency:
    """A tgd (body → ∃ exists . head), an egd (body → eq[0]=eq[1]), or a
    denial constraint (body → false)."""
    kind: str                      # "tgd" | "egd" | "denial"
    body: tuple[Atom, ...]
    head: tuple[Atom, ...] = ()
    eq: tuple[Term, Term] | None = None
    exists: tuple[Term, ...] = ()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "exists", tuple(self.exists))

    @property
    def universals(self) -> tuple[Term, ...]:
        """Body variables, in first-occurrence order."""
        seen: dict[Term, None] = {}
        for a in self.body:
            for t in a.args:
                if t.kind == VAR:
                    seen.setdefault(t)
        return tuple(seen)

    @property
    def frontier(self) -> tuple[Term, ...]:
        """Universal variables that the conclusion mentions."""
        if self.kind == "egd":
            keep = set(t for t in self.eq if t.kind == VAR)
        elif self.kind == "denial":
            keep = set()
        else:
            ex = set(self.exists)
            keep = {t for a in self.head for t in a.args
                    if t.kind == VAR and t not in ex}
        return tuple(t for t in self.universals if t in keep)


def tgd(body, head, exists=(), label="") -> Dependency:
    return Dependency("tgd", tuple(body), tuple(head), None, tuple(exists), label)


def egd(body, s, t, label="") -> Dependency:
    return Dependency("egd", tuple(body), (), (s, t), (), label)


def denial(body, label="") -> Dependency:
    return Dependency("denial", tuple(body), (), None, (), label)
