"""Brute-force oracles: slow, independent reimplementations used to
validate the production algorithms at desk scale.

Everything here favors obvious exhaustive enumeration over cleverness;
none of it shares search machinery with the package.
"""

import itertools

from chasekit.model import (
    Atom, Instance, NULL, VAR, as_instance, null, term_sort_key,
)

### homomorphisms by exhaustive assignment

def _assignments(source, target, movable, base):
    source = list(source)
    base = dict(base or {})
    movables = []
    for a in source:
        for t in a.args:
            if t.kind in movable and t not in base and t not in movables:
                movables.append(t)
    values = sorted(target.terms(), key=term_sort_key)
    for combo in itertools.product(values, repeat=len(movables)):
        h = dict(base)
        h.update(zip(movables, combo))
        if all(Atom(a.relation, tuple(h.get(t, t) for t in a.args)) in target
               for a in source):
            yield h


def brute_homomorphisms(source, target, movable=(VAR,), base=None):
    """Every extension of `base` mapping source into target, found by
    trying all value assignments."""
    return list(_assignments(source, as_instance(target), movable, base))


def brute_exists_hom(source, target, movable=(VAR,), base=None) -> bool:
    """Existence-only variant: same enumeration, first hit wins."""
    for _ in _assignments(source, as_instance(target), movable, base):
        return True
    return False


def brute_satisfies(instance, deps) -> bool:
    """No active trigger, checked with brute homomorphism search."""
    instance = as_instance(instance)
    for d in deps:
        for h in brute_homomorphisms(d.body, instance):
            if d.kind == "denial":
                return False
            if d.kind == "egd":
                if h.get(d.eq[0], d.eq[0]) != h.get(d.eq[1], d.eq[1]):
                    return False
            elif not brute_exists_hom(d.head, instance, base=h):
                return False
    return True


### cores

def brute_is_core(instance) -> bool:
    """No endomorphism shrinks the instance."""
    inst = as_instance(instance)
    atoms = inst.atoms()
    for h in _assignments(atoms, inst, (NULL,), None):
        image = {Atom(a.relation, tuple(h.get(t, t) for t in a.args))
                 for a in atoms}
        if len(image) < len(inst):
            return False
    return True


def brute_core_size(instance) -> int:
    """Size of the smallest sub-instance the whole instance maps into
    (the size of the core)."""
    inst = as_instance(instance)
    atoms = inst.atoms()
    for k in range(len(atoms) + 1):
        for keep in itertools.combinations(atoms, k):
            if brute_exists_hom(atoms, Instance(keep), movable=(NULL,)):
                return k
    return len(atoms)


### precedence between tgds, straight from the defining scenario

def brute_idempotent_fold(xi) -> bool:
    """A homomorphism from xi's head into its body that fixes every
    value it produces — such a tgd never adds a genuinely new atom."""
    body = Instance(xi.body)
    for h in _assignments(xi.head, body, (VAR,), None):
        if all(h.get(w, w) == w for w in h.values() if w.kind == VAR):
            return True
    return False


def brute_precedes(xi1, xi2, mode="c") -> bool:
    """Witness search for "firing xi1 can break a satisfied xi2".

    Enumerates canonical value assignments for both tgds' universal
    variables (the second may also name the fresh nulls the firing will
    introduce), takes as witness the first body's image plus whatever of
    the second body's image the step does not provide, and accepts when
    the step completes the second body yet no completion of the second
    head fits inside the enlarged instance.  mode "str" additionally
    requires the firing trigger to be active on the witness and the
    first tgd's head not to fold idempotently into its own body.
    """
    if mode not in ("c", "str"):
        raise ValueError(f"unknown precedence mode {mode!r}")
    if mode == "str" and brute_idempotent_fold(xi1):
        return False
    u1, e1, u2 = list(xi1.universals), list(xi1.exists), list(xi2.universals)
    vals = [null(f"v{i}") for i in range(len(u1) + len(u2))]
    fresh = [null(f"w{i}") for i in range(len(e1))]
    fresh_set = set(fresh)

    def image(atoms, h):
        return [Atom(a.relation, tuple(h.get(t, t) for t in a.args))
                for a in atoms]

    def canon_maps(vars_, fixed, pool):
        """Maps var -> a fixed value or a canonical new value from pool;
        new values enter in pool order, so each identification pattern
        shows up exactly once."""
        out = []
        cur = {}

        def go(i, new_count):
            if i == len(vars_):
                out.append(dict(cur))
                return
            for v in list(fixed) + pool[:new_count]:
                cur[vars_[i]] = v
                go(i + 1, new_count)
            if new_count < len(pool):
                cur[vars_[i]] = pool[new_count]
                go(i + 1, new_count + 1)
            cur.pop(vars_[i], None)

        go(0, 0)
        return out

    for g1 in canon_maps(u1, [], vals):
        body1 = image(xi1.body, g1)
        step = image(xi1.head, {**g1, **dict(zip(e1, fresh))})
        step_set = set(step)
        used = []
        for v in g1.values():
            if v not in used:
                used.append(v)
        for g2 in canon_maps(u2, used + fresh, vals[len(used):]):
            body2 = image(xi2.body, g2)
            need = [a for a in body2 if a not in step_set]
            # atoms the witness supplies may not mention fresh nulls
            if any(t in fresh_set for a in need for t in a.args):
                continue
            i_atoms = set(body1) | set(need)
            if all(a in i_atoms for a in body2):
                continue  # the step adds nothing the second body needs
            witness_j = Instance(i_atoms | step_set)
            if brute_exists_hom(xi2.head, witness_j, base=g2):
                continue  # the second head still completes after the step
            if mode == "str" and brute_exists_hom(
                    xi1.head, Instance(i_atoms), base=g1):
                continue  # firing trigger was not active
            return True
    return False


### maximal line paths

def brute_paths_words(instance, alphabet=("0", "1")) -> set:
    """Words of all maximal E-chains, by enumerating every chain."""
    inst = as_instance(instance)
    labels = set(alphabet)
    cand = [a for a in inst
            if a.relation == "E" and len(a.args) == 3
            and a.args[0].kind == NULL and a.args[2].kind == NULL
            and a.args[0] != a.args[2] and a.args[1].kind == "const"
            and a.args[1].label in labels]
    chains = []

    def extend(chain, used):
        chains.append(tuple(chain))
        for a in cand:
            if a.args[0] == chain[-1].args[2] and a.args[2] not in used:
                extend(chain + [a], used | {a.args[2]})

    for a in cand:
        extend([a], {a.args[0], a.args[2]})
    # keep chains inextensible at both ends, then drop any whose atom
    # set is strictly contained in another inextensible chain's
    full = []
    for c in chains:
        used = {c[0].args[0]} | {a.args[2] for a in c}
        if any(a.args[0] == c[-1].args[2] and a.args[2] not in used
               for a in cand):
            continue
        if any(a.args[2] == c[0].args[0] and a.args[0] not in used
               for a in cand):
            continue
        full.append(c)
    sets = [frozenset(c) for c in full]
    return {"".join(a.args[1].label for a in c)
            for c, s in zip(full, sets)
            if not any(s < other for other in sets)}


### bounded model enumeration

def brute_models(instance, deps, schema, domain):
    """All instances over `domain` (plus every atom of the base
    instance) that satisfy deps and admit a homomorphism from the base
    instance.  Exponential in the atom space; keep the schema tiny."""
    instance = as_instance(instance)
    space = []
    for rel, arity in schema.items():
        for args in itertools.product(domain, repeat=arity):
            space.append(Atom(rel, args))
    out = []
    for bits in itertools.product((False, True), repeat=len(space)):
        j = Instance(a for a, b in zip(space, bits) if b)
        if not brute_satisfies(j, deps):
            continue
        if brute_exists_hom(instance.atoms(), j, movable=(NULL,)):
            out.append(j)
    return out
