"""String rewriting systems, bounded derivation exploration, and the
reduction from uniform SRS termination to chase termination.

A word w becomes the line instance I_w of E-atoms over fresh nulls; an
SRS becomes a dependency set whose core chase simulates the derivation
tree of w: theta rules graft a rewritten segment next to its context,
L/R rules copy the untouched prefix and suffix.  The full mode adds the
domain, transitive-closure, and saturation rules that collapse cyclic
instances; the denial mode swaps saturation for a constraint that fails
on cycles.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .model import (
    Atom, Instance, NULL, const, fresh_null, tgd, denial, var,
)
from .rewrite import TransformedSet

SCHEMA = {"E": 3, "L": 2, "R": 2, "D": 1, "Estar": 2}
DELTA = (const("0"), const("1"))


@dataclass(frozen=True)
class SRS:
    alphabet: tuple = ("0", "1")
    rules: tuple = ()  # ((lhs, rhs), ...)


### bounded derivation exploration

def rewrite_steps(word: str, srs: SRS) -> list:
    """All single-step rewrites as (rule, position, result), rules in
    declaration order, occurrences leftmost first."""
    out = []
    for rule in srs.rules:
        lhs, rhs = rule
        if lhs:
            positions = [p for p in range(len(word) - len(lhs) + 1)
                         if word[p:p + len(lhs)] == lhs]
        else:
            positions = list(range(len(word) + 1))  # every boundary
        for p in positions:
            out.append((rule, p, word[:p] + rhs + word[p + len(lhs):]))
    return out


@dataclass
class DerivationTree:
    word: str
    children: list = field(default_factory=list)  # (rule, position, subtree)

    def size(self) -> int:
        return 1 + sum(c.size() for _, _, c in self.children)

    def leaves(self):
        if not self.children:
            yield self
        for _, _, c in self.children:
            yield from c.leaves()


def derivation_tree(word: str, srs: SRS, depth: int, node_cap: int = 10_000):
    """The level-`depth` derivation tree; flag "complete" when every
    leaf is a normal form, "capped" when depth or node_cap cut it off.
    """
    root = DerivationTree(word)
    count = 1
    capped = False
    level = [root]
    for _ in range(depth):
        nxt = []
        for node in level:
            for rule, pos, result in rewrite_steps(node.word, srs):
                if count >= node_cap:
                    capped = True
                    break
                child = DerivationTree(result)
                node.children.append((rule, pos, child))
                nxt.append(child)
                count += 1
            if capped:
                break
        if capped:
            break
        level = nxt
    if not capped:
        capped = any(rewrite_steps(leaf.word, srs) for leaf in level)
    return root, ("capped" if capped else "complete")


def terminating_from(word: str, srs: SRS, fuel: int = 10_000) -> str:
    """"all_finite" when every derivation sequence from the word is
    finite (decided by exhausting the reachable word graph), "unknown"
    when a cycle shows up or the fuel runs out."""
    return "all_finite" if longest_derivation(word, srs, fuel) is not None \
        else "unknown"


def longest_derivation(word: str, srs: SRS, fuel: int = 10_000):
    """Length of the longest derivation from the word, or None when
    undetermined (cycle or fuel exhausted)."""
    status: dict = {}
    best: dict = {}
    budget = fuel

    def visit(w):
        nonlocal budget
        if status.get(w) == "done":
            return best[w]
        if status.get(w) == "open":
            return None
        if budget <= 0:
            return None
        budget -= 1
        status[w] = "open"
        deepest = 0
        for _, _, nxt in rewrite_steps(w, srs):
            sub = visit(nxt)
            if sub is None:
                return None
            deepest = max(deepest, sub + 1)
        status[w] = "done"
        best[w] = deepest
        return deepest

    return visit(word)


### words as instances and back

def word_to_instance(word: str) -> Instance:
    """The line instance: E(x0,a1,x1), ..., E(x_{n-1},an,xn) over
    pairwise-distinct fresh nulls."""
    nodes = [fresh_null() for _ in range(len(word) + 1)] if word else []
    return Instance(Atom("E", (nodes[i], const(ch), nodes[i + 1]))
                    for i, ch in enumerate(word))


def paths(instance, alphabet=("0", "1")) -> list:
    """All maximal paths: chains of E-atoms whose connector terms are
    pairwise-distinct nulls and whose labels are alphabet constants; a
    chain counts only if inextensible at both ends, and no other path's
    atom set strictly contains it."""
    labels = {const(a) for a in alphabet}
    cand = [a for a in instance
            if a.relation == "E" and len(a.args) == 3
            and a.args[0].kind == NULL and a.args[2].kind == NULL
            and a.args[0] != a.args[2] and a.args[1] in labels]
    by_src: dict = {}
    by_dst: dict = {}
    for a in cand:
        by_src.setdefault(a.args[0], []).append(a)
        by_dst.setdefault(a.args[2], []).append(a)
    found = []

    def grow(chain, used):
        last = chain[-1].args[2]
        exts = [a for a in by_src.get(last, ())
                if a.args[2] not in used]
        if exts:
            for a in exts:
                grow(chain + [a], used | {a.args[2]})
            return
        first = chain[0].args[0]
        if not any(a.args[0] not in used for a in by_dst.get(first, ())):
            found.append(tuple(chain))

    for a in cand:
        grow([a], {a.args[0], a.args[2]})
    # strict-superset filter (inextensibility almost always suffices,
    # but the definition is about containment)
    sets = [frozenset(c) for c in found]
    return [c for c, s in zip(found, sets)
            if not any(s < other for other in sets)]


def word_of_path(path) -> str:
    return "".join(a.args[1].label for a in path)


def words(instance, alphabet=("0", "1")) -> set:
    return {word_of_path(p) for p in paths(instance, alphabet)}


def star_instance(instance, alphabet=("0", "1")) -> Instance:
    """Fresh line instances for each distinct max-path word, unioned."""
    out = Instance()
    for w in sorted(words(instance, alphabet)):
        out.update(word_to_instance(w))
    return out


### the reduction

def reduce(srs: SRS, mode: str = "basic") -> TransformedSet:
    """basic: rewrite-simulation rules (theta) plus the four L/R copy
    rules; full: adds domain collection, transitive closure, and cycle
    saturation; denial: the cycle-failure variant (full minus
    saturation, plus Estar(x,x) -> false)."""
    if mode not in ("basic", "full", "denial"):
        raise ValueError(f"unknown reduction mode {mode!r}")
    deps, prov = [], []

    for k, (lhs, rhs) in enumerate(srs.rules):
        if not lhs:
            raise ValueError(
                "rules with an empty left-hand side have no reduction rule")
        n, m = len(lhs), len(rhs)
        xs = [var(f"x{i}") for i in range(n + 1)]
        body = [Atom("E", (xs[i], const(lhs[i]), xs[i + 1]))
                for i in range(n)]
        if m:
            ys = [var(f"y{i}") for i in range(m + 1)]
            head = ([Atom("L", (xs[0], ys[0]))]
                    + [Atom("E", (ys[i], const(rhs[i]), ys[i + 1]))
                       for i in range(m)]
                    + [Atom("R", (xs[n], ys[m]))])
        else:
            ys = [var("y0")]
            head = [Atom("L", (xs[0], ys[0])), Atom("R", (xs[n], ys[0]))]
        deps.append(tgd(body, head, ys))
        entry = {"rule": "theta", "source": k}
        if m == 0:
            entry["degenerate"] = True  # empty right side: L and R share a node
        prov.append(entry)

    x0, x1 = var("x0"), var("x1")
    y0, y1 = var("y0"), var("y1")
    z0, z1 = var("z0"), var("z1")
    for b in srs.alphabet:
        deps.append(tgd([Atom("E", (x0, const(b), x1)), Atom("L", (x1, y1))],
                        [Atom("L", (x0, y0)), Atom("E", (y0, const(b), y1))],
                        [y0]))
        prov.append({"rule": "lr", "name": f"L{b}"})
    for b in srs.alphabet:
        deps.append(tgd([Atom("R", (x0, z0)), Atom("E", (x0, const(b), x1))],
                        [Atom("E", (z0, const(b), z1)), Atom("R", (x1, z1))],
                        [z1]))
        prov.append({"rule": "lr", "name": f"R{b}"})

    if mode in ("full", "denial"):
        x, y, z = var("x"), var("y"), var("z")
        ad = [
            tgd([], [Atom("D", (const(b),)) for b in srs.alphabet]),
            tgd([Atom("E", (x, z, y))],
                [Atom("D", (x,)), Atom("D", (z,)), Atom("D", (y,))]),
            tgd([Atom("L", (x, y))], [Atom("D", (x,)), Atom("D", (y,))]),
            tgd([Atom("R", (x, y))], [Atom("D", (x,)), Atom("D", (y,))]),
            tgd([Atom("Estar", (x, y))], [Atom("D", (x,)), Atom("D", (y,))]),
        ]
        tc = [
            tgd([Atom("E", (x, z, y))], [Atom("Estar", (x, y))]),
            tgd([Atom("L", (x, y))], [Atom("Estar", (x, y))]),
            tgd([Atom("R", (x, y))], [Atom("Estar", (x, y))]),
            tgd([Atom("Estar", (x, y)), Atom("Estar", (y, z))],
                [Atom("Estar", (x, z))]),
        ]
        deps += ad
        prov += [{"rule": "ad"}] * len(ad)
        deps += tc
        prov += [{"rule": "tc"}] * len(tc)
        if mode == "full":
            v = var("v")
            sat = [
                tgd([Atom("Estar", (v, v)), Atom("D", (x,)), Atom("D", (z,)),
                     Atom("D", (y,))],
                    [Atom("E", (x, z, y))]),
                tgd([Atom("Estar", (v, v)), Atom("D", (x,)), Atom("D", (y,))],
                    [Atom("L", (x, y)), Atom("R", (x, y)),
                     Atom("Estar", (x, y))]),
            ]
            deps += sat
            prov += [{"rule": "sat"}] * len(sat)
        else:
            deps.insert(0, denial([Atom("Estar", (x, x))]))
            prov.insert(0, {"rule": "denial"})

    deps = [replace(d, label=f"t{i + 1}") for i, d in enumerate(deps)]
    return TransformedSet(deps, prov)


def calibrated_fuel(word: str, srs: SRS, depth: int) -> int:
    """Empirical fuel bound for simulating all depth-`depth` derivations
    of the word; recorded per fixture, not a theorem."""
    widest = max([len(word)] + [len(r) for _, r in srs.rules])
    return (depth + 1) * (widest + 2) ** 2
