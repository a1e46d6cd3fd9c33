"""Dependency-set transforms: egd elimination, enrichment,
semi-enrichment, and the two Skolemization flavors.

Each transform returns a TransformedSet whose provenance records, one
per output dependency, say where it came from.  Fresh relation symbols
(Eq for the egd rewriting, H<k> for enrichment) are suffixed with
underscores until they avoid the input schema.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Atom, Dependency, apply_atom, tgd, var


@dataclass(frozen=True)
class SkolemTerm:
    """Function term f(args) standing in for an existential variable in
    the logic-program view of a tgd set."""
    fn: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        object.__setattr__(self, "_hash", hash((self.fn, self.args)))

    def __hash__(self):
        return self._hash

    @property
    def kind(self):
        return "skolem"

    def __repr__(self):
        return f"{self.fn}({','.join(map(repr, self.args))})"


@dataclass
class TransformedSet:
    deps: list
    provenance: list  # aligned with deps; {"rule": ..., "source": input index}

    def __iter__(self):
        return iter(self.deps)

    def __len__(self):
        return len(self.deps)


def _fresh_symbol(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "_"
    return name


def _schema(deps) -> dict[str, int]:
    """Relation -> arity over bodies and heads, first-use order."""
    out: dict[str, int] = {}
    for d in deps:
        for a in list(d.body) + list(d.head):
            out.setdefault(a.relation, len(a.args))
    return out


### egd elimination

def egds_to_tgds(deps) -> TransformedSet:
    """Replace each egd α → x=y by α → Eq(x,y), Eq(y,x) and, when the
    input had any egd at all, add for every relation R of the input and
    every position i the substitution tgd
    R(x1..xn), Eq(xi, y) → R(x1.. y at i ..xn)."""
    deps = list(deps)
    if any(d.kind == "denial" for d in deps):
        raise ValueError("denial constraints have no tgd rewriting")
    schema = _schema(deps)
    has_egd = any(d.kind == "egd" for d in deps)
    eq = _fresh_symbol("Eq", set(schema))
    out, prov = [], []
    for i, d in enumerate(deps):
        if d.kind == "tgd":
            out.append(tgd(d.body, d.head, d.exists, f"t{len(out) + 1}"))
            prov.append({"rule": "copy", "source": i})
        else:
            s, t = d.eq
            head = (Atom(eq, (s, t)), Atom(eq, (t, s)))
            out.append(tgd(d.body, head, (), f"t{len(out) + 1}"))
            prov.append({"rule": "egd-encoding", "source": i})
    if has_egd:
        for rel, arity in schema.items():
            for i in range(arity):
                xs = [var(f"x{j + 1}") for j in range(arity)]
                y = var("y")
                body = (Atom(rel, tuple(xs)), Atom(eq, (xs[i], y)))
                head_args = list(xs)
                head_args[i] = y
                out.append(tgd(body, (Atom(rel, tuple(head_args)),), (),
                               f"t{len(out) + 1}"))
                prov.append({"rule": "substitution", "relation": rel,
                             "position": i + 1, "source": None})
    return TransformedSet(out, prov)


### enrichment

def enrich(deps) -> TransformedSet:
    """Append H<k>(all universal variables) to each head."""
    return _enrich(deps, frontier_only=False)


def semi_enrich(deps) -> TransformedSet:
    """Append H<k>(frontier variables) to each head (H<k>() when the
    frontier is empty)."""
    return _enrich(deps, frontier_only=True)


def _enrich(deps, frontier_only):
    deps = list(deps)
    if any(d.kind != "tgd" for d in deps):
        raise ValueError("enrichment is defined for tgd sets only")
    taken = set(_schema(deps))
    out, prov = [], []
    rule = "semi-enrich" if frontier_only else "enrich"
    for i, d in enumerate(deps):
        h = _fresh_symbol(f"H{i + 1}", taken)
        taken.add(h)
        args = d.frontier if frontier_only else d.universals
        out.append(tgd(d.body, d.head + (Atom(h, args),), d.exists,
                       f"t{i + 1}"))
        prov.append({"rule": rule, "source": i, "marker": h})
    return TransformedSet(out, prov)


### Skolemization

def skolemize(deps, flavor="obl") -> TransformedSet:
    """Replace each existential variable by a function term over the
    body variables (obl) or the frontier (sobl).  The result is the
    logic-program view used by the analyzers; it is not surface syntax.
    """
    if flavor not in ("obl", "sobl"):
        raise ValueError(f"unknown Skolemization flavor {flavor!r}")
    deps = list(deps)
    if any(d.kind != "tgd" for d in deps):
        raise ValueError("Skolemization is defined for tgd sets only")
    out, prov = [], []
    for i, d in enumerate(deps):
        base = d.frontier if flavor == "sobl" else d.universals
        sub = {z: SkolemTerm(f"f{i + 1}_{z.label}", tuple(base))
               for z in d.exists}
        head = tuple(apply_atom(sub, a) for a in d.head)
        out.append(tgd(d.body, head, (), f"t{i + 1}"))
        prov.append({"rule": f"skolem-{flavor}", "source": i})
    return TransformedSet(out, prov)
