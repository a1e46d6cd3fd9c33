"""Shared fixtures: named dependency sets with expected class verdicts,
chase showcases, the tgd pool for the precedence cross-check, the
marker-transform fixture pairs, and seeded random generators.

Everything textual goes through the surface syntax on purpose: loading
this module exercises the parser on every fixture in the repo.
"""

from chasekit.classes import is_ra, is_sd, is_sw, is_swa, is_wa
from chasekit.dsl import parse_dependencies, parse_instance
from chasekit.model import (
    Atom, Instance, const, instance_graph, is_cyclic, null, tgd, var,
)
from chasekit.srs import SCHEMA, SRS
from chasekit.strat import is_c_stratified, is_ir, is_stratified


def deps(text):
    return list(parse_dependencies(text))


def inst(text):
    return parse_instance(text)


### termination-class showcases

CLASS_SETS = {
    # one tgd extending rows in place: R(a,b) spawns R(a,z)
    "extend_first": "R(x,y) -> exists z . R(x,z)",
    # one tgd walking right: R(a,b) spawns R(b,z)
    "shift_second": "R(x,y) -> exists z . R(y,z)",
    # the walk only continues from tagged values
    "guarded_shift": "S(y), R(x,y) -> exists z . R(y,z)",
    # diagonal rows fan out once
    "diag_extend": "R(x,x) -> exists y . R(x,y)",
    # tag sits on the first column, walk moves off it
    "tag_shift": "S(x), R(x,y) -> exists z . R(y,z)",
    # a diagonal spawns a tag which reflects back into R
    "diag_then_swap": ("R(x,x) -> exists z . S(x,z)\n"
                       "R(x,y), S(x,z) -> R(z,x)"),
    # every row spawns a reversed fresh row
    "swap_extend": "R(x,y) -> exists z . R(z,x)",
    # tagged edges mirror back or fork into a 2-cycle
    "mirror_or_fork": ("S(x), E(x,y) -> E(y,x)\n"
                       "S(x), E(x,y) -> exists z . E(y,z), E(z,x)"),
    # ternary rotation guarded by a tag on the middle column
    "rotate_guarded": "R(x,y,z), S(y) -> exists w . R(y,w,x)",
    # plain projection into a fresh column
    "copy_head": "S(x,y) -> exists z . R(x,z)",
    # projection plus a diagonal feedback into the projected relation
    "copy_then_diag": ("S(x,y) -> exists z . R(x,z)\n"
                       "R(x,y) -> S(x,x)"),
    # unary tags fan out one edge each
    "fan_out": "S(x) -> exists y . R(x,y)",
}

ANALYZERS = {
    "sw": is_sw,
    "ra": is_ra,
    "wa": is_wa,
    "sd": is_sd,
    "swa": is_swa,
    "str": is_stratified,
    "cstr": is_c_stratified,
    "ir": is_ir,
}

# (fixture, class, expected membership) — the frozen verdict table
CLASS_VERDICTS = [
    ("extend_first", "wa", True),
    ("extend_first", "sd", True),
    ("extend_first", "swa", True),
    ("extend_first", "cstr", True),
    ("extend_first", "ra", False),
    ("shift_second", "wa", False),
    ("guarded_shift", "wa", False),
    ("diag_extend", "sd", False),
    ("tag_shift", "swa", False),
    ("diag_then_swap", "str", True),
    ("swap_extend", "str", False),
    ("mirror_or_fork", "cstr", False),
    ("mirror_or_fork", "ir", True),
    ("rotate_guarded", "wa", False),
    ("rotate_guarded", "sd", True),
    ("copy_head", "sw", True),
    ("copy_then_diag", "sw", False),
    ("fan_out", "ra", True),
]


### chase showcases: (dependency text, instance text)

CHASE_CASES = {
    # unbounded for obl, one step for sobl (frontier class {x})
    "extend_first": ("R(x,y) -> exists z . R(x,z)", "R('a','b')"),
    # already satisfied for std, unbounded for sobl
    "shift_loop": ("S(x,y) -> exists z . S(y,z)", "S('a','a')"),
    # order decides: closing the diagonal first terminates,
    # chasing fresh tails forever does not
    "branch_mix": ("R(x,y) -> R(y,y)\nR(x,y) -> exists z . R(y,z)",
                   "R('a','b')"),
    # every std branch loops, the parallel-and-core round closes in one
    "fresh_then_copy": ("R(x) -> exists z . R(z), S(x)", "R('a')"),
    # one order hits an unsatisfiable equality, the other runs forever
    "merge_then_fail": ("R(x,y) -> T(y,x)\nT(x,y) -> x = y\n"
                        "R(x,y) -> exists z . R(y,z)", "R('a','b')"),
    # the diagonal atom closes the walk that the chain atom opens;
    # listing the full rule first lets the fifo driver reach it before
    # the chain spawns a fresh tail (the swapped order never terminates)
    "close_the_chain": ("R(x) -> S(x,x)\nS(x,y) -> exists z . S(y,z)",
                        "S('a','b'), R('b')"),
    # two body matches, both already satisfied
    "two_triggers": ("R(x,y) -> exists z . S(x,z)",
                     "R('a','b'), R('a','c'), S('a','d')"),
}


### tgd pool for the precedence cross-check (≤3 atoms, ≤4 variables each)

PRECEDENCE_POOL_TEXT = """\
R(x,y) -> exists z . R(y,z)
R(x,y) -> exists z . R(x,z)
R(x,x) -> exists z . S(x,z)
R(x,y), S(x,z) -> R(z,x)
R(x,y) -> exists z . R(z,x)
P(x), E(x,y) -> E(y,x)
E(x,y) -> exists z . E(y,z), E(z,x)
R(x,y) -> P(x)
P(x) -> R(x,x)
R(x,y) -> R(y,y)
T(x,y), T(y,z) -> T(x,z)
R(x,y), R(y,z) -> exists w . R(z,w)
E(x,y) -> exists z . E(y,z)
P(x) -> exists y . E(x,y)
P(x) -> exists u, v . T(u,v)
"""


### fixture pairs for the marker transforms (deps text, instance text)

MARKER_PAIRS = [
    ("R(x,y) -> exists z . R(x,z)", "R('a','b')"),
    ("R(x,y) -> exists z . R(x,z)", "R('a','a')"),
    ("R(x,y) -> exists z . R(y,z)", "R('a','b')"),
    ("R(x,y) -> exists z . R(y,z)", ""),
    ("R(x,y) -> R(y,x)", "R('a','b')"),
    ("R(x,y) -> exists z . S(x,z)", "R('a','b')"),
    ("R(x,y) -> exists z . S(x,z)\nS(x,y) -> T(x)",
     "R('a','b'), R('b','c')"),
    ("S(y), R(x,y) -> exists z . R(y,z)", "R('a','b'), S('b')"),
    ("S(y), R(x,y) -> exists z . R(y,z)", "R('a','b'), S('b'), S('a')"),
    ("R(x,x) -> exists y . R(x,y)", "R('a','a')"),
    ("S(x), R(x,y) -> exists z . R(y,z)", "S('a'), R('a','b')"),
    ("R(x,x) -> exists z . S(x,z)\nR(x,y), S(x,z) -> R(z,x)", "R('a','a')"),
    ("R(x,y) -> exists z . R(z,x)", "R('a','b')"),
    ("P(x), E(x,y) -> E(y,x)\nP(x), E(x,y) -> exists z . E(y,z), E(z,x)",
     "P('a'), E('a','b')"),
    ("S(x) -> exists y . E(x,y)\nE(x,y) -> S(y)", "S('a')"),
    ("R(x) -> exists z . R(z), S(x)", "R('a')"),
    ("T(x,y), T(y,z) -> T(x,z)", "T('a','b'), T('b','c'), T('c','a')"),
    ("R(x,y,z), S(y) -> exists w . R(y,w,x)", "R('a','b','c'), S('b')"),
    ("S(x,y) -> exists z . R(x,z)\nR(x,y) -> S(x,x)", "S('a','b')"),
    ("", "R('a','b')"),
    ("E(x,y) -> exists z . E(y,z)", "E('a','b')"),
    ("R(x,y) -> R(y,y)\nR(x,y) -> exists z . R(y,z)", "R('a','b')"),
]


### universal-model fixtures: std chase terminates on each pair; the
### first two carry a schema small enough for whole-model enumeration

UNIVERSAL_CASES = [
    ("R(x) -> exists z . S(z)", "R('a')", {"R": 1, "S": 1}),
    ("R(x) -> S(x)\nS(x) -> exists y . T(y)", "R('a')",
     {"R": 1, "S": 1, "T": 1}),
    ("R(x,y) -> exists z . S(x,z)", "R('a','b')", None),
    ("R(x,y) -> R(y,x)", "R('a','b')", None),
    ("T(x,y), T(y,z) -> T(x,z)", "T('a','b'), T('b','c')", None),
    ("R(x,y) -> T(y,x)\nT(x,y) -> x = y", "R('a','a')", None),
    ("R(x,y) -> exists z . R(x,z)", "R('a','b')", None),
    ("S(y), R(x,y) -> exists z . R(y,z)", "R('a','b'), S('b')", None),
    ("R(x,y) -> exists u . T(x,u), T(u,y)", "R('a','b')", None),
    ("S(x) -> exists y . E(x,y)\nE(x,y) -> T(x,y)", "S('a')", None),
]


### seeded random generators

def random_instance(rng, max_atoms=8):
    """Small instance over a mixed-arity schema with shared nulls."""
    rels = {"R": 2, "S": 1, "T": 3}
    terms = [const("a"), const("b"),
             null("m1"), null("m2"), null("m3"), null("m4")]
    atoms = set()
    for _ in range(rng.randint(1, max_atoms)):
        rel = rng.choice(sorted(rels))
        atoms.add(Atom(rel, tuple(rng.choice(terms)
                                  for _ in range(rels[rel]))))
    return Instance(atoms)


def random_tgd_set(rng, max_deps=4):
    """Well-formed random tgds: heads draw from body variables plus up
    to two declared existentials."""
    rels = {"R": 2, "S": 1, "T": 3}
    pool = [var("x"), var("y"), var("z")]
    extra = [var("u"), var("w")]
    out = []
    for i in range(rng.randint(1, max_deps)):
        body = [Atom(rel, tuple(rng.choice(pool) for _ in range(rels[rel])))
                for rel in (rng.choice(sorted(rels))
                            for _ in range(rng.randint(1, 2)))]
        bound = []
        for a in body:
            for t in a.args:
                if t not in bound:
                    bound.append(t)
        allowed = bound + (extra if rng.random() < 0.7 else [])
        head = [Atom(rel, tuple(rng.choice(allowed)
                                for _ in range(rels[rel])))
                for rel in (rng.choice(sorted(rels))
                            for _ in range(rng.randint(1, 2)))]
        used = [t for t in extra if any(t in a.args for a in head)]
        out.append(tgd(body, head, used, label=f"g{i + 1}"))
    return out


def random_cyclic_seed(rng, max_atoms=6):
    """Ground instance over the word-reduction schema whose term graph
    has a cycle."""
    pool = [const("0"), const("1"), const("c")]
    while True:
        atoms = set()
        for _ in range(rng.randint(3, max_atoms)):
            rel = rng.choice(sorted(SCHEMA))
            atoms.add(Atom(rel, tuple(rng.choice(pool)
                                      for _ in range(SCHEMA[rel]))))
        candidate = Instance(atoms)
        if is_cyclic(instance_graph(candidate)):
            return candidate


### word-rewriting fixtures

SRS_ONE_TO_ZERO = SRS(("0", "1"), (("1", "0"),))
SRS_ZERO_TO_ONE = SRS(("0", "1"), (("0", "1"),))
SRS_ZERO_GROWS = SRS(("0", "1"), (("0", "00"),))
