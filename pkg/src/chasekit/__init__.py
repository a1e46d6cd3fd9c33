"""Chase procedures over embedded dependencies, termination analyzers,
and a word-rewriting-to-chase reduction."""

from .model import (
    Atom, Dependency, Instance, Term,
    atom, const, core, denial, egd, fresh_null, herbrand_base,
    hom_equivalent, instance_graph, is_cyclic, null, tgd, var,
    find_homomorphisms, render_atom, render_term,
)
from .chase import ChaseConfig, ChaseOutcome, Trigger, run, explore_branches
from .dsl import (
    parse_dependencies, parse_instance, parse_srs,
    render_dependencies, render_dependency, render_instance, render_srs,
)

__all__ = [
    "Atom", "Dependency", "Instance", "Term", "Trigger",
    "ChaseConfig", "ChaseOutcome",
    "atom", "const", "core", "denial", "egd", "explore_branches",
    "find_homomorphisms", "fresh_null", "herbrand_base", "hom_equivalent",
    "instance_graph", "is_cyclic", "null", "parse_dependencies",
    "parse_instance", "parse_srs", "render_atom", "render_dependencies",
    "render_dependency", "render_instance", "render_srs", "render_term",
    "run", "tgd", "var",
]
