"""Triggers, chase steps, and the four chase-variant drivers.

Variants: std fires only active triggers; obl fires every trigger once;
sobl fires one trigger per (dependency, frontier-image) class; core
alternates single egd repairs with parallel firing of all active tgd
triggers followed by taking the core.

Fuel meters fired triggers across all variants (a parallel core batch of
k triggers costs k), so step counts line up across variants.  FIFO is
the fair default strategy; random:SEED replays a seeded uniform pick
among the currently eligible triggers.
"""

from __future__ import annotations

import random as _random
from collections import deque
from dataclasses import dataclass, field

from .model import (
    Atom, Dependency, Instance, NULL,
    apply_atom, apply_atoms, apply_term, as_instance, compose, core,
    find_homomorphisms, fresh_null, register_null_labels, term_rank,
)

### triggers

@dataclass
class Trigger:
    dependency: Dependency
    hom: dict
    index: int = -1  # position of dependency in the input list

    def images(self):
        return tuple(self.hom[x] for x in self.dependency.universals)

    @property
    def obl_key(self):
        return (self.index, self.images())

    @property
    def sobl_key(self):
        return (self.index,
                tuple(self.hom[x] for x in self.dependency.frontier))


@dataclass
class Failure:
    reason: str
    trigger: Trigger | None = None


def triggers(instance, deps) -> list[Trigger]:
    """All triggers (dependency, body-homomorphism) on the instance, in
    dependency order then homomorphism discovery order."""
    instance = as_instance(instance)
    out = []
    for i, d in enumerate(deps):
        for h in find_homomorphisms(d.body, instance):
            out.append(Trigger(d, h, i))
    return out


def is_active(trigger: Trigger, instance) -> bool:
    d = trigger.dependency
    if d.kind == "denial":
        return True
    if d.kind == "egd":
        return (apply_term(trigger.hom, d.eq[0])
                != apply_term(trigger.hom, d.eq[1]))
    return not find_homomorphisms(d.head, as_instance(instance),
                                  base=trigger.hom, limit=1)


def fire(trigger: Trigger, instance):
    """Apply one chase step; returns the new Instance, or a Failure
    value on an egd constant clash or a denial."""
    result = _fire(trigger, as_instance(instance))
    return result if isinstance(result, Failure) else result[0]


def _fire(trigger: Trigger, instance: Instance):
    """Returns (instance', added_atoms, merge_subst) or Failure."""
    d = trigger.dependency
    if d.kind == "denial":
        return Failure("denial constraint fired", trigger)
    if d.kind == "egd":
        a = apply_term(trigger.hom, d.eq[0])
        b = apply_term(trigger.hom, d.eq[1])
        if a == b:
            return instance, (), None
        if a.kind != NULL and b.kind != NULL:
            return Failure(f"cannot equate constants {a.label} and {b.label}",
                           trigger)
        keep, drop = sorted((a, b), key=term_rank)
        subst = {drop: keep}
        return Instance(apply_atoms(subst, instance.atoms())), (), subst
    h2 = dict(trigger.hom)
    for z in d.exists:
        h2[z] = fresh_null()
    added = apply_atoms(h2, d.head)
    new = instance.copy()
    new.update(added)
    return new, tuple(added), None


### configuration and outcomes

@dataclass
class ChaseConfig:
    variant: str = "std"            # std | obl | sobl | core
    strategy: str = "fifo"          # fifo | random:SEED
    fuel: int | None = 10_000       # None = unbounded

    def __post_init__(self):
        if self.variant not in ("std", "obl", "sobl", "core"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.strategy != "fifo" and not self.strategy.startswith("random"):
            raise ValueError(f"unknown strategy {self.strategy!r}")

    def seed(self):
        _, _, s = self.strategy.partition(":")
        return int(s) if s else 0


@dataclass
class ChaseOutcome:
    status: str                     # terminated | failed | fuel_exhausted
    result: Instance                # final instance (partial when not terminated)
    steps: int
    trace: list = field(default_factory=list)
    merges: dict = field(default_factory=dict)
    failure: Failure | None = None


def satisfies(instance, deps) -> bool:
    """True iff no trigger is active (the instance models the set)."""
    instance = as_instance(instance)
    return all(not is_active(t, instance) for t in triggers(instance, deps))


### driver helpers

def _remap_key(key, subst):
    idx, images = key
    return (idx, tuple(apply_term(subst, t) for t in images))


def _trigger_key(tr: Trigger, variant: str):
    return tr.sobl_key if variant == "sobl" else tr.obl_key


def run(instance, deps, config: ChaseConfig | None = None) -> ChaseOutcome:
    config = config or ChaseConfig()
    instance = as_instance(instance)
    register_null_labels(t.label for t in instance.nulls())
    if config.variant == "core":
        return _run_core(instance, deps, config.fuel)
    if config.strategy == "fifo":
        return _run_fifo(instance, deps, config.variant, config.fuel)
    return _run_random(instance, deps, config.variant, config.fuel,
                       config.seed())


def _run_fifo(instance, deps, variant, fuel):
    inst = instance.copy()
    queue: deque[Trigger] = deque()
    enqueued: set = set()
    merges: dict = {}
    steps = 0
    trace: list = []

    def enqueue_new():
        for tr in triggers(inst, deps):
            k = _trigger_key(tr, variant)
            if k not in enqueued:
                enqueued.add(k)
                queue.append(tr)

    enqueue_new()
    while queue:
        tr = queue.popleft()
        if variant == "std" and not is_active(tr, inst):
            continue
        if variant in ("obl", "sobl") and tr.dependency.kind == "egd" \
                and not is_active(tr, inst):
            # already-equal sides: firing is a no-op; still consumes the key
            continue
        if fuel is not None and steps >= fuel:
            return ChaseOutcome("fuel_exhausted", inst, steps, trace, merges)
        result = _fire(tr, inst)
        if isinstance(result, Failure):
            trace.append({"step": steps + 1, "dep": tr.dependency.label,
                          "action": "fail", "reason": result.reason})
            return ChaseOutcome("failed", inst, steps + 1, trace, merges,
                                failure=result)
        inst, added, subst = result
        steps += 1
        if subst:
            merges = compose(subst, merges)
            enqueued = {_remap_key(k, subst) for k in enqueued}
            requeued, seen = deque(), set()
            for old in queue:
                h2 = {v: apply_term(subst, t) for v, t in old.hom.items()}
                tr2 = Trigger(old.dependency, h2, old.index)
                k = _trigger_key(tr2, variant)
                if k not in seen:
                    seen.add(k)
                    requeued.append(tr2)
            queue = requeued
            pair = tuple(subst.items())[0]
            trace.append({"step": steps, "dep": tr.dependency.label,
                          "action": "merge",
                          "detail": f"{pair[0].label} -> {pair[1].label}"})
        else:
            trace.append({"step": steps, "dep": tr.dependency.label,
                          "action": "fire", "added": len(added)})
        enqueue_new()
    return ChaseOutcome("terminated", inst, steps, trace, merges)


def _run_random(instance, deps, variant, fuel, seed):
    rng = _random.Random(seed)
    inst = instance.copy()
    fired: set = set()
    merges: dict = {}
    steps = 0
    trace: list = []
    while True:
        eligible = []
        for tr in triggers(inst, deps):
            if _trigger_key(tr, variant) in fired:
                continue
            if variant == "std" and not is_active(tr, inst):
                continue
            eligible.append(tr)
        if not eligible:
            return ChaseOutcome("terminated", inst, steps, trace, merges)
        if fuel is not None and steps >= fuel:
            return ChaseOutcome("fuel_exhausted", inst, steps, trace, merges)
        tr = rng.choice(eligible)
        fired.add(_trigger_key(tr, variant))
        result = _fire(tr, inst)
        if isinstance(result, Failure):
            trace.append({"step": steps + 1, "dep": tr.dependency.label,
                          "action": "fail", "reason": result.reason})
            return ChaseOutcome("failed", inst, steps + 1, trace, merges,
                                failure=result)
        inst, added, subst = result
        steps += 1
        if subst:
            merges = compose(subst, merges)
            fired = {_remap_key(k, subst) for k in fired}
            trace.append({"step": steps, "dep": tr.dependency.label,
                          "action": "merge"})
        else:
            trace.append({"step": steps, "dep": tr.dependency.label,
                          "action": "fire", "added": len(added)})


### core chase

def core_chase_step(instance, deps):
    """One core-chase round: if an active egd or denial trigger exists,
    fire exactly one; otherwise fire every active tgd trigger against
    the same input instance (fresh nulls disjoint) and take the core of
    the union.  Returns (instance, fixpoint_flag) or Failure."""
    result = _core_step(as_instance(instance), deps, None)
    if isinstance(result, Failure):
        return result
    inst, fired, exhausted = result
    return inst, fired == 0


def _core_step(instance: Instance, deps, budget):
    """Returns (instance', fired_count, exhausted_flag) or Failure; fires
    at most `budget` triggers (None = unbounded), skipping the final
    core() when the tgd batch is cut short."""
    all_triggers = triggers(instance, deps)
    tgds = []
    for tr in all_triggers:
        kind = tr.dependency.kind
        if kind == "denial":
            return Failure("denial constraint fired", tr)
        if kind == "egd" and is_active(tr, instance):
            if budget is not None and budget < 1:
                return instance, 0, True
            result = _fire(tr, instance)
            if isinstance(result, Failure):
                return result
            return result[0], 1, False
        if kind == "tgd" and is_active(tr, instance):
            tgds.append(tr)
    if not tgds:
        return instance, 0, False
    cut = budget is not None and len(tgds) > budget
    if cut:
        tgds = tgds[:budget]
    union = instance.copy()
    for tr in tgds:
        union, _, _ = _fire(tr, union)
    if cut:
        return union, len(tgds), True
    return core(union), len(tgds), False


def _run_core(instance, deps, fuel):
    inst = instance.copy()
    steps = 0
    fired_total = 0
    trace: list = []
    while True:
        budget = None if fuel is None else fuel - fired_total
        result = _core_step(inst, deps, budget)
        if isinstance(result, Failure):
            trace.append({"step": steps + 1, "action": "fail",
                          "reason": result.reason})
            return ChaseOutcome("failed", inst, steps + 1, trace,
                                failure=result)
        inst, fired, exhausted = result
        if fired:
            steps += 1
            fired_total += fired
            trace.append({"step": steps, "action": "core", "fired": fired,
                          "size": len(inst)})
        if exhausted:
            return ChaseOutcome("fuel_exhausted", inst, steps, trace)
        if not fired:
            return ChaseOutcome("terminated", inst, steps, trace)


### branch exploration

@dataclass
class BranchSummary:
    outcomes: list[ChaseOutcome]
    terminated: int
    failed: int
    fuel_exhausted: int
    truncated: bool

    @property
    def total(self):
        return self.terminated + self.failed + self.fuel_exhausted


def explore_branches(instance, deps, variant="std", fuel=20,
                     max_branches=1000) -> BranchSummary:
    """Depth-first enumeration of every trigger-choice sequence, up to
    `fuel` steps per branch and `max_branches` leaves in total."""
    if variant not in ("std", "obl", "sobl"):
        raise ValueError("explore_branches needs variant std, obl, or sobl")
    instance = as_instance(instance)
    register_null_labels(t.label for t in instance.nulls())
    outcomes: list[ChaseOutcome] = []
    truncated = False

    def eligible(inst, fired):
        out = []
        for tr in triggers(inst, deps):
            if _trigger_key(tr, variant) in fired:
                continue
            if variant == "std" and not is_active(tr, inst):
                continue
            out.append(tr)
        return out

    def walk(inst, fired, steps):
        nonlocal truncated
        if len(outcomes) >= max_branches:
            truncated = True
            return
        choices = eligible(inst, fired)
        if not choices:
            outcomes.append(ChaseOutcome("terminated", inst, steps))
            return
        if fuel is not None and steps >= fuel:
            outcomes.append(ChaseOutcome("fuel_exhausted", inst, steps))
            return
        for tr in choices:
            if len(outcomes) >= max_branches:
                truncated = True
                return
            result = _fire(tr, inst)
            if isinstance(result, Failure):
                outcomes.append(ChaseOutcome("failed", inst, steps + 1,
                                             failure=result))
                continue
            inst2, _, subst = result
            fired2 = set(fired)
            fired2.add(_trigger_key(tr, variant))
            if subst:
                fired2 = {_remap_key(k, subst) for k in fired2}
            walk(inst2, fired2, steps + 1)

    walk(instance.copy(), set(), 0)
    counts = {"terminated": 0, "failed": 0, "fuel_exhausted": 0}
    for o in outcomes:
        counts[o.status] += 1
    return BranchSummary(outcomes, counts["terminated"], counts["failed"],
                         counts["fuel_exhausted"], truncated)
