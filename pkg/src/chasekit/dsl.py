"""Surface syntax for dependency sets, instances, and string-rewriting
systems, plus the matching pretty-printers.

One dependency per line (or `;`-separated): `R(x,y) -> exists z . S(x,z)`,
`T(x,y) -> x = y`, `Estar(x,x) -> false`.  Variables are lowercase
identifiers, relations start uppercase, constants are 'quoted' or bare
digits, nulls are `?`-prefixed (instances only).  `#` starts a comment.
parse ∘ render is the identity; render ∘ parse is canonical form.
"""

from __future__ import annotations

import re

from .model import (
    Atom, Dependency, Instance, CONST, NULL, VAR,
    const, denial, egd, null, register_null_labels, render_atom,
    render_term, tgd, var,
)
from .srs import SRS


class DslError(ValueError):
    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


### tokenizer

_TOKEN_RE = re.compile(r"""
    (?P<WS>[ \t\r]+)
  | (?P<COMMENT>\#[^\n]*)
  | (?P<NEWLINE>\n)
  | (?P<ARROW>->)
  | (?P<LP>\() | (?P<RP>\))
  | (?P<COMMA>,) | (?P<AMP>&) | (?P<SEMI>;)
  | (?P<DOT>\.) | (?P<EQ>=)
  | (?P<NULLT>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<QCONST>'[^'\n]*')
  | (?P<NUM>[0-9]+)
  | (?P<NAME>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


def _tokenize(text):
    """Yield (type, value, line, col); NAME is pre-classified into
    EXISTS / FALSE / RELNAME / IDENT."""
    line, col = 1, 1
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise DslError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "NAME":
            if value == "exists":
                kind = "EXISTS"
            elif value == "false":
                kind = "FALSE"
            elif value[0].isupper():
                kind = "RELNAME"
            else:
                kind = "IDENT"
        if kind not in ("WS", "COMMENT"):
            out.append((kind, value, line, col))
        if kind == "NEWLINE":
            line += 1
            col = 1
        else:
            col += len(value)
        pos = m.end()
    out.append(("EOF", "", line, col))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0
        self.arities: dict[str, int] = {}

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise DslError(f"expected {kind}, got {tok[1]!r}", tok[2], tok[3])
        return tok

    def skip_separators(self):
        while self.peek()[0] in ("NEWLINE", "SEMI"):
            self.next()

    def at_end(self):
        return self.peek()[0] == "EOF"

    def term(self, allow_var, allow_null):
        tok = self.next()
        kind, value, line, col = tok
        if kind == "NUM":
            return const(value)
        if kind == "QCONST":
            return const(value[1:-1])
        if kind == "NULLT":
            if not allow_null:
                raise DslError("nulls are not allowed here", line, col)
            return null(value[1:])
        if kind == "IDENT":
            # bare lowercase names are variables in dependencies but
            # constants in instances (no variables exist there)
            return var(value) if allow_var else const(value)
        raise DslError(f"expected a term, got {value!r}", line, col)

    def atom(self, allow_var, allow_null):
        kind, name, line, col = self.expect("RELNAME")
        self.expect("LP")
        args = []
        if self.peek()[0] != "RP":
            args.append(self.term(allow_var, allow_null))
            while self.peek()[0] == "COMMA":
                self.next()
                args.append(self.term(allow_var, allow_null))
        self.expect("RP")
        arity = self.arities.setdefault(name, len(args))
        if arity != len(args):
            raise DslError(
                f"{name} used with arity {len(args)}, earlier {arity}",
                line, col)
        return Atom(name, tuple(args))

    def atom_list(self, allow_var, allow_null):
        atoms = [self.atom(allow_var, allow_null)]
        while self.peek()[0] in ("COMMA", "AMP"):
            self.next()
            atoms.append(self.atom(allow_var, allow_null))
        return atoms


### dependency files

class DependencyFile(list):
    """Ordered list of Dependency; `positions[i]` is the (line, col) the
    i-th dependency started at."""

    def __init__(self, deps=(), positions=()):
        super().__init__(deps)
        self.positions = list(positions)


def parse_dependencies(text) -> DependencyFile:
    p = _Parser(text)
    deps, positions = [], []
    p.skip_separators()
    while not p.at_end():
        start = p.peek()[2:]
        body = [] if p.peek()[0] == "ARROW" else p.atom_list(True, False)
        p.expect("ARROW")
        deps.append(_parse_head(p, body))
        positions.append(start)
        tok = p.peek()
        if tok[0] not in ("NEWLINE", "SEMI", "EOF"):
            raise DslError(f"unexpected {tok[1]!r} after dependency",
                           tok[2], tok[3])
        p.skip_separators()
    out = DependencyFile(
        [Dependency(d.kind, d.body, d.head, d.eq, d.exists, f"d{i+1}")
         for i, d in enumerate(deps)],
        positions)
    return out


def _parse_head(p: _Parser, body):
    kind, value, line, col = p.peek()
    if kind == "FALSE":
        p.next()
        return denial(body)
    if kind == "EXISTS":
        p.next()
        ex = [p.expect("IDENT")[1]]
        while p.peek()[0] == "COMMA":
            p.next()
            ex.append(p.expect("IDENT")[1])
        p.expect("DOT")
        if len(set(ex)) != len(ex):
            raise DslError("repeated existential variable", line, col)
        exists = tuple(var(x) for x in ex)
        head = p.atom_list(True, False)
        return _checked_tgd(body, head, exists, line, col)
    # either an egd (term = term) or an unquantified tgd head
    if kind in ("IDENT", "NUM", "QCONST") and p.toks[p.i + 1][0] == "EQ":
        s = p.term(True, False)
        p.expect("EQ")
        t = p.term(True, False)
        for u in (s, t):
            if u.kind == VAR and not _occurs_in(u, body):
                raise DslError(f"egd variable {u.label!r} missing from body",
                               line, col)
        return egd(body, s, t)
    head = p.atom_list(True, False)
    return _checked_tgd(body, head, (), line, col)


def _occurs_in(t, atoms):
    return any(t in a.args for a in atoms)


def _checked_tgd(body, head, exists, line, col):
    known = {t for a in body for t in a.args if t.kind == VAR} | set(exists)
    for a in head:
        for t in a.args:
            if t.kind == VAR and t not in known:
                raise DslError(
                    f"head variable {t.label!r} is neither universal nor "
                    f"declared by exists", line, col)
    for x in exists:
        if _occurs_in(x, body):
            raise DslError(
                f"existential variable {x.label!r} also occurs in the body",
                line, col)
    return tgd(body, head, exists)


def render_dependency(d: Dependency) -> str:
    body = ", ".join(render_atom(a) for a in d.body)
    left = f"{body} -> " if body else "-> "
    if d.kind == "denial":
        return left + "false"
    if d.kind == "egd":
        return left + f"{render_term(d.eq[0])} = {render_term(d.eq[1])}"
    head = ", ".join(render_atom(a) for a in d.head)
    if d.exists:
        ex = ", ".join(t.label for t in d.exists)
        return left + f"exists {ex} . {head}"
    return left + head


def render_dependencies(deps) -> str:
    return "\n".join(render_dependency(d) for d in deps) + ("\n" if deps else "")


### instances

def parse_instance(text) -> Instance:
    p = _Parser(text)
    out = Instance()
    p.skip_separators()
    while not p.at_end():
        out.add(p.atom(False, True))
        if p.peek()[0] == "COMMA":
            p.next()
        p.skip_separators()
    register_null_labels(t.label for t in out.nulls())
    return out


def render_instance(instance) -> str:
    atoms = list(instance)
    return "\n".join(render_atom(a) for a in atoms) + ("\n" if atoms else "")


### string-rewriting systems

def parse_srs(text) -> SRS:
    alphabet = ("0", "1")
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("alphabet:"):
            if rules:
                raise DslError("alphabet line must come first", lineno, 1)
            symbols = line[len("alphabet:"):].split()
            for s in symbols:
                if len(s) != 1:
                    raise DslError(f"alphabet symbols are single characters, "
                                   f"got {s!r}", lineno, 1)
            alphabet = tuple(symbols)
            continue
        if "->" not in line:
            raise DslError("expected 'lhs -> rhs'", lineno, 1)
        lhs, _, rhs = (p.strip() for p in line.partition("->"))
        for side in (lhs, rhs):
            for ch in side:
                if ch not in alphabet:
                    raise DslError(f"symbol {ch!r} not in alphabet", lineno, 1)
        rules.append((lhs, rhs))
    return SRS(alphabet=alphabet, rules=tuple(rules))


def render_srs(srs: SRS) -> str:
    lines = ["alphabet: " + " ".join(srs.alphabet)]
    lines += [f"{l} -> {r}".strip() for l, r in srs.rules]
    return "\n".join(lines) + "\n"
