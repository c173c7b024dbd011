"""
LTLf / QLTLf Logic Core

This module provides the formula syntax tree, the Syft-compatible parser and
printer, the partition file format, and the finite-trace semantics used as the
ground-truth oracle for every automaton construction.

Surface syntax (Syft conventions):
    N f      strong next (f holds at the next instant, which must exist)
    X f      weak next (f holds at the next instant, if there is one)
    G f, F f always, eventually
    f U g    until;  f R g  release
    !f ~f    not;  & | -> <->  boolean connectives
    exists u. f / forall u. f   second-order quantifiers (QLTLf only)

Note that N, not X, is the strong next operator.

Positions are 1-based throughout. A trace is a non-empty tuple of letters and a
letter is the frozenset of propositions true at that instant.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

from cache import MemoTable
from constants import FORMULA_CACHE_MAX_SIZE, EVAL_CACHE_MAX_SIZE, ENUMERATION_BITS
from errors import (
    SynthError, FormulaSyntaxError, PartitionError, UnsupportedInputError, EnumerationCapError,
)

logger = logging.getLogger(__name__)

Letter = FrozenSet[str]
Trace = Tuple[Letter, ...]


# --- Formula Syntax Tree ---

class Op(Enum):
    TRUE = "true"
    FALSE = "false"
    ATOM = "atom"
    NOT = "!"
    AND = "&"
    OR = "|"
    NEXT = "N"
    WNEXT = "X"
    UNTIL = "U"
    RELEASE = "R"
    EVENTUALLY = "F"
    ALWAYS = "G"
    EXISTS = "exists"
    FORALL = "forall"


TEMPORAL_OPS = frozenset({Op.NEXT, Op.WNEXT, Op.UNTIL, Op.RELEASE, Op.EVENTUALLY, Op.ALWAYS})
QUANTIFIER_OPS = frozenset({Op.EXISTS, Op.FORALL})
_UNARY_PREFIX = {Op.NEXT: "N", Op.WNEXT: "X", Op.EVENTUALLY: "F", Op.ALWAYS: "G"}


class Formula:
    """Immutable, hash-consed formula node.

    Equality is structural. Nodes are interned through a bounded cache, so
    structurally equal formulas built through the factory functions are
    usually the same object and compare in O(1).

    AND and OR nodes may have two or more children; quantifier nodes carry the
    bound variable in ``name`` and their body as the only child.
    """

    __slots__ = ("op", "args", "name", "_hash", "_text")

    def __init__(self, op: Op, args: Tuple['Formula', ...] = (), name: Optional[str] = None):
        self.op = op
        self.args = args
        self.name = name
        self._hash = hash((op, args, name))
        self._text: Optional[str] = None

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Formula):
            return NotImplemented
        return (self._hash == other._hash and self.op is other.op
                and self.name == other.name and self.args == other.args)

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"Formula({to_text(self)!r})"

    def __setattr__(self, key, value):
        if key != "_text" and hasattr(self, "_hash"):
            raise AttributeError("Formula is immutable")
        object.__setattr__(self, key, value)


_formula_cache = MemoTable("formula", FORMULA_CACHE_MAX_SIZE)
# TRUE and FALSE live outside the cache so identity checks survive eviction.
_constants: Dict[Op, Formula] = {}


def _make(op: Op, args: Tuple[Formula, ...] = (), name: Optional[str] = None) -> Formula:
    constant = _constants.get(op)
    if constant is not None:
        return constant
    key = (op, args, name)
    node = _formula_cache.lookup(key)
    if node is None:
        node = Formula(op, args, name)
        _formula_cache.store(key, node)
    return node


TRUE = _constants[Op.TRUE] = Formula(Op.TRUE)
FALSE = _constants[Op.FALSE] = Formula(Op.FALSE)


def atom(name: str) -> Formula:
    return _make(Op.ATOM, (), name)


def not_(f: Formula) -> Formula:
    return _make(Op.NOT, (f,))


def and_(*fs: Formula) -> Formula:
    if not fs:
        return TRUE
    if len(fs) == 1:
        return fs[0]
    return _make(Op.AND, tuple(fs))


def or_(*fs: Formula) -> Formula:
    if not fs:
        return FALSE
    if len(fs) == 1:
        return fs[0]
    return _make(Op.OR, tuple(fs))


def next_(f: Formula) -> Formula:
    return _make(Op.NEXT, (f,))


def wnext(f: Formula) -> Formula:
    return _make(Op.WNEXT, (f,))


def until(f: Formula, g: Formula) -> Formula:
    return _make(Op.UNTIL, (f, g))


def release(f: Formula, g: Formula) -> Formula:
    return _make(Op.RELEASE, (f, g))


def eventually(f: Formula) -> Formula:
    return _make(Op.EVENTUALLY, (f,))


def always(f: Formula) -> Formula:
    return _make(Op.ALWAYS, (f,))


def implies(f: Formula, g: Formula) -> Formula:
    return or_(not_(f), g)


def iff(f: Formula, g: Formula) -> Formula:
    return and_(implies(f, g), implies(g, f))


def exists(name: str, f: Formula) -> Formula:
    return _make(Op.EXISTS, (f,), name)


def forall(name: str, f: Formula) -> Formula:
    return _make(Op.FORALL, (f,), name)


def next_n(k: int, f: Formula, weak: bool = False) -> Formula:
    """Apply k nested (weak) next operators to f."""
    for _ in range(k):
        f = wnext(f) if weak else next_(f)
    return f


# --- Structural Queries ---

def subformulas(f: Formula) -> Iterator[Formula]:
    """Yield every distinct subformula of f, children before parents."""
    seen: Set[Formula] = set()
    stack: List[Tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        if node in seen:
            continue
        seen.add(node)
        stack.append((node, True))
        for child in reversed(node.args):
            if child not in seen:
                stack.append((child, False))


def atoms(f: Formula) -> FrozenSet[str]:
    """All atom names occurring in f, bound or free."""
    return frozenset(g.name for g in subformulas(f) if g.op is Op.ATOM)


def free_atoms(f: Formula) -> FrozenSet[str]:
    """Atom names occurring free in f."""
    if f.op is Op.ATOM:
        return frozenset((f.name,))
    if f.op in QUANTIFIER_OPS:
        return free_atoms(f.args[0]) - {f.name}
    result: FrozenSet[str] = frozenset()
    for child in f.args:
        result |= free_atoms(child)
    return result


def size(f: Formula) -> int:
    """Number of nodes of f counted as a tree."""
    return 1 + sum(size(child) for child in f.args)


def depth(f: Formula) -> int:
    if not f.args:
        return 0
    return 1 + max(depth(child) for child in f.args)


@lru_cache(maxsize=EVAL_CACHE_MAX_SIZE)
def has_quantifier(f: Formula) -> bool:
    return f.op in QUANTIFIER_OPS or any(has_quantifier(child) for child in f.args)


@lru_cache(maxsize=EVAL_CACHE_MAX_SIZE)
def count_binders(f: Formula) -> int:
    """Number of quantifier nodes in f counted as a tree."""
    own = 1 if f.op in QUANTIFIER_OPS else 0
    return own + sum(count_binders(child) for child in f.args)


# --- Printer ---

def to_text(f: Formula) -> str:
    """Render f in Syft syntax, fully parenthesized so that it parses back to f."""
    if f._text is not None:
        return f._text
    op = f.op
    if op is Op.TRUE:
        text = "true"
    elif op is Op.FALSE:
        text = "false"
    elif op is Op.ATOM:
        text = f.name
    elif op is Op.NOT:
        text = "!" + to_text(f.args[0])
    elif op is Op.AND or op is Op.OR:
        text = "(" + f" {op.value} ".join(to_text(a) for a in f.args) + ")"
    elif op in _UNARY_PREFIX:
        text = f"{_UNARY_PREFIX[op]}({to_text(f.args[0])})"
    elif op is Op.UNTIL or op is Op.RELEASE:
        text = f"({to_text(f.args[0])} {op.value} {to_text(f.args[1])})"
    else:
        text = f"({op.value} {f.name}. {to_text(f.args[0])})"
    f._text = text
    return text


# --- Tokenizer ---

_TOKEN_PATTERN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<iff><->)
  | (?P<implies>->)
  | (?P<and>&&?)
  | (?P<or>\|\|?)
  | (?P<not>[!~])
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<dot>\.)
""", re.VERBOSE)

_KEYWORDS: Dict[str, str] = {
    "N": "next", "X": "wnext", "G": "always", "F": "eventually",
    "U": "until", "R": "release",
    "true": "true", "TRUE": "true", "True": "true",
    "false": "false", "FALSE": "false", "False": "false",
    "exists": "exists", "forall": "forall",
}

_UNARY_KINDS = {"next": next_, "wnext": wnext, "always": always, "eventually": eventually}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int  # 1-based


def tokenize(text: str) -> List[Token]:
    """Split formula text into tokens; raises FormulaSyntaxError on unknown characters."""
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_PATTERN.match(text, pos)
        if match is None:
            raise FormulaSyntaxError(f"unknown token '{text[pos]}'", pos + 1)
        kind = match.lastgroup
        if kind != "ws":
            word = match.group()
            if kind == "ident":
                kind = _KEYWORDS.get(word, "ident")
            tokens.append(Token(kind, word, pos + 1))
        pos = match.end()
    return tokens


# --- Parser ---

class _Parser:
    """Recursive-descent parser.

    Precedence, loosest first: <->, -> (right-assoc), |, &, U/R (right-assoc),
    unary operators. Chains of & and | build one n-ary node.
    """

    def __init__(self, text: str, allow_quantifiers: bool):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.allow_quantifiers = allow_quantifiers
        self.temporal_depth = 0

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def end_column(self) -> int:
        return len(self.text) + 1

    def error(self, message: str, token: Optional[Token] = None) -> FormulaSyntaxError:
        column = token.column if token is not None else self.end_column()
        return FormulaSyntaxError(message, column)

    def expect(self, kind: str, what: str) -> Token:
        token = self.peek()
        if token is None:
            raise self.error(f"expected {what}, found end of input")
        if token.kind != kind:
            raise self.error(f"expected {what}, found '{token.text}'", token)
        self.pos += 1
        return token

    def parse(self) -> Formula:
        if not self.tokens:
            raise FormulaSyntaxError("empty formula", 1)
        result = self.parse_iff()
        token = self.peek()
        if token is not None:
            raise self.error(f"unexpected '{token.text}'", token)
        return result

    def parse_iff(self) -> Formula:
        left = self.parse_implies()
        while self.peek() is not None and self.peek().kind == "iff":
            self.pos += 1
            left = iff(left, self.parse_implies())
        return left

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        token = self.peek()
        if token is not None and token.kind == "implies":
            self.pos += 1
            return implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        parts = [self.parse_and()]
        while self.peek() is not None and self.peek().kind == "or":
            self.pos += 1
            parts.append(self.parse_and())
        return or_(*parts)

    def parse_and(self) -> Formula:
        parts = [self.parse_binary_temporal()]
        while self.peek() is not None and self.peek().kind == "and":
            self.pos += 1
            parts.append(self.parse_binary_temporal())
        return and_(*parts)

    def parse_binary_temporal(self) -> Formula:
        start = self.peek()
        left = self.parse_unary()
        token = self.peek()
        if token is None or token.kind not in ("until", "release"):
            return left
        if has_quantifier(left):
            raise UnsupportedInputError(
                f"quantifier under temporal operator '{token.text}' at column {start.column}")
        self.pos += 1
        self.temporal_depth += 1
        right = self.parse_binary_temporal()
        self.temporal_depth -= 1
        return until(left, right) if token.kind == "until" else release(left, right)

    def parse_unary(self) -> Formula:
        token = self.peek()
        if token is None:
            raise self.error("expected formula, found end of input")
        kind = token.kind
        if kind == "not":
            self.pos += 1
            return not_(self.parse_unary())
        if kind in _UNARY_KINDS:
            self.pos += 1
            self.temporal_depth += 1
            body = self.parse_unary()
            self.temporal_depth -= 1
            return _UNARY_KINDS[kind](body)
        if kind in ("exists", "forall"):
            return self.parse_quantifier(token)
        return self.parse_primary()

    def parse_quantifier(self, token: Token) -> Formula:
        if not self.allow_quantifiers:
            raise self.error("quantifiers are not allowed in LTLf formulas", token)
        if self.temporal_depth > 0:
            raise UnsupportedInputError(
                f"quantifier under temporal operator at column {token.column}")
        self.pos += 1
        name = self.expect("ident", "variable name").text
        self.expect("dot", "'.'")
        body = self.parse_iff()
        return exists(name, body) if token.kind == "exists" else forall(name, body)

    def parse_primary(self) -> Formula:
        token = self.peek()
        kind = token.kind
        if kind == "true":
            self.pos += 1
            return TRUE
        if kind == "false":
            self.pos += 1
            return FALSE
        if kind == "ident":
            self.pos += 1
            return atom(token.text)
        if kind == "lparen":
            self.pos += 1
            inner = self.parse_iff()
            self.expect("rparen", "')'")
            return inner
        raise self.error(f"unexpected '{token.text}'", token)


def parse_ltlf(text: str) -> Formula:
    """Parse a single-line LTLf formula.

    Args:
        text: Formula in Syft syntax.

    Returns:
        The formula syntax tree. Implications and equivalences are desugared
        into OR/NOT/AND nodes.

    Raises:
        FormulaSyntaxError: On empty input, unknown tokens or malformed input.
    """
    return _Parser(text, allow_quantifiers=False).parse()


def parse_qltlf(text: str) -> Formula:
    """Parse a QLTLf formula; quantifiers may appear under boolean connectives only.

    Raises:
        FormulaSyntaxError: On malformed input.
        UnsupportedInputError: On a quantifier nested under a temporal operator.
    """
    return _Parser(text, allow_quantifiers=True).parse()


def parse_ltlf_file(text: str) -> Tuple[Formula, Formula]:
    """Parse the two-line `.ltlf` format into (main, backup) formulas."""
    lines = [(n, line.strip()) for n, line in enumerate(text.splitlines(), start=1)]
    lines = [(n, line) for n, line in lines if line]
    if len(lines) != 2:
        raise SynthError(f"expected exactly two formulas (main and backup), found {len(lines)}",
                         error_type="format")
    formulas = []
    for n, line in lines:
        try:
            formulas.append(parse_ltlf(line))
        except FormulaSyntaxError as exc:
            raise FormulaSyntaxError(exc.reason, exc.column, line=n) from None
    return formulas[0], formulas[1]


# --- Partition ---

_NAME_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_SECTIONS = {".inputs": "inputs", ".outputs": "outputs", ".unobservables": "unobservables"}


@dataclass(frozen=True)
class Partition:
    """Split of the propositions into outputs Y, reliable inputs and unreliable inputs.

    The global order Y, then X_rel, then X_unr defines the bit position of
    every proposition in every letter downstream.
    """
    outputs: Tuple[str, ...]
    rel_inputs: Tuple[str, ...]
    unr_inputs: Tuple[str, ...] = ()

    def __post_init__(self):
        names = self.outputs + self.rel_inputs + self.unr_inputs
        if not names:
            raise PartitionError("partition declares no propositions")
        for name in names:
            if not _NAME_PATTERN.match(name) or name in _KEYWORDS:
                raise PartitionError(f"invalid proposition name '{name}'")
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise PartitionError(f"propositions declared more than once: {' '.join(dupes)}")

    @cached_property
    def order(self) -> Tuple[str, ...]:
        return self.outputs + self.rel_inputs + self.unr_inputs

    @property
    def inputs(self) -> Tuple[str, ...]:
        return self.rel_inputs + self.unr_inputs

    @property
    def width(self) -> int:
        return len(self.order)

    @cached_property
    def _positions(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.order)}

    def index(self, name: str) -> int:
        try:
            return self._positions[name]
        except KeyError:
            raise PartitionError(f"unknown proposition '{name}'") from None

    def mask(self, names: Iterable[str]) -> int:
        bits = 0
        for name in names:
            bits |= 1 << self.index(name)
        return bits

    @property
    def output_mask(self) -> int:
        return (1 << len(self.outputs)) - 1

    @property
    def input_mask(self) -> int:
        return ((1 << self.width) - 1) ^ self.output_mask

    @property
    def unr_mask(self) -> int:
        return self.mask(self.unr_inputs)

    def to_text(self) -> str:
        lines = [".inputs: " + " ".join(self.inputs), ".outputs: " + " ".join(self.outputs)]
        if self.unr_inputs:
            lines.append(".unobservables: " + " ".join(self.unr_inputs))
        return "\n".join(lines) + "\n"


def parse_partition(text: str) -> Partition:
    """Parse the `.part` format.

    Every unobservable must also be listed under .inputs. Unreliable inputs
    keep their .inputs order.

    Raises:
        PartitionError: On missing or repeated sections, unknown section names,
            unobservables that are not inputs, or names that are both input and output.
    """
    sections: Dict[str, List[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        key = _SECTIONS.get(head.strip().lower())
        if not sep or key is None:
            raise PartitionError(f"line {lineno}: expected '.inputs:', '.outputs:' or '.unobservables:'")
        if key in sections:
            raise PartitionError(f"line {lineno}: section '{head.strip()}' repeated")
        sections[key] = rest.split()

    for key in ("inputs", "outputs"):
        if key not in sections:
            raise PartitionError(f"missing section '.{key}:'")
    inputs, outputs = sections["inputs"], sections["outputs"]
    unobservables = sections.get("unobservables", [])

    both = sorted(set(inputs) & set(outputs))
    if both:
        raise PartitionError(f"listed as both input and output: {' '.join(both)}")
    stray = [name for name in unobservables if name not in inputs]
    if stray:
        raise PartitionError(f"unobservables must also be listed under .inputs: {' '.join(stray)}")

    unr = set(unobservables)
    return Partition(
        outputs=tuple(outputs),
        rel_inputs=tuple(n for n in inputs if n not in unr),
        unr_inputs=tuple(n for n in inputs if n in unr),
    )


# --- Traces ---

def make_trace(*letters: Iterable[str]) -> Trace:
    """Build a trace from iterables of true propositions, one per instant."""
    return tuple(frozenset(letter) for letter in letters)


def trace_to_text(t: Trace) -> str:
    return " ".join("{" + ",".join(sorted(letter)) + "}" for letter in t)


def _check_position(t: Trace, i: int) -> None:
    if not 1 <= i <= len(t):
        raise SynthError(f"position {i} outside trace of length {len(t)}", error_type="position")


def _check_cap(bits: int, max_bits: int, what: str) -> None:
    if bits > max_bits:
        raise EnumerationCapError(f"{what} needs 2^{bits} cases, cap is 2^{max_bits}")


def _rewritings(t: Trace, names: Sequence[str]) -> Iterator[Trace]:
    """Every trace agreeing with t except on names, in lexicographic bit order."""
    names = tuple(names)
    if not names:
        yield t
        return
    stripped = [letter - set(names) for letter in t]
    per_letter = [frozenset(c) for r in range(len(names) + 1) for c in itertools.combinations(names, r)]
    for choice in itertools.product(per_letter, repeat=len(t)):
        yield tuple(base | extra for base, extra in zip(stripped, choice))


# --- Semantics ---

def _eval(t: Trace, i: int, f: Formula) -> bool:
    op = f.op
    last = len(t)
    if op is Op.TRUE:
        return True
    if op is Op.FALSE:
        return False
    if op is Op.ATOM:
        return f.name in t[i - 1]
    if op is Op.NOT:
        return not _eval(t, i, f.args[0])
    if op is Op.AND:
        return all(_eval(t, i, g) for g in f.args)
    if op is Op.OR:
        return any(_eval(t, i, g) for g in f.args)
    if op is Op.NEXT:
        return i < last and _eval(t, i + 1, f.args[0])
    if op is Op.WNEXT:
        return i == last or _eval(t, i + 1, f.args[0])
    if op is Op.UNTIL:
        left, right = f.args
        return any(_eval(t, j, right) and all(_eval(t, k, left) for k in range(i, j))
                   for j in range(i, last + 1))
    if op is Op.RELEASE:
        left, right = f.args
        return all(_eval(t, j, right) or any(_eval(t, k, left) for k in range(i, j))
                   for j in range(i, last + 1))
    if op is Op.EVENTUALLY:
        return any(_eval(t, j, f.args[0]) for j in range(i, last + 1))
    if op is Op.ALWAYS:
        return all(_eval(t, j, f.args[0]) for j in range(i, last + 1))
    if op is Op.EXISTS:
        return any(_eval(u, i, f.args[0]) for u in _rewritings(t, (f.name,)))
    if op is Op.FORALL:
        return all(_eval(u, i, f.args[0]) for u in _rewritings(t, (f.name,)))
    raise SynthError(f"unknown formula node {op}")


def eval_trace(t: Trace, i: int, f: Formula) -> bool:
    """Decide t, i |= f by the finite-trace semantics, clause by clause.

    Args:
        t: Non-empty trace.
        i: 1-based position, 1 <= i <= len(t).
        f: Formula; quantifier nodes are decided by enumerating rewritings.

    Raises:
        SynthError: If i is out of range.
        EnumerationCapError: If f has quantifiers and the enumeration exceeds the default cap.
    """
    _check_position(t, i)
    binders = count_binders(f)
    if binders:
        _check_cap(len(t) * binders, ENUMERATION_BITS, "quantifier evaluation")
    return _eval(t, i, f)


def satisfies(t: Trace, f: Formula) -> bool:
    """t |= f, i.e. eval_trace(t, 1, f); the empty trace satisfies nothing."""
    return bool(t) and eval_trace(t, 1, f)


# --- QLTLf ---

class Quant(Enum):
    EXISTS = "exists"
    FORALL = "forall"

    def flipped(self) -> 'Quant':
        return Quant.FORALL if self is Quant.EXISTS else Quant.EXISTS


@dataclass(frozen=True)
class QFormula:
    """Prenex QLTLf formula: a quantifier prefix over a quantifier-free matrix."""
    prefix: Tuple[Tuple[Quant, str], ...]
    matrix: Formula

    def __post_init__(self):
        names = [name for _, name in self.prefix]
        if len(set(names)) != len(names):
            raise UnsupportedInputError("quantified variables in a prefix must be distinct")
        if has_quantifier(self.matrix):
            raise UnsupportedInputError("matrix of a prenex formula must be quantifier-free")

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(name for _, name in self.prefix)

    @property
    def alternation_count(self) -> int:
        return alternation_count(self.prefix)

    def free_atoms(self) -> FrozenSet[str]:
        return atoms(self.matrix) - set(self.variables)

    def to_formula(self) -> Formula:
        body = self.matrix
        for quant, name in reversed(self.prefix):
            body = exists(name, body) if quant is Quant.EXISTS else forall(name, body)
        return body

    def __str__(self) -> str:
        return to_text(self.to_formula())


def alternation_count(prefix: Sequence[Tuple[Quant, str]]) -> int:
    """Number of adjacent prefix positions whose quantifier kinds differ."""
    return sum(1 for (q1, _), (q2, _) in zip(prefix, prefix[1:]) if q1 is not q2)


def eval_qltlf(t: Trace, i: int, qf: Union[QFormula, Formula], max_bits: int = ENUMERATION_BITS) -> bool:
    """Decide t, i |= qf by enumerating all rewritings of the quantified variables.

    Desk-scale oracle only: the cost is 2^(len(t) * number of binders).

    Raises:
        EnumerationCapError: If len(t) times the number of binders exceeds max_bits.
    """
    f = qf.to_formula() if isinstance(qf, QFormula) else qf
    _check_position(t, i)
    _check_cap(len(t) * count_binders(f), max_bits, "QLTLf evaluation")
    return _eval(t, i, f)


def expand_unreliable(t: Trace, names: Iterable[str], max_bits: int = ENUMERATION_BITS) -> Set[Trace]:
    """All traces t' with t' ~_{-V} t, i.e. agreeing with t except on the variables V.

    Raises:
        EnumerationCapError: If len(t) * |V| exceeds max_bits.
    """
    names = tuple(sorted(set(names)))
    _check_cap(len(t) * len(names), max_bits, "unreliable expansion")
    return set(_rewritings(t, names))


def iter_rewritings(t: Trace, names: Iterable[str], max_bits: int = ENUMERATION_BITS) -> Iterator[Trace]:
    """Lazy, ordered variant of expand_unreliable."""
    names = tuple(sorted(set(names)))
    _check_cap(len(t) * len(names), max_bits, "unreliable expansion")
    return _rewritings(t, names)


# --- Prenex Normal Form ---

def _check_no_quantifier_under_temporal(f: Formula, under_temporal: bool = False) -> None:
    if f.op in QUANTIFIER_OPS and under_temporal:
        raise UnsupportedInputError(f"quantifier over '{f.name}' under a temporal operator")
    nested = under_temporal or f.op in TEMPORAL_OPS
    for child in f.args:
        if has_quantifier(child):
            _check_no_quantifier_under_temporal(child, nested)


def substitute(f: Formula, mapping: Dict[str, str]) -> Formula:
    """Rename free atoms of f according to mapping."""
    if not mapping:
        return f
    if f.op is Op.ATOM:
        return atom(mapping[f.name]) if f.name in mapping else f
    if f.op in QUANTIFIER_OPS:
        inner = {k: v for k, v in mapping.items() if k != f.name}
        return _make(f.op, (substitute(f.args[0], inner),), f.name)
    if not f.args:
        return f
    return _make(f.op, tuple(substitute(child, mapping) for child in f.args), f.name)


def fresh_name(base: str, used: Set[str]) -> str:
    """First of base_1, base_2, ... not in used."""
    k = 1
    while f"{base}_{k}" in used:
        k += 1
    return f"{base}_{k}"


def _rename_apart(f: Formula, used: Set[str]) -> Formula:
    if f.op in QUANTIFIER_OPS:
        name = f.name
        body = f.args[0]
        if name in used:
            new_name = fresh_name(name, used | atoms(body))
            body = substitute(body, {name: new_name})
            name = new_name
        used.add(name)
        return _make(f.op, (_rename_apart(body, used),), name)
    if not f.args or not has_quantifier(f):
        return f
    return _make(f.op, tuple(_rename_apart(child, used) for child in f.args), f.name)


def _pull(f: Formula) -> Tuple[List[Tuple[Quant, str]], Formula]:
    if f.op is Op.EXISTS or f.op is Op.FORALL:
        prefix, matrix = _pull(f.args[0])
        quant = Quant.EXISTS if f.op is Op.EXISTS else Quant.FORALL
        return [(quant, f.name)] + prefix, matrix
    if not has_quantifier(f):
        return [], f
    if f.op is Op.NOT:
        prefix, matrix = _pull(f.args[0])
        return [(q.flipped(), name) for q, name in prefix], not_(matrix)
    # AND / OR: bound names are distinct and not free elsewhere after renaming
    prefix: List[Tuple[Quant, str]] = []
    matrices = []
    for child in f.args:
        child_prefix, child_matrix = _pull(child)
        prefix.extend(child_prefix)
        matrices.append(child_matrix)
    return prefix, _make(f.op, tuple(matrices))


def to_pnf(f: Union[Formula, QFormula]) -> QFormula:
    """Convert a QLTLf formula with quantifiers under boolean connectives to prenex form.

    Bound variables that clash with free atoms or other binders are renamed
    to fresh names (u -> u_1, ...). Quantifiers under NOT flip kind.

    Raises:
        UnsupportedInputError: If a quantifier occurs under a temporal operator.
    """
    if isinstance(f, QFormula):
        return f
    _check_no_quantifier_under_temporal(f)
    renamed = _rename_apart(f, set(free_atoms(f)))
    prefix, matrix = _pull(renamed)
    result = QFormula(tuple(prefix), matrix)
    logger.debug("prenex form with %d quantifiers, %d alternations",
                 len(prefix), result.alternation_count)
    return result
