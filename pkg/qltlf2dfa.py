"""
QLTLf to DFA Compilation and MSO Export

This module compiles prenex QLTLf formulas into DFAs by processing maximal
quantifier blocks from the innermost outwards:

    exists block:  determinize(exist_abstract(A, block))
    forall block:  complement(determinize(exist_abstract(complement(A), block)))

Quantified variables stay in the alphabet; the resulting language does not
depend on them.

It also renders QLTLf formulas as MONA programs (m2l-str) following the
usual first-order encoding of LTLf over positions.
"""

import logging
from dataclasses import dataclass
from itertools import groupby
from typing import Dict, List, Sequence, Tuple, Union

from automata import (
    Dfa, complement, determinize, exist_abstract, minimize as minimize_dfa, universal_abstract,
)
from config import Limits, DEFAULT_LIMITS
from constants import STAGE_ABSTRACTION, STAGE_DETERMINIZE, STAGE_DFA_MAIN
from errors import SynthError, UnsupportedInputError
from logic import (
    Formula, Op, QFormula, Quant, atoms, to_pnf, TRUE, not_, next_, until,
)
from ltlf2dfa import ltlf_to_dfa

logger = logging.getLogger(__name__)

FORALL_ROUTES = ("dual", "universal")


@dataclass(frozen=True)
class QuantifierBlock:
    """Maximal run of quantifiers of one kind in a prenex prefix."""
    kind: Quant
    variables: Tuple[str, ...]

    def __post_init__(self):
        if not self.variables:
            raise UnsupportedInputError("quantifier block without variables")
        if len(set(self.variables)) != len(self.variables):
            raise UnsupportedInputError("quantifier block repeats a variable")


def quantifier_blocks(prefix: Sequence[Tuple[Quant, str]]) -> List[QuantifierBlock]:
    """Group a prefix into maximal blocks of equal quantifier kind, outermost first."""
    return [QuantifierBlock(kind, tuple(name for _, name in group))
            for kind, group in groupby(prefix, key=lambda entry: entry[0])]


def qltlf_to_dfa(qf: QFormula, props: Sequence[str], limits: Limits = DEFAULT_LIMITS,
                 forall_route: str = "dual", minimize: bool = False,
                 stage: str = STAGE_DFA_MAIN) -> Dfa:
    """Compile a prenex QLTLf formula into a DFA over props.

    Args:
        qf: Prenex formula; matrix atoms and quantified variables must be in props.
        props: Proposition order of the alphabet.
        limits: Resource caps.
        forall_route: "dual" builds forall blocks as complement/exists/complement;
            "universal" uses the subset construction with the all-final rule.
        minimize: Minimize after each block.
        stage: Stage name reported when compiling the matrix.

    Raises:
        ResourceLimitError: Propagated from the automaton constructions.
    """
    if forall_route not in FORALL_ROUTES:
        raise SynthError(f"unknown forall route '{forall_route}'", error_type="config")
    props = tuple(props)
    missing = (atoms(qf.matrix) | set(qf.variables)) - set(props)
    if missing:
        raise SynthError(f"variables {sorted(missing)} are not in the alphabet {list(props)}",
                         error_type="alphabet")

    current = ltlf_to_dfa(qf.matrix, props, limits, stage=stage)
    for block in reversed(quantifier_blocks(qf.prefix)):
        before = current.n_states
        if block.kind is Quant.EXISTS:
            abstracted = exist_abstract(current, block.variables)
            current = determinize(abstracted, limit=limits.subset_limit, stage=STAGE_DETERMINIZE)
        elif forall_route == "dual":
            abstracted = exist_abstract(complement(current), block.variables)
            current = complement(determinize(abstracted, limit=limits.subset_limit, stage=STAGE_DETERMINIZE))
        else:
            current = universal_abstract(current, block.variables, limit=limits.subset_limit,
                                         stage=STAGE_DETERMINIZE)
        if minimize:
            current = minimize_dfa(current)
        logger.info("%s: %s block %s: %d -> %d states", STAGE_ABSTRACTION, block.kind.value,
                    " ".join(block.variables), before, current.n_states)
    return current


# --- MSO Export ---

class _MsoWriter:
    """Renders formulas over first-order position variables with stable fresh names."""

    def __init__(self, names: Dict[str, str]):
        self.names = names
        self.y_count = 0
        self.z_count = 0

    def fresh_y(self) -> str:
        self.y_count += 1
        return f"y{self.y_count}"

    def fresh_z(self) -> str:
        self.z_count += 1
        return f"z{self.z_count}"

    def render(self, f: Formula, x: str) -> str:
        op = f.op
        if op is Op.TRUE:
            return "true"
        if op is Op.FALSE:
            return "false"
        if op is Op.ATOM:
            return f"{x} in {self.names[f.name]}"
        if op is Op.NOT:
            return f"~({self.render(f.args[0], x)})"
        if op is Op.AND or op is Op.OR:
            joiner = " & " if op is Op.AND else " | "
            return "(" + joiner.join(self.render(g, x) for g in f.args) + ")"
        if op is Op.NEXT:
            y = self.fresh_y()
            return f"(ex1 {y}: {y} = {x} + 1 & {y} <= last & {self.render(f.args[0], y)})"
        if op is Op.UNTIL:
            y = self.fresh_y()
            z = self.fresh_z()
            left, right = f.args
            return (f"(ex1 {y}: {x} <= {y} & {y} <= last & {self.render(right, y)} & "
                    f"(all1 {z}: ({x} <= {z} & {z} < {y}) => {self.render(left, z)}))")
        if op is Op.WNEXT:
            return self.render(not_(next_(not_(f.args[0]))), x)
        if op is Op.EVENTUALLY:
            return self.render(until(TRUE, f.args[0]), x)
        if op is Op.ALWAYS:
            return self.render(not_(until(TRUE, not_(f.args[0]))), x)
        if op is Op.RELEASE:
            return self.render(not_(until(not_(f.args[0]), not_(f.args[1]))), x)
        raise UnsupportedInputError(f"cannot export node {op.name}")


def _second_order_names(names: Sequence[str]) -> Dict[str, str]:
    mapping: Dict[str, str] = {}
    used = set()
    for name in sorted(names):
        candidate = name.upper()
        k = 1
        while candidate in used:
            candidate = f"{name.upper()}_{k}"
            k += 1
        used.add(candidate)
        mapping[name] = candidate
    return mapping


def mso_export(qf: Union[QFormula, Formula]) -> str:
    """Render a QLTLf formula as a MONA m2l-str program.

    Free propositions become second-order variables (upper-cased); ``last`` is
    bound to the final position and the formula is evaluated at position 0.
    Nested formulas are brought to prenex form first. Output is deterministic.
    """
    if not isinstance(qf, QFormula):
        qf = to_pnf(qf)
    free = sorted(qf.free_atoms())
    names = _second_order_names(free + list(qf.variables))
    writer = _MsoWriter(names)

    body = f"ex1 x: x = 0 & {writer.render(qf.matrix, 'x')}"
    for quant, name in reversed(qf.prefix):
        keyword = "ex2" if quant is Quant.EXISTS else "all2"
        body = f"{keyword} {names[name]}: ({body})"

    lines = ["m2l-str;"]
    if free:
        lines.append("var2 " + ", ".join(names[name] for name in free) + ";")
    lines.append("var1 last;")
    lines.append("last = $;")
    lines.append(body + ";")
    return "\n".join(lines) + "\n"
