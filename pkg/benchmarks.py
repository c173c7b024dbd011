"""
Benchmark Families and Cross-Check Harness

Generators for three parameterized instance families, plus small random
instances, and a harness that runs every synthesis mode on an instance and
checks that they agree:

- sheep: a farmer moves exactly two sheep per step across a river; pairs
  that may refuse to travel together are signalled by unreliable inputs.
- trap: a robot walks a graph with at most two outgoing edges per vertex;
  unreliable trap inputs divert edges to other endpoints.
- hiker: a hiker eats berries along a trail of length k; whether a berry is
  poisonous, and hence whether the hiker is sick, is unreliable.

Generated instances are written as `<name>.ltlf`, `<name>.part` and an
`expected` file holding 1, 0 or "unknown".
"""

import logging
import os
import random
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from automata import Dfa
from config import Limits, DEFAULT_LIMITS, normalize_mode
from constants import (
    MODES, MODE_DIRECT, MODE_BELIEF, REALIZABLE, UNREALIZABLE, STAGE_DFA_MAIN,
    EXPECTED_REALIZABLE, EXPECTED_UNREALIZABLE, EXPECTED_UNKNOWN,
    LTLF_SUFFIX, PART_SUFFIX, EXPECTED_FILE,
)
from errors import SynthError, GeneratorError
from game import verify_strategy
from logic import (
    Formula, Partition, TRUE, FALSE, atom, not_, and_, or_, implies, iff, next_, wnext, until,
    release, eventually, always, next_n, to_text,
)
from ltlf2dfa import ltlf_to_dfa
from unreliable import SynthInstance, synth

logger = logging.getLogger(__name__)

FAMILIES = ("sheep", "trap", "hiker", "random")


# --- Instances ---

@dataclass(frozen=True)
class InstanceDescriptor:
    """Family, parameters and expected verdict (None when unknown) of one benchmark instance."""
    family: str
    params: Tuple[Tuple[str, Any], ...] = ()
    expected: Optional[bool] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GeneratorError(f"unknown family '{self.family}' (expected one of {', '.join(FAMILIES)})")

    @property
    def options(self) -> Dict[str, Any]:
        return dict(self.params)

    @property
    def name(self) -> str:
        parts = [self.family]
        for key, value in self.params:
            if isinstance(value, bool):
                parts.append(key if value else f"no_{key}")
            elif isinstance(value, (tuple, list)):
                parts.append(key + "-".join(_token(v) for v in value))
            elif isinstance(value, str):
                parts.append(value)
            else:
                parts.append(f"{key}{value}")
        return "_".join(parts)


def _token(value: Any) -> str:
    if isinstance(value, (tuple, list)):
        return ".".join(str(v) for v in value)
    return str(value)


@dataclass(frozen=True)
class GeneratedInstance:
    name: str
    instance: SynthInstance
    expected: Optional[bool] = None
    descriptor: Optional[InstanceDescriptor] = field(default=None, compare=False)

    @property
    def ltlf_text(self) -> str:
        return f"{to_text(self.instance.main)}\n{to_text(self.instance.backup)}\n"

    @property
    def part_text(self) -> str:
        return self.instance.partition.to_text()

    @property
    def expected_text(self) -> str:
        return expected_token(self.expected)


def expected_token(expected: Optional[bool]) -> str:
    if expected is None:
        return EXPECTED_UNKNOWN
    return EXPECTED_REALIZABLE if expected else EXPECTED_UNREALIZABLE


def parse_expected(text: str) -> Optional[bool]:
    token = text.strip().lower()
    if token == EXPECTED_REALIZABLE:
        return True
    if token == EXPECTED_UNREALIZABLE:
        return False
    if token in (EXPECTED_UNKNOWN, ""):
        return None
    raise GeneratorError(f"expected file must contain 0, 1 or unknown, got '{text.strip()}'")


# --- Sheep ---

def _sheep_pairs(n: int, pairs: Iterable[Sequence[int]], what: str) -> Tuple[Tuple[int, int], ...]:
    result = set()
    for pair in pairs:
        if len(pair) != 2:
            raise GeneratorError(f"{what} entry {tuple(pair)} is not a pair")
        i, j = sorted(int(v) for v in pair)
        if i == j or i < 1 or j > n:
            raise GeneratorError(f"{what} pair ({i}, {j}) is not a pair of distinct sheep in 1..{n}")
        result.add((i, j))
    return tuple(sorted(result))


def _exactly_two(props: Sequence[Formula]) -> Formula:
    """Quadratic encoding: one disjunct per pair, fixing every variable."""
    return or_(*[and_(*[p if k in (i, j) else not_(p) for k, p in enumerate(props)])
                 for i, j in combinations(range(len(props)), 2)])


def gen_sheep(n: int, disliked: Iterable[Sequence[int]] = (), liked: Iterable[Sequence[int]] = (),
              favorites: Iterable[int] = (1,)) -> SynthInstance:
    """Sheep-crossing instance.

    Each step the agent requests exactly two sheep to be moved; two sheep
    that are both on the left and requested together cross unless their pair
    is blocked. Pairs in ``disliked`` or ``liked`` get an unreliable
    ``disallow_i_j`` input. The main environment pins disliked pairs to
    blocked and liked pairs to unblocked; the backup environment leaves
    them free. Main goal: all sheep cross. Backup goal: the favorites cross.

    Raises:
        GeneratorError: If n < 2, a pair is malformed or repeated across the
            two sets, or a favorite is out of range.
    """
    if n < 2:
        raise GeneratorError(f"sheep needs at least 2 sheep, got {n}")
    disliked = _sheep_pairs(n, disliked, "disliked")
    liked = _sheep_pairs(n, liked, "liked")
    overlap = set(disliked) & set(liked)
    if overlap:
        raise GeneratorError(f"pairs both disliked and liked: {sorted(overlap)}")
    favorites = tuple(sorted(set(int(s) for s in favorites)))
    if not favorites or favorites[0] < 1 or favorites[-1] > n:
        raise GeneratorError(f"favorites must be a nonempty subset of 1..{n}")

    sheep = range(1, n + 1)
    move = {s: atom(f"move_{s}") for s in sheep}
    left = {s: atom(f"left_{s}") for s in sheep}
    blocked = sorted(set(disliked) | set(liked))
    disallow = {pair: atom(f"disallow_{pair[0]}_{pair[1]}") for pair in blocked}

    agent = always(_exactly_two([move[s] for s in sheep]))

    env: List[Formula] = [and_(*[left[s] for s in sheep])]
    for s in sheep:
        env.append(always(implies(and_(next_(not_(move[s])), not_(left[s])), next_(not_(left[s])))))
        env.append(always(implies(and_(next_(not_(move[s])), left[s]), next_(left[s]))))
    for i, j in combinations(sheep, 2):
        both_left = [left[i], left[j]]
        crossed = next_(and_(not_(left[i]), not_(left[j])))
        if (i, j) in disallow:
            d = disallow[(i, j)]
            env.append(always(implies(and_(next_(and_(move[i], move[j], not_(d))), *both_left), crossed)))
            env.append(always(implies(and_(next_(and_(move[i], move[j], d)), *both_left),
                                      next_(and_(left[i], left[j])))))
        else:
            env.append(always(implies(and_(next_(and_(move[i], move[j])), *both_left), crossed)))
    pins = [always(not_(disallow[pair])) for pair in liked] + [always(disallow[pair]) for pair in disliked]

    goal = eventually(and_(*[not_(left[s]) for s in sheep]))
    backup_goal = eventually(and_(*[not_(left[s]) for s in favorites]))
    main = and_(agent, implies(and_(*env, *pins), goal))
    backup = and_(agent, implies(and_(*env), backup_goal))

    partition = Partition(
        outputs=tuple(f"move_{s}" for s in sheep),
        rel_inputs=tuple(f"left_{s}" for s in sheep),
        unr_inputs=tuple(d.name for d in disallow.values()),
    )
    return SynthInstance(main, backup, partition)


def sheep_expected(n: int, disliked: Sequence = (), liked: Sequence = ()) -> Optional[bool]:
    """Odd flocks can never all cross; even flocks with no constrained pairs always can."""
    if n % 2:
        return False
    if not disliked and not liked:
        return True
    return None


# --- Trap ---

@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    trap: Optional[int] = None
    alt: Optional[int] = None


@dataclass(frozen=True)
class TrapGraph:
    """Graph with at most two outgoing edges per vertex; the first is taken on `left`."""
    n_vertices: int
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        if self.n_vertices < 1:
            raise GeneratorError("graph needs at least one vertex")
        degree: Dict[int, int] = {}
        for e in self.edges:
            for v in (e.src, e.dst) + ((e.alt,) if e.alt is not None else ()):
                if not 0 <= v < self.n_vertices:
                    raise GeneratorError(f"vertex {v} out of range 0..{self.n_vertices - 1}")
            degree[e.src] = degree.get(e.src, 0) + 1
            if degree[e.src] > 2:
                raise GeneratorError(f"vertex {e.src} has more than 2 outgoing edges")

    @property
    def traps(self) -> Tuple[int, ...]:
        return tuple(sorted({e.trap for e in self.edges if e.trap is not None}))

    def out_edges(self, v: int) -> List[Edge]:
        return [e for e in self.edges if e.src == v]


def parse_graph(text: str, n_vertices: Optional[int] = None) -> TrapGraph:
    """Parse one edge per line: ``src dst [trap_id alt_dst]``. '#' starts a comment.

    Raises:
        GeneratorError: With the 1-based line number of the offending line.
    """
    edges: List[Edge] = []
    degree: Dict[int, int] = {}
    highest = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) not in (2, 4):
            raise GeneratorError("expected 'src dst' or 'src dst trap_id alt_dst'", line=lineno)
        try:
            values = [int(v) for v in fields]
        except ValueError:
            raise GeneratorError(f"non-integer field in '{line}'", line=lineno) from None
        if any(v < 0 for v in values):
            raise GeneratorError(f"negative field in '{line}'", line=lineno)
        src, dst = values[0], values[1]
        degree[src] = degree.get(src, 0) + 1
        if degree[src] > 2:
            raise GeneratorError(f"vertex {src} has more than 2 outgoing edges", line=lineno)
        edge = Edge(src, dst, values[2], values[3]) if len(values) == 4 else Edge(src, dst)
        highest = max(highest, src, dst, edge.alt if edge.alt is not None else -1)
        edges.append(edge)
    if not edges and n_vertices is None:
        raise GeneratorError("graph has no edges")
    if n_vertices is None:
        n_vertices = highest + 1
    elif highest >= n_vertices:
        raise GeneratorError(f"vertex {highest} out of range for {n_vertices} vertices")
    return TrapGraph(n_vertices, tuple(edges))


def _position_bits(n_vertices: int) -> int:
    return max(1, (n_vertices - 1).bit_length())


def gen_trap(graph: Union[TrapGraph, str], start: int, main_region: Iterable[int],
             backup_region: Iterable[int]) -> SynthInstance:
    """Graph-walking instance with unreliable traps.

    The environment reports the robot's vertex in binary over ``p0..`` and
    the trap states ``t<id>``. Each step the agent outputs ``left`` to take
    the first outgoing edge or not to take the second; a missing edge keeps
    the robot in place. A trapped edge leads to its alternative endpoint
    while the trap is on. Traps never change. The move choice is read with a
    strong next, so the move rules say nothing about the last instant. Both
    goals have the form env -> OR_{v in region} F pos(v).

    Raises:
        GeneratorError: If start or a region vertex is out of range or a region is empty.
    """
    if isinstance(graph, str):
        graph = parse_graph(graph)
    n = graph.n_vertices
    main_region = tuple(sorted(set(main_region)))
    backup_region = tuple(sorted(set(backup_region)))
    for what, vertices in (("start", (start,)), ("main region", main_region), ("backup region", backup_region)):
        if not vertices:
            raise GeneratorError(f"{what} is empty")
        for v in vertices:
            if not 0 <= v < n:
                raise GeneratorError(f"{what} vertex {v} out of range 0..{n - 1}")

    bits = _position_bits(n)
    pos_atoms = [atom(f"p{j}") for j in range(bits)]

    def pos(v: int) -> Formula:
        return and_(*[p if v >> j & 1 else not_(p) for j, p in enumerate(pos_atoms)])

    go_left = atom("left")
    env: List[Formula] = [pos(start)]
    for v in range(n):
        out = graph.out_edges(v)
        for slot, direction in enumerate((next_(go_left), next_(not_(go_left)))):
            if slot >= len(out):
                env.append(always(implies(and_(pos(v), direction), next_(pos(v)))))
                continue
            e = out[slot]
            if e.trap is None:
                env.append(always(implies(and_(pos(v), direction), next_(pos(e.dst)))))
            else:
                t = atom(f"t{e.trap}")
                env.append(always(implies(and_(pos(v), direction, not_(t)), next_(pos(e.dst)))))
                env.append(always(implies(and_(pos(v), direction, t), next_(pos(e.alt)))))
    for trap in graph.traps:
        t = atom(f"t{trap}")
        env.append(implies(t, always(t)))
        env.append(implies(not_(t), always(not_(t))))

    phi_env = and_(*env)
    main = implies(phi_env, or_(*[eventually(pos(v)) for v in main_region]))
    backup = implies(phi_env, or_(*[eventually(pos(v)) for v in backup_region]))
    partition = Partition(
        outputs=("left",),
        rel_inputs=tuple(p.name for p in pos_atoms),
        unr_inputs=tuple(f"t{trap}" for trap in graph.traps),
    )
    return SynthInstance(main, backup, partition)


@dataclass(frozen=True)
class NamedGraph:
    text: str
    start: int
    main_region: Tuple[int, ...]
    backup_region: Tuple[int, ...]
    expected: Optional[bool] = None


NAMED_GRAPHS: Dict[str, NamedGraph] = {
    # No traps; the goal is the end of a corridor.
    "corridor": NamedGraph("0 1\n1 2\n2 3\n", 0, (3,), (3,), True),
    # Trap 0 diverts the direct edge to the goal into the backup region; a detour avoids it.
    "diverted": NamedGraph("0 1 0 2\n0 3\n3 1\n", 0, (1,), (1, 2), True),
    # Vertex 2 is only reachable from itself.
    "unreachable": NamedGraph("0 1\n1 0\n2 2\n", 0, (2,), (2,), False),
    "fork8": NamedGraph(
        "0 1 0 2\n0 3\n1 4\n2 5\n3 4 1 6\n3 5\n4 7\n5 7\n", 0, (7,), (6, 7), True),
}


def gen_named_trap(name: str) -> SynthInstance:
    if name not in NAMED_GRAPHS:
        raise GeneratorError(f"unknown graph '{name}' (expected one of {', '.join(sorted(NAMED_GRAPHS))})")
    g = NAMED_GRAPHS[name]
    return gen_trap(g.text, g.start, g.main_region, g.backup_region)


# --- Hiker ---

HIKER_OUTPUTS = ("eat", "take_medicine", "collect_medicine")
HIKER_RELIABLE = ("berry", "herbs", "sick", "eot", "inbag")
HIKER_UNRELIABLE = ("poison",)


def gen_hiker(k: int, herb_forced: bool) -> SynthInstance:
    """Hiker-on-a-trail instance with end of trail after k steps.

    ``sick`` and ``inbag`` follow successor-state axioms: the hiker falls
    sick after eating a poisonous berry and is cured by taking carried herbs;
    herbs enter the bag when collected right after passing them. With
    ``herb_forced`` herbs grow at step k-3. Only ``poison`` is unreliable.

    Raises:
        GeneratorError: If k < 4.
    """
    if k < 4:
        raise GeneratorError(f"hiker trail length must be at least 4, got {k}")
    berry, poison, herbs, sick, eot, inbag = (atom(name) for name in
                                              ("berry", "poison", "herbs", "sick", "eot", "inbag"))
    eat, take, collect = (atom(name) for name in HIKER_OUTPUTS)

    env: List[Formula] = [
        not_(sick),
        not_(eot),
        always(implies(berry, not_(herbs))),
        always(implies(poison, berry)),
        always(iff(next_(sick),
                   and_(next_(TRUE), or_(and_(next_(eat), berry, poison), and_(sick, not_(and_(inbag, take))))))),
        always(iff(next_(inbag),
                   and_(next_(TRUE), or_(and_(herbs, next_(collect)), and_(inbag, not_(take)))))),
        next_n(k, eot, weak=True),
    ]
    env.extend(next_n(j, not_(eot), weak=True) for j in range(1, k))
    env.append(always(implies(eot, wnext(eot))))
    env.append(always(implies(eot, not_(berry))))
    if herb_forced:
        env.append(next_n(k - 3, herbs, weak=True))
    phi_env = and_(*env)

    main = implies(phi_env, and_(eventually(eot), always(implies(and_(berry, not_(poison)), wnext(eat)))))
    backup = implies(phi_env, eventually(and_(eot, not_(sick))))
    partition = Partition(outputs=HIKER_OUTPUTS, rel_inputs=HIKER_RELIABLE, unr_inputs=HIKER_UNRELIABLE)
    return SynthInstance(main, backup, partition)


# --- Random Instances ---

RANDOM_PARTITION = Partition(outputs=("y",), rel_inputs=("a",), unr_inputs=("u",))

_UNARY = (not_, next_, wnext, eventually, always)
_BINARY = (and_, or_, until, release)


def random_formula(rng: random.Random, props: Sequence[str], depth: int) -> Formula:
    """Random quantifier-free formula of depth at most ``depth`` over props."""
    if depth <= 1 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.05:
            return TRUE
        if roll < 0.1:
            return FALSE
        return atom(rng.choice(props))
    if rng.random() < 0.45:
        return rng.choice(_UNARY)(random_formula(rng, props, depth - 1))
    op = rng.choice(_BINARY)
    return op(random_formula(rng, props, depth - 1), random_formula(rng, props, depth - 1))


def gen_random(seed: int, index: int = 0, depth: int = 3) -> SynthInstance:
    rng = random.Random(f"{seed}:{index}")
    props = RANDOM_PARTITION.order
    return SynthInstance(random_formula(rng, props, depth), random_formula(rng, props, depth), RANDOM_PARTITION)


def random_instances(count: int, seed: int = 0) -> List[InstanceDescriptor]:
    return [InstanceDescriptor("random", (("seed", seed), ("index", i))) for i in range(count)]


# --- Descriptors ---

def sheep_descriptor(n: int, disliked: Sequence = (), liked: Sequence = (),
                     favorites: Sequence[int] = (1,)) -> InstanceDescriptor:
    params: List[Tuple[str, Any]] = [("n", n)]
    if disliked:
        params.append(("d", tuple(tuple(p) for p in disliked)))
    if liked:
        params.append(("l", tuple(tuple(p) for p in liked)))
    params.append(("fav", tuple(favorites)))
    return InstanceDescriptor("sheep", tuple(params), sheep_expected(n, disliked, liked))


def trap_descriptor(graph: str) -> InstanceDescriptor:
    if graph not in NAMED_GRAPHS:
        raise GeneratorError(f"unknown graph '{graph}' (expected one of {', '.join(sorted(NAMED_GRAPHS))})")
    return InstanceDescriptor("trap", (("graph", graph),), NAMED_GRAPHS[graph].expected)


def hiker_descriptor(k: int, herb_forced: bool) -> InstanceDescriptor:
    return InstanceDescriptor("hiker", (("k", k), ("herbs", herb_forced)), herb_forced)


def _generate_sheep(o: Dict[str, Any]) -> SynthInstance:
    return gen_sheep(o["n"], o.get("d", ()), o.get("l", ()), o.get("fav", (1,)))


_GENERATORS: Dict[str, Callable[[Dict[str, Any]], SynthInstance]] = {
    "sheep": _generate_sheep,
    "trap": lambda o: gen_named_trap(o["graph"]),
    "hiker": lambda o: gen_hiker(o["k"], o["herbs"]),
    "random": lambda o: gen_random(o["seed"], o.get("index", 0), o.get("depth", 3)),
}


def generate(desc: InstanceDescriptor) -> GeneratedInstance:
    try:
        instance = _GENERATORS[desc.family](desc.options)
    except KeyError as exc:
        raise GeneratorError(f"{desc.family} instance is missing parameter {exc}") from None
    return GeneratedInstance(desc.name, instance, desc.expected, desc)


def desk_suite(random_count: int = 0, seed: int = 0) -> List[InstanceDescriptor]:
    """Desk-scale suite: sheep n in 2..4, the named trap graphs, hiker k in 4..8 with and without herbs."""
    suite = [sheep_descriptor(n) for n in (2, 3, 4)]
    suite.append(sheep_descriptor(4, liked=((1, 2),), favorites=(1,)))
    suite.extend(trap_descriptor(name) for name in NAMED_GRAPHS)
    suite.extend(hiker_descriptor(k, herbs) for k in range(4, 9) for herbs in (True, False))
    suite.extend(random_instances(random_count, seed))
    return suite


# --- Instance Files ---

def write_instance(gi: GeneratedInstance, out_dir: str) -> str:
    """Write `<out_dir>/<name>/` with the formula, partition and expected files; returns the directory."""
    target = os.path.join(out_dir, gi.name)
    os.makedirs(target, exist_ok=True)
    with open(os.path.join(target, gi.name + LTLF_SUFFIX), "w") as f:
        f.write(gi.ltlf_text)
    with open(os.path.join(target, gi.name + PART_SUFFIX), "w") as f:
        f.write(gi.part_text)
    with open(os.path.join(target, EXPECTED_FILE), "w") as f:
        f.write(gi.expected_text + "\n")
    logger.debug("wrote %s", target)
    return target


def _single_file(directory: str, suffix: str) -> str:
    matches = sorted(name for name in os.listdir(directory) if name.endswith(suffix))
    if len(matches) != 1:
        raise SynthError(f"{directory}: expected exactly one {suffix} file, found {len(matches)}",
                         error_type="format")
    return os.path.join(directory, matches[0])


def load_instance(directory: str) -> GeneratedInstance:
    """Read an instance directory written by write_instance (or laid out the same way).

    Raises:
        SynthError: If the directory does not hold exactly one `.ltlf` and one `.part` file.
        OSError: If the files cannot be read.
    """
    with open(_single_file(directory, LTLF_SUFFIX)) as f:
        ltlf_text = f.read()
    with open(_single_file(directory, PART_SUFFIX)) as f:
        part_text = f.read()
    expected = None
    expected_path = os.path.join(directory, EXPECTED_FILE)
    if os.path.exists(expected_path):
        with open(expected_path) as f:
            expected = parse_expected(f.read())
    name = os.path.basename(os.path.normpath(directory))
    return GeneratedInstance(name, SynthInstance.from_text(ltlf_text, part_text), expected)


# --- Cross-Check Harness ---

@dataclass
class ModeOutcome:
    """Result of one mode on one instance. ``status`` is ok, error or timeout."""
    mode: str
    status: str = "ok"
    realizable: Optional[bool] = None
    verified: Optional[bool] = None
    states: Dict[str, int] = field(default_factory=dict)
    construction_ms: float = 0.0
    game_ms: float = 0.0
    wall_ms: float = 0.0
    message: str = ""

    @property
    def verdict(self) -> str:
        if self.realizable is None:
            return ""
        return REALIZABLE if self.realizable else UNREALIZABLE


@dataclass
class CrossCheckReport:
    name: str
    expected: Optional[bool]
    outcomes: List[ModeOutcome] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def verdict(self) -> Optional[bool]:
        """The agreed verdict, or None if no mode finished or the modes disagree."""
        verdicts = {o.realizable for o in self.outcomes if o.status == "ok"}
        return verdicts.pop() if len(verdicts) == 1 else None


def _run_mode(gi: GeneratedInstance, mode: str, limits: Limits, horizon: Optional[int],
              main_dfa: Optional[Dfa], shared_ms: float) -> ModeOutcome:
    inst = gi.instance
    outcome = ModeOutcome(mode)
    start = time.perf_counter()
    try:
        result = synth(inst, mode, limits, main_dfa=main_dfa)
        outcome.realizable = result.realizable
        outcome.states = dict(result.states)
        outcome.construction_ms = result.construction_ms + shared_ms
        outcome.game_ms = result.game_ms
        if result.strategy is not None:
            bound = horizon if horizon is not None else result.winning_size
            check = verify_strategy(result.strategy, inst.main, inst.backup, inst.partition, bound, limits)
            outcome.verified = check.passed
            if not check.passed:
                shown = " ".join("{" + ",".join(sorted(x)) + "}" for x in check.counterexample or ())
                outcome.message = f"{check.reason} on inputs {shown}"
    except SynthError as exc:
        outcome.status = "error"
        outcome.message = str(exc)
    outcome.wall_ms = (time.perf_counter() - start) * 1000.0 + shared_ms
    return outcome


def cross_check(target: Union[InstanceDescriptor, GeneratedInstance], horizon: Optional[int] = None,
                modes: Sequence[str] = MODES, limits: Limits = DEFAULT_LIMITS) -> CrossCheckReport:
    """Run every mode on one instance and compare.

    The main DFA is compiled once and shared by the direct and belief modes.
    Each realizable mode's strategy is verified at ``horizon`` rounds, or at
    the size of that mode's winning set when horizon is None.

    Returns:
        A report whose ``failures`` name the modes (and stages) of every
        error, disagreement, failed verification or unexpected verdict.
    """
    gi = generate(target) if isinstance(target, InstanceDescriptor) else target
    modes = [normalize_mode(m) for m in modes]
    report = CrossCheckReport(gi.name, gi.expected)

    main_dfa: Optional[Dfa] = None
    shared_ms = 0.0
    main_error: Optional[str] = None
    if MODE_DIRECT in modes and MODE_BELIEF in modes:
        start = time.perf_counter()
        try:
            main_dfa = ltlf_to_dfa(gi.instance.main, gi.instance.partition.order, limits, stage=STAGE_DFA_MAIN)
        except SynthError as exc:
            main_error = str(exc)
        shared_ms = (time.perf_counter() - start) * 1000.0

    for mode in modes:
        shared = mode in (MODE_DIRECT, MODE_BELIEF)
        if shared and main_error is not None:
            outcome = ModeOutcome(mode, status="error", message=main_error, wall_ms=shared_ms)
        else:
            outcome = _run_mode(gi, mode, limits, horizon, main_dfa if shared else None,
                                shared_ms if shared else 0.0)
        report.outcomes.append(outcome)
        if outcome.status != "ok":
            report.failures.append(f"{mode}: {outcome.message}")
        elif outcome.verified is False:
            report.failures.append(f"{mode}: strategy failed verification: {outcome.message}")

    finished = [o for o in report.outcomes if o.status == "ok"]
    if len({o.realizable for o in finished}) > 1:
        report.failures.append("verdicts disagree: " + ", ".join(f"{o.mode}={o.verdict}" for o in finished))
    elif finished and gi.expected is not None and finished[0].realizable != gi.expected:
        report.failures.append(
            f"expected {REALIZABLE if gi.expected else UNREALIZABLE} but "
            + ", ".join(o.mode for o in finished) + f" report {finished[0].verdict}")

    for failure in report.failures:
        logger.warning("%s: %s", gi.name, failure)
    return report
