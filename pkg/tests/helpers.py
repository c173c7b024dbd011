"""Shared helpers for the test suite: trace enumeration, bounded game search and a scripted bench worker."""
import itertools
import os
import sys
import time

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from logic import iter_rewritings, satisfies


def all_letters(props):
    """Every subset of props as a frozenset, in bit order."""
    props = tuple(props)
    return [frozenset(p for i, p in enumerate(props) if bits >> i & 1) for bits in range(1 << len(props))]


def all_traces(props, max_len, min_len=1):
    """Every trace over props with min_len <= length <= max_len."""
    letters = all_letters(props)
    for n in range(min_len, max_len + 1):
        for t in itertools.product(letters, repeat=n):
            yield t


def goals_hold(t, main, backup, partition):
    """Both acceptance conditions at the end of t."""
    return satisfies(t, main) and all(satisfies(u, backup) for u in iter_rewritings(t, partition.unr_inputs))


def bounded_realizable(main, backup, partition, depth):
    """Exhaustive search over agent decision trees of the given depth.

    Each round the agent picks an output letter knowing the inputs so far,
    then every input letter is tried; a branch is won once the trace read so
    far meets both acceptance conditions.
    """
    outputs = all_letters(partition.outputs)
    inputs = all_letters(partition.inputs)

    def win(prefix, rounds):
        for y in outputs:
            if all(goals_hold(prefix + (y | x,), main, backup, partition)
                   or (rounds > 1 and win(prefix + (y | x,), rounds - 1))
                   for x in inputs):
                return True
        return False

    return win((), depth)


def observation_realizable(goal, partition, depth):
    """Bounded search for an agent that never sees the unreliable inputs.

    Each round the agent picks an output letter knowing only the reliable
    inputs so far; a branch is won once every completion of the unreliable
    inputs satisfies goal.
    """
    outputs = all_letters(partition.outputs)
    reliable = all_letters(partition.rel_inputs)

    def known(prefix):
        return all(satisfies(t, goal) for t in iter_rewritings(prefix, partition.unr_inputs))

    def win(prefix, rounds):
        for y in outputs:
            if all(known(prefix + (y | x,)) or (rounds > 1 and win(prefix + (y | x,), rounds - 1))
                   for x in reliable):
                return True
        return False

    return win((), depth)


def scripted_bench(directory, modes, limits, horizon):
    """Bench worker that hangs on directories named 'stalled', dies on 'crashed', else cross-checks."""
    name = os.path.basename(os.path.normpath(directory))
    if name == "stalled":
        time.sleep(60)
    if name == "crashed":
        os._exit(3)
    from commands.bench import bench_instance
    return bench_instance(directory, modes, limits, horizon)
