"""
Synthesis Engine Constants

This module contains constant values used throughout the synthesis engine.
These constants define resource caps, cache sizes, pipeline stage names,
exit codes and the benchmark CSV schema.

All constants are meant to be imported and used instead of magic numbers
throughout the codebase.
"""

from typing import Dict, Tuple

# --- Resource Caps ---
MAX_ALPHABET_WIDTH: int = 16  # Letters are enumerated explicitly: 2**width per state
WARN_ALPHABET_WIDTH: int = 12  # Width at which a warning is logged
DFA_STATE_LIMIT: int = 2 ** 18  # Progression states per compiled formula
SUBSET_LIMIT: int = 2 ** 20  # Subsets materialized by determinize / belief
ENUMERATION_BITS: int = 20  # Brute-force oracles enumerate at most 2**20 cases

# --- Cache Configuration ---
FORMULA_CACHE_MAX_SIZE: int = 200000  # Hash-consed formula nodes
PROGRESSION_CACHE_MAX_SIZE: int = 100000  # (formula, letter) progression results
EVAL_CACHE_MAX_SIZE: int = 50000  # Memoized structural queries (quantifier checks, binder counts)

# --- Synthesis Modes ---
MODE_DIRECT: str = "direct"
MODE_BELIEF: str = "belief"
MODE_QLTLF: str = "qltlf"
MODES: Tuple[str, ...] = (MODE_DIRECT, MODE_BELIEF, MODE_QLTLF)
# Syft names the QLTLf technique "mso"
MODE_ALIASES: Dict[str, str] = {"mso": MODE_QLTLF}
DEFAULT_MODE: str = MODE_DIRECT

# --- Pipeline Stages ---
STAGE_DFA_MAIN: str = "dfa-main"
STAGE_DFA_BACKUP: str = "dfa-backup"
STAGE_ABSTRACTION: str = "abstraction"
STAGE_DETERMINIZE: str = "determinize"
STAGE_BELIEF: str = "belief"
STAGE_PRODUCT: str = "product"
STAGE_GAME: str = "game"
STAGES: Tuple[str, ...] = (
    STAGE_DFA_MAIN, STAGE_DFA_BACKUP, STAGE_ABSTRACTION, STAGE_DETERMINIZE,
    STAGE_BELIEF, STAGE_PRODUCT, STAGE_GAME,
)

# --- Verdicts and Exit Codes ---
REALIZABLE: str = "REALIZABLE"
UNREALIZABLE: str = "UNREALIZABLE"
EXIT_OK: int = 0
EXIT_REALIZABLE: int = 0
EXIT_UNREALIZABLE: int = 1  # Also: bench found a disagreement or failed verification
EXIT_ERROR: int = 2

# Contents of the `expected` file next to each generated instance
EXPECTED_REALIZABLE: str = "1"
EXPECTED_UNREALIZABLE: str = "0"
EXPECTED_UNKNOWN: str = "unknown"

# --- Benchmark Harness ---
DEFAULT_BENCH_TIMEOUT: float = 60.0  # Seconds per instance
CSV_SCHEMA_VERSION: int = 1
CSV_COLUMNS: Tuple[str, ...] = (
    "instance", "mode", "verdict", "status", "states_per_stage",
    "construction_ms", "game_ms", "wall_ms", "verified",
)

# --- Instance Files ---
LTLF_SUFFIX: str = ".ltlf"
PART_SUFFIX: str = ".part"
EXPECTED_FILE: str = "expected"
