"""
Synthesis Engine Configuration

Resource limits and per-run settings, built from command-line arguments.
"""

from dataclasses import dataclass, field
from typing import Any, Optional, Tuple

from constants import (
    MAX_ALPHABET_WIDTH, WARN_ALPHABET_WIDTH, DFA_STATE_LIMIT, SUBSET_LIMIT,
    ENUMERATION_BITS, MODES, MODE_ALIASES, DEFAULT_MODE, DEFAULT_BENCH_TIMEOUT,
    STAGES,
)
from errors import SynthError


def normalize_mode(mode: str) -> str:
    """Map a mode name or alias onto one of MODES."""
    mode = MODE_ALIASES.get(mode.lower(), mode.lower())
    if mode not in MODES:
        raise SynthError(f"unknown mode '{mode}' (expected one of {', '.join(MODES)})",
                         error_type="config")
    return mode


@dataclass(frozen=True)
class Limits:
    """Resource caps applied by every construction."""
    max_width: int = MAX_ALPHABET_WIDTH
    warn_width: int = WARN_ALPHABET_WIDTH
    dfa_state_limit: int = DFA_STATE_LIMIT
    subset_limit: int = SUBSET_LIMIT
    enumeration_bits: int = ENUMERATION_BITS

    def validate(self) -> 'Limits':
        for name in ("max_width", "warn_width", "dfa_state_limit", "subset_limit", "enumeration_bits"):
            if getattr(self, name) <= 0:
                raise SynthError(f"{name} must be positive", error_type="config")
        if self.warn_width > self.max_width:
            raise SynthError("warn_width exceeds max_width", error_type="config")
        return self


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class RunConfig:
    """Settings for one command-line run."""
    mode: str = DEFAULT_MODE
    ltlf_path: Optional[str] = None
    part_path: Optional[str] = None
    limits: Limits = field(default_factory=Limits)
    horizon: Optional[int] = None  # None: winning-set size
    verify: bool = False
    strategy_dot: Optional[str] = None
    emit: Tuple[str, ...] = ()
    emit_dir: str = "."
    csv_path: Optional[str] = None
    workers: Optional[int] = None
    timeout: float = DEFAULT_BENCH_TIMEOUT
    verbosity: int = 0
    minimize: bool = False

    @classmethod
    def from_args(cls, args: Any) -> 'RunConfig':
        """Build a RunConfig from an argparse namespace; missing attributes keep defaults."""
        def opt(name: str, default: Any) -> Any:
            value = getattr(args, name, None)
            return default if value is None else value

        limits = Limits(
            max_width=opt("max_width", MAX_ALPHABET_WIDTH),
            warn_width=min(opt("warn_width", WARN_ALPHABET_WIDTH), opt("max_width", MAX_ALPHABET_WIDTH)),
            dfa_state_limit=opt("state_limit", DFA_STATE_LIMIT),
            subset_limit=opt("subset_limit", SUBSET_LIMIT),
            enumeration_bits=opt("enumeration_bits", ENUMERATION_BITS),
        ).validate()

        emit = tuple(opt("emit", ()))
        for stage in emit:
            if stage not in STAGES:
                raise SynthError(f"unknown stage '{stage}' (expected one of {', '.join(STAGES)})",
                                 error_type="config")

        horizon = getattr(args, "verify", None)
        if horizon is not None and horizon < 0:
            raise SynthError("verification horizon must be non-negative", error_type="config")
        timeout = opt("timeout", DEFAULT_BENCH_TIMEOUT)
        if timeout <= 0:
            raise SynthError("timeout must be positive", error_type="config")
        workers = getattr(args, "workers", None)
        if workers is not None and workers <= 0:
            raise SynthError("workers must be positive", error_type="config")

        return cls(
            mode=normalize_mode(opt("mode", DEFAULT_MODE)),
            ltlf_path=getattr(args, "ltlf", None),
            part_path=getattr(args, "part", None),
            limits=limits,
            horizon=horizon or None,
            verify=horizon is not None,
            strategy_dot=getattr(args, "strategy_dot", None),
            emit=emit,
            emit_dir=opt("emit_dir", "."),
            csv_path=getattr(args, "csv", None),
            workers=workers,
            timeout=float(timeout),
            verbosity=opt("verbose", 0),
            minimize=bool(opt("minimize", False)),
        )
