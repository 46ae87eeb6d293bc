"""Local triple product integrals and Hecke amplifier checks for GL2 over Q_p."""

from ._localtriple import (
    Context,
    DomainError,
    ParseError,
    PrecisionError,
    TruncationError,
    amplifier_exponents,
    corollary_scan,
    hecke_check,
    parse_value,
    prime_window,
    run_acceptance,
    version,
)

__version__ = version()

__all__ = [
    "Context",
    "DomainError",
    "ParseError",
    "PrecisionError",
    "TruncationError",
    "amplifier_exponents",
    "corollary_scan",
    "hecke_check",
    "parse_value",
    "prime_window",
    "run_acceptance",
    "version",
]
