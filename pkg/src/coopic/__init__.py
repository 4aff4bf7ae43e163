"""Rate regions, gap checks and deterministic-model tools for the two-user
Gaussian interference channel with conferencing receivers."""

__version__ = "0.1.0"
