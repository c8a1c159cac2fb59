"""hypersum: exact hypergeometric summation, telescoping, and holonomic closure."""

__version__ = "0.1.0"
