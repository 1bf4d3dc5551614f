"""String diagrams for monoidal categories, with tensor, quantum and grammar semantics."""

__version__ = "0.1.0"
