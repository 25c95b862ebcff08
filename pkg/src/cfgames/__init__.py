"""Context-free game codings, counter Büchi machines and game engines."""

__version__ = "0.1.0"
