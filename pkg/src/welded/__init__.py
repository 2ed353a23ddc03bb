"""Welded graphs, Gauss diagrams, peripheral systems and Milnor invariants."""

__version__ = "0.1.0"
