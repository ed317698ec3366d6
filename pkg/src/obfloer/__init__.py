"""Combinatorial vanishing test for the open book contact class."""

__all__ = ["surface", "mapping", "heegaard", "nicify", "floer", "front"]
