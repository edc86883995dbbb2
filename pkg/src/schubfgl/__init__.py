"""Equivariant oriented cohomology of rank-2 flag varieties via moment graphs."""
