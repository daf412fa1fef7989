"""Exact local-unitary invariants of bipartite quantum states."""
