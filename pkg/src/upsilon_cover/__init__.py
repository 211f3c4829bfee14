"""Upsilon-type invariants of knots from cyclic branched covers."""
