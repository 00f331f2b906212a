"""Numerical checks of the lemma chain, each returning exact reports."""
