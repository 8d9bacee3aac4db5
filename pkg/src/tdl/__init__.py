"""Finite tense distributive lattices, their dualities and the sequent calculus Lt."""
