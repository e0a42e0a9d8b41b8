"""Exact engine: linear algebra, graded algebras, modules and homology."""
