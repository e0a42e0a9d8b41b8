"""Exact engine for graded standardly stratified algebras."""
