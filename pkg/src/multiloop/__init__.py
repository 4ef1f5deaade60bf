"""Twisted multiloop algebras and their universal central extension cocycle."""
