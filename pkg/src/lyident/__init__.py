"""Computer algebra engine for polynomial identities of Lie-Yamaguti algebras.

Submodules: freealg (association types and monomials), liftgen (defining
identities and their liftings), symrep (symmetric group representations),
exactla (exact linear algebra over Q and F_p), pipeline (per-representation
rank analysis), evallab (structure-constant algebras), cli (command line).
"""

__version__ = "0.1.0"
