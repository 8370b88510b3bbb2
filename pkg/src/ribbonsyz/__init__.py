"""ribbonsyz: exact computation of syzygies of canonical split ribbons.

The package turns curve geometry over a prime field into dense matrices and
answers, by exact linear algebra: what is the Betti table of the canonical
ring of a split ribbon, does Green's conjecture hold for it, and where does
a given ribbon sit in the blow-up-index and gonality stratifications.
"""

from ribbonsyz.fflinalg import PrimeField

__version__ = "0.1.0"

__all__ = ["PrimeField", "__version__"]
