"""Exception types raised by the package."""

import numpy as np


class SingularGramError(np.linalg.LinAlgError):
    """Unregularized Gram matrix is not numerically invertible."""

    def __init__(self, min_eigenvalue, max_eigenvalue, dim):
        self.min_eigenvalue = float(min_eigenvalue)
        self.max_eigenvalue = float(max_eigenvalue)
        self.dim = int(dim)
        super().__init__(
            f"singular Gram matrix: smallest eigenvalue {self.min_eigenvalue:.3e} "
            f"(largest {self.max_eigenvalue:.3e}, dimension {self.dim}); "
            "use lambda > 0 or add samples"
        )


class NumericalDriftError(np.linalg.LinAlgError):
    """Recursive update lost positive definiteness through round-off."""


class DegenerateDensityError(ValueError):
    """The pNML density is improper (h == 1)."""


class OracleDivergenceError(ValueError):
    """Brute-force normalizer refused: the query is (nearly) non-learnable."""


class DataFormatError(ValueError):
    """Malformed CSV input; the message carries the offending line number."""
