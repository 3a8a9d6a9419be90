"""Exception hierarchy for the pipeline."""


class CdspError(Exception):
    """Base class for all pipeline errors."""


class NonConvergence(CdspError):
    """An iterative solver exhausted its budget without meeting its residual target."""


class NotARoot(CdspError):
    """Synthetic division attempted at a point that is not a root."""


class NotPSD(CdspError):
    """A matrix required to be positive semidefinite has a significantly negative pivot."""


class Singular(CdspError):
    """A linear system is numerically singular."""


class ParseError(CdspError):
    """Malformed measure specification."""


class ValidationError(CdspError):
    """A measure violates its invariants (duplicate atoms, nonpositive weight, off-circle point)."""


class RootOnCircle(CdspError):
    """Spectral factorization found a root too close to the unit circle; measure is degenerate for this pipeline."""


class PairingFailure(CdspError):
    """Roots could not be matched into reflection pairs (beta, 1/conj(beta))."""


class PoleHit(CdspError):
    """Evaluation requested at (or too near) a pole."""


class DegenerateAtom(CdspError):
    """The outer function has a vanishing derivative at an atom."""


class IllConditioned(CdspError):
    """An interpolation system is too ill-conditioned to trust."""


class DegenerateAlphas(CdspError):
    """Exterior roots are not pairwise distinct."""


class Overflow(CdspError):
    """A coefficient-shift would push mass past the truncation boundary."""
