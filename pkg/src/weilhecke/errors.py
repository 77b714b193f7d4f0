"""Exception types raised across the package.

Every error carries a short machine-friendly name in ``kind`` so the CLI can
report it without parsing messages.
"""


class WeilHeckeError(Exception):
    kind = "Error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.kind)


def _make(name: str, base=WeilHeckeError):
    return type(name, (base,), {"kind": name})


# scalars
DivisionByZero = type("DivisionByZero", (WeilHeckeError, ZeroDivisionError), {"kind": "DivisionByZero"})
NonUnitDivision = _make("NonUnitDivision")
DomainError = _make("DomainError")
ParseError = _make("ParseError")

# quadratic modules
DegenerateLattice = _make("DegenerateLattice")
InvalidModule = _make("InvalidModule")
EvenPrime = _make("EvenPrime")
IsotropicModule = _make("IsotropicModule")
TooLarge = _make("TooLarge")
IndefiniteLattice = _make("IndefiniteLattice")
NotASublattice = _make("NotASublattice")

# metaplectic / Weil
BadCongruence = _make("BadCongruence")
NotScaledPermutation = _make("NotScaledPermutation")
NotInGroup = _make("NotInGroup")

# gauss sums
ZeroDenominator = _make("ZeroDenominator")
BadDenominator = _make("BadDenominator")

# expansions
TruncationExceeded = _make("TruncationExceeded")
ModuleMismatch = _make("ModuleMismatch")
BadResidue = _make("BadResidue")
WeightTooSmall = _make("WeightTooSmall")

# hecke
EvenPrimeForBeta = _make("EvenPrimeForBeta")
LevelNotCoprime = _make("LevelNotCoprime")
OddSignature = _make("OddSignature")
EvenSignature = _make("EvenSignature")
ZeroForm = _make("ZeroForm")
NotAnEigenform = _make("NotAnEigenform")

# l-series
NotSplit = _make("NotSplit")
NotIsotropic = _make("NotIsotropic")
AllCoefficientsZero = _make("AllCoefficientsZero")

# kloosterman
NotCoprime = _make("NotCoprime")
BadResidueClass = _make("BadResidueClass")
