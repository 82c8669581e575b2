"""Exception hierarchy.

Every error carries the process exit code the command-line front end maps
it to: 2 for bad input, 3 for numerical failures.
"""


class SpinMechError(Exception):
    exit_code = 3


class InputError(SpinMechError, ValueError):
    exit_code = 2


class NumericalError(SpinMechError, ArithmeticError):
    exit_code = 3


class NoConvergence(NumericalError):
    pass


class OutOfRange(InputError):
    pass


class AllInvalid(InputError):
    pass


class SingularPoint(InputError):
    pass


class RankDeficient(NumericalError):
    pass


class DegenerateMap(RankDeficient):
    pass


class NoPeak(NumericalError):
    pass


class NotDecaying(NumericalError):
    pass


class EmptyBand(InputError):
    pass


class Underdetermined(NumericalError):
    pass


class NoRoot(NumericalError):
    pass


class InvalidProbability(InputError):
    pass


class UnknownKind(InputError):
    exit_code = 1
