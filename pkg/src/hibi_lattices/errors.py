"""Exception hierarchy shared by every module of the package."""


class HibiError(Exception):
    """Base class for all errors raised by :mod:`hibi_lattices`."""


class CycleDetected(HibiError):
    pass


class UnknownLabel(HibiError):
    pass


class SizeExceeded(HibiError):
    pass


class NotAPartialOrder(HibiError):
    pass


class NotALattice(HibiError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MultipleComplements(HibiError):
    def __init__(self, candidates):
        super().__init__(f"element has {len(candidates)} complements: {candidates}")
        self.candidates = list(candidates)


class NotMeetDistributive(HibiError):
    pass


class NotACover(HibiError):
    pass


class NotPosetIdeal(HibiError):
    pass


class IncompatibleVariables(HibiError):
    pass


class DegreeCapExceeded(HibiError):
    pass


class DefectSignal(HibiError):
    """Two routes that must agree did not.

    Raised only when an internal cross-check fails; seeing one means a bug,
    not bad input.
    """


class InternalDisagreement(DefectSignal):
    pass


class ConditionsDisagree(DefectSignal):
    pass


class OracleDisagreement(DefectSignal):
    pass


class KernelMismatch(DefectSignal):
    pass
