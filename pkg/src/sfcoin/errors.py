"""Exception hierarchy. Every failed operation raises and leaves state unchanged."""


class SFCError(Exception):
    """Base class for all engine errors."""


# ledger

class LedgerError(SFCError):
    pass


class UnknownAccount(LedgerError):
    pass


class DuplicateAccount(LedgerError):
    pass


class RoleError(LedgerError):
    """An account's role does not permit the operation."""


class NotFundAccount(RoleError):
    pass


class NotInvestor(RoleError):
    pass


class NotLandowner(RoleError):
    pass


class EscrowLocked(RoleError):
    """Escrow balances can only leave through settlement."""


class AlreadyMinted(LedgerError):
    pass


class ZeroSupply(LedgerError):
    pass


class InvalidAmount(LedgerError):
    pass


class AmountOverflow(LedgerError):
    pass


class InsufficientBalance(LedgerError):
    pass


class InsufficientAllowance(LedgerError):
    pass


class SelfTransfer(LedgerError):
    pass


# escrow

class EscrowError(SFCError):
    pass


class UnknownContract(EscrowError):
    pass


class DuplicateContract(EscrowError):
    pass


class InvalidParcel(EscrowError):
    pass


class InvalidThreshold(EscrowError):
    pass


class MaturityInPast(EscrowError):
    pass


class ContractNotOpen(EscrowError):
    pass


class PastMaturity(EscrowError):
    pass


class NotYetMature(EscrowError):
    pass


# oracle

class OracleFailure(SFCError):
    """The oracle could not produce a verdict. Settlement leaves the contract open."""


class NoScriptEntry(OracleFailure):
    pass


class InvalidGrid(OracleFailure):
    pass


class GridMismatch(OracleFailure):
    pass


class NoIntersection(OracleFailure):
    pass


class DegenerateParcel(OracleFailure):
    pass


# sweep

class SweepError(SFCError):
    pass


class NotOnPeriodBoundary(SweepError):
    pass


class DuplicateSweep(SweepError):
    pass


class SweepTimeMismatch(SweepError):
    pass


# clock / scenario

class ClockError(SFCError):
    pass


class ScenarioError(SFCError):
    pass


class ParseError(ScenarioError):
    pass


class ValidationError(ScenarioError):
    pass


class StepError(ScenarioError):
    """A scenario step raised; the run halted at ``index``.

    ``engine`` holds the partially-run engine so callers can export the log
    up to the last successful step.
    """

    def __init__(self, index: int, op: str, cause: Exception, engine=None):
        super().__init__(f"step {index} ({op}) failed: {type(cause).__name__}: {cause}")
        self.index = index
        self.op = op
        self.cause = cause
        self.engine = engine
