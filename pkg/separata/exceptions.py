"""
Exceptions raised by separata. Everything derives from SeparataException so
callers (and the command line front end) can catch one class.
"""


class SeparataException(Exception):
    pass


class FormulaSyntaxError(SeparataException):
    """
    Raised by formula.parse. ``offset`` is a byte offset into the UTF-8
    encoded input and ``expected`` the set of tokens that would have been
    accepted there.
    """
    def __init__(self, message, offset=0, expected=()):
        super(FormulaSyntaxError, self).__init__(message)
        self.offset = offset
        self.expected = frozenset(expected)


class AxiomSyntaxError(SeparataException):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = 'line %d: %s' % (lineno, message)
        super(AxiomSyntaxError, self).__init__(message)
        self.lineno = lineno


class InvalidAxiom(SeparataException):
    def __init__(self, name, violations, lineno=None):
        msg = '; '.join(str(v) for v in violations)
        if lineno is not None:
            msg = 'line %d: axiom %s: %s' % (lineno, name, msg)
        else:
            msg = 'axiom %s: %s' % (name, msg)
        super(InvalidAxiom, self).__init__(msg)
        self.name = name
        self.violations = list(violations)
        self.lineno = lineno


class UnknownSystem(SeparataException):
    pass


class SubstituteEpsilon(SeparataException):
    pass


class RuleNotApplicable(SeparataException):
    def __init__(self, reason):
        super(RuleNotApplicable, self).__init__(reason)
        self.reason = reason


class NotSaturated(SeparataException):
    pass


class UnknownWorld(SeparataException):
    pass


class UnmappedLabel(SeparataException):
    pass


class CapExceeded(SeparataException):
    pass


class ModelFormatError(SeparataException):
    pass


class BudgetExceeded(SeparataException):
    """Internal to the prover; turned into an Unknown verdict."""
    def __init__(self, reason):
        super(BudgetExceeded, self).__init__(reason)
        self.reason = reason
