"""Exception hierarchy. Each class carries a short machine-readable code."""


class QueueModelError(Exception):
    code = "error"


class ParameterError(QueueModelError, ValueError):
    code = "parameter_domain"


class InfeasibleFitError(QueueModelError, ValueError):
    code = "infeasible_fit"


class UnstableQueueError(QueueModelError, ValueError):
    code = "unstable_queue"


class SolverError(QueueModelError, RuntimeError):
    code = "solver"


class OracleInfeasibleError(SolverError):
    code = "oracle_infeasible"


class UndefinedConditionalError(QueueModelError, ArithmeticError):
    code = "undefined_conditional"


class EstimationError(QueueModelError, RuntimeError):
    code = "estimation"
