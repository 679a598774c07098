"""Exception types shared across the package."""


class ConfigError(Exception):
    """Invalid or inconsistent configuration (bad file, bad bracket, bad grid).

    CLI maps this to exit code 2.
    """


class NumericalAbort(RuntimeError):
    """Simulation aborted on a numerical guard (loss of positivity, CFL violation).

    Carries a diagnostic snapshot of the state at the moment of the abort.
    CLI maps this to exit code 3.
    """

    def __init__(self, message, snapshot=None):
        super().__init__(message)
        self.snapshot = snapshot
