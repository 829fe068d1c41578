class AsnocError(Exception):
    pass


class Infeasible(AsnocError):
    pass


class VariableCapExceeded(AsnocError):
    pass


class GrowthExhausted(AsnocError):
    pass


class UnknownSize(AsnocError):
    pass


class Unroutable(AsnocError):
    """Raised when some flows have no usable path; ``flows`` lists them."""

    def __init__(self, flows):
        self.flows = sorted(flows)
        super().__init__(f"unroutable flows: {self.flows}")
