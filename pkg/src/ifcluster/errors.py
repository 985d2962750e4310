"""Exception hierarchy shared by all modules."""


class ClusteringError(Exception):
    """Base class for every error raised by this package."""


class StructureError(ClusteringError, ValueError):
    """Dimensions, indices or partitions do not fit together."""


class ParameterError(ClusteringError, ValueError):
    """A numeric parameter is outside its allowed range."""


class UndefinedRatioError(ClusteringError, ArithmeticError):
    """A class with users has zero intra-class weight, so its ratio is undefined."""

    def __init__(self, cls: int):
        super().__init__(f"class {cls} has users but zero intra-class weight")
        self.cls = cls


class InstanceTooLargeError(ClusteringError):
    """Exhaustive enumeration was refused because the search space is too big."""

    def __init__(self, count: int, limit: int):
        super().__init__(
            f"search space S(b,M)*M^u = {count} exceeds the limit {limit}"
        )
        self.count = count
        self.limit = limit
