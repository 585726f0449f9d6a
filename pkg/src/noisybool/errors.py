"""Exception hierarchy.

Every error carries a short machine-readable ``code`` which the CLI prints as
``error:<code>:<message>``.
"""


class NoisyBoolError(ValueError):
    code = "invalid"


class InvalidDimensionError(NoisyBoolError):
    code = "invalid_dimension"


class DimensionTooLargeError(NoisyBoolError):
    code = "dimension_too_large"


class DuplicateElementError(NoisyBoolError):
    code = "duplicate_element"


class ElementOutOfRangeError(NoisyBoolError):
    code = "element_out_of_range"


class SizeOutOfRangeError(NoisyBoolError):
    code = "size_out_of_range"


class CoordinateOutOfRangeError(NoisyBoolError):
    code = "coordinate_out_of_range"


class EmptyZeroSetError(NoisyBoolError):
    code = "empty_zero_set"


class LengthMismatchError(NoisyBoolError):
    code = "length_mismatch"


class ParseError(NoisyBoolError):
    code = "parse_error"


class ProbabilityOutOfRangeError(NoisyBoolError):
    code = "probability_out_of_range"


class CodewordOutOfRangeError(NoisyBoolError):
    code = "codeword_out_of_range"


class StepOutOfDomainError(NoisyBoolError):
    code = "step_out_of_domain"


class InvalidGridError(NoisyBoolError):
    code = "invalid_grid"


class DegenerateSizeError(NoisyBoolError):
    code = "degenerate_size"


class SpectrumSumMismatchError(NoisyBoolError):
    code = "spectrum_sum_mismatch"


class IndexOrderViolationError(NoisyBoolError):
    code = "index_order_violation"


class DomainViolationError(NoisyBoolError):
    code = "domain_violation"


class ParameterTooLargeError(NoisyBoolError):
    code = "parameter_too_large"


class InstanceTooLargeError(NoisyBoolError):
    code = "instance_too_large"


class GridTooCoarseError(NoisyBoolError):
    code = "grid_too_coarse"
