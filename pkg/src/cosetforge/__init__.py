"""Exact counting, coset-ring and character-norm tools for finite abelian p-groups."""

from .abelian import (Coset, GroupSpec, Subgroup, enumerate_cosets, enumerate_subgroups,
                      subgroup_from_generators, subgroup_type)
from .counting import (BoundValue, GroupClassSpec, count_cosets, count_subgroups,
                       lambda_constant, representable)
from .errors import CapExceeded, ExtractionFailure, PreconditionError
from .partition import Partition, conjugate
from .qbinom import gaussian_binomial

__version__ = "0.1.0"
