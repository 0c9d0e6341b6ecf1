"""Zeros of normalized exponential sums: critical strips, certified counts, density laws."""

from .core import (ExpSum, ExpTerm, LogScaledValue, as_normalized, eval_logderiv,
                   eval_scaled, evaluate, from_polynomial, normalize)
from .errors import (DegenerateSum, ExpSumError, InvalidInput, InvalidRadius,
                     NearZeroDivide, NoConvergence, NotCommensurable,
                     PerturbationExhausted, ZeroAtAnchor, ZeroOnPath)
from .strips import (CriticalStrip, StripDecomposition, ZeroFreeRegion, decompose,
                     dominance_intervals, dominance_margin, theorem_a_check)
from .winding import (BacklundBound, Rectangle, WindingResult, backlund_bound,
                      count_zeros, phase_change, spanning_rectangle, strip_rectangle)
from .zeros import (ZeroRecord, find_all_zeros, find_zeros,
                    oracle_zeros_commensurable)

eval = evaluate  # noqa: A001

__all__ = [name for name in dir() if not name.startswith("_")]
