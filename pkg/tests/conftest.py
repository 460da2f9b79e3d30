import sys
from fractions import Fraction
from pathlib import Path

import hypothesis.strategies as st
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=25)
settings.load_profile("default")


def rationals(lo=-5, hi=5, den=7, nonzero=False):
    s = st.fractions(min_value=lo, max_value=hi, max_denominator=den)
    return s.filter(lambda v: v != 0) if nonzero else s


def records(order=6, c1_nonzero=True, c2_nonzero=False):
    """Coefficient tuples c1..c9 with the order-6 tail zeroed."""
    n = 6 if order == 6 else 9

    def build(vals):
        vals = list(vals) + [Fraction(0)] * (9 - len(vals))
        return vals

    parts = [rationals(nonzero=c1_nonzero), rationals(nonzero=c2_nonzero)]
    parts += [rationals() for _ in range(n - 2)]
    return st.tuples(*parts).map(build)


points = st.tuples(*[rationals(-3, 3, 5) for _ in range(5)])
float_points = st.tuples(*[st.floats(-2, 2, allow_nan=False) for _ in range(5)])
