from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

DEN = 40


@st.composite
def rational_maps(draw, min_slope=None):
    """Valid exact (a, b, c), optionally with both slopes >= min_slope."""
    c = Fraction(draw(st.integers(1, DEN - 1)), DEN)
    a_max, b_max = 1 / c, 1 / (1 - c)
    lo_a = lo_b = Fraction(1, DEN)
    if min_slope is not None:
        lo_a = lo_b = Fraction(min_slope)
        if a_max < lo_a or b_max < lo_b:
            c = Fraction(1, 2)
            a_max = b_max = Fraction(2)
    a = lo_a + (a_max - lo_a) * Fraction(draw(st.integers(0, DEN)), DEN)
    b = lo_b + (b_max - lo_b) * Fraction(draw(st.integers(0, DEN)), DEN)
    return a, b, c


@st.composite
def float_maps(draw):
    c = draw(st.floats(0.05, 0.95))
    a = draw(st.floats(0.05, 1.0)) / c
    b = draw(st.floats(0.05, 1.0)) / (1 - c)
    return a, b, c


@st.composite
def step_densities(draw, exact=True, max_pieces=8):
    n = draw(st.integers(1, max_pieces))
    cuts = sorted(set(draw(st.lists(st.integers(1, 99), min_size=n - 1, max_size=n - 1))))
    bp = [Fraction(0)] + [Fraction(k, 100) for k in cuts] + [Fraction(1)]
    vals = [Fraction(draw(st.integers(0, 20)), 4) for _ in range(len(bp) - 1)]
    if not exact:
        bp = [float(t) for t in bp]
        vals = [float(v) for v in vals]
    return bp, vals
