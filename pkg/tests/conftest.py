from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def fractions(lo=-5, hi=5, max_den=6):
    return st.builds(
        lambda p, q: Fraction(p, q), st.integers(lo * max_den, hi * max_den), st.integers(1, max_den)
    )


@st.composite
def interior_points(draw, n):
    """Rational points strictly inside Delta_{n,2}."""
    while True:
        raw = [draw(st.integers(1, 60)) for _ in range(n)]
        x = [Fraction(2 * r, sum(raw)) for r in raw]
        if all(v < 1 for v in x):
            return tuple(x)
