from fractions import Fraction

from hypothesis import settings, strategies as st

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)
nonzero_fractions = small_fractions.filter(lambda x: x != 0)


def frac(text: str) -> Fraction:
    return Fraction(text)
