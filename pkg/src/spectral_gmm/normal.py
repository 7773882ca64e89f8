"""Standard normal distribution function and density."""
import math

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def std_normal_cdf(t: float) -> float:
    # erfc keeps full relative accuracy in the lower tail, where Phi(-A) lives
    return 0.5 * math.erfc(-t / math.sqrt(2.0))


def std_normal_pdf(t: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * t * t)
