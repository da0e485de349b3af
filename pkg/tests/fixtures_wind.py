"""Synthetic wind fixtures shared by the CLI and acceptance suites."""

import math

from wakefarm.wind_resource import WindDistribution, default_speed_bin_edges


def make_highwind_distribution() -> WindDistribution:
    """Deterministic high-wind reference site: Weibull(scale 6.8, shape 2.2)
    speeds at 80 m (mean ~6 m/s, far above economic break-even for the
    default cost model) under a direction-uniform rose, which maximizes
    wake coupling in every sector."""
    lam, shape = 6.8, 2.2
    edges = default_speed_bin_edges()

    def cdf(v: float) -> float:
        return 1.0 - math.exp(-((v / lam) ** shape))

    masses = [cdf(edges[i + 1]) - cdf(edges[i]) for i in range(len(edges) - 1)]
    masses[-1] += 1.0 - cdf(edges[-1])  # open top bin
    total = sum(masses)
    p_u = tuple(m / total for m in masses)
    p_theta = tuple([1.0 / 12] * 12)
    return WindDistribution(80.0, 12, tuple(edges), p_theta, p_u)
