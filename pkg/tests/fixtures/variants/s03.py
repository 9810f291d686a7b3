"""Module docstring

import math


def area(r):
    """Circle area."""
    return math.pi * r ** 2
# end
