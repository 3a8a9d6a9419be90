import numpy as np
import pytest

from cdsp import (NumericPolicy, build_dirichlet, build_trig, extract_C,
                  factorize, parse_measure)


class Pipe:
    def __init__(self, spec):
        self.measure = parse_measure(spec)
        self.trig = build_trig(self.measure)
        self.fr = factorize(self.trig)
        self.dd = build_dirichlet(self.measure, self.fr)
        self.hf = extract_C(self.dd)


SPECS = {
    "three_point": "0,1/3,2/3:1,1,1",
    "single": "0:1",
    "antipodal": "0,1/2:1,1",
    "quarter": "0,1/4:1,1",
}


@pytest.fixture(scope="session")
def pipes():
    return {name: Pipe(spec) for name, spec in SPECS.items()}


@pytest.fixture(scope="session")
def three_point(pipes):
    return pipes["three_point"]


@pytest.fixture(scope="session")
def policy():
    return NumericPolicy()


# closed-form constants for the equi-spaced three-point unit-weight case
B_CONST = (11.0 + 3.0 * np.sqrt(13.0)) / 2.0
ALPHA_CONST = B_CONST ** (1.0 / 3.0)
X_CONST = (np.sqrt(13.0) - 1.0) / 2.0
W_CONST = complex(-0.5, np.sqrt(3.0) / 2.0)
