import textwrap

import pytest

MINIMAL = """
[model]
sigma = 0.25
gamma = 0.0

[grid]
m_min = 0.1
m_max = 10.0
cells_per_decade = 5

[initial]
kind = "exponential"
"""

BOUNDS = """
[model]
sigma = 0.0
gamma = 0.0
k3 = 0.1
gamma_poly = [0.0, 2.0]
lambda_growth = 2.0
kernel_form = "product-singular"
selection_form = "linear-bound"
phi = { kind = "power", phi0 = 1.0, decay = 1.0 }

[grid]
m_min = 0.1
m_max = 10.0
cells_per_decade = 5

[initial]
kind = "monodisperse"
mass = 1.0

[analysis]
force = true
"""


@pytest.fixture
def write_config(tmpdir):
    """Write a TOML config whose output goes to a fresh directory under tmpdir."""

    def factory(body=MINIMAL, name="run.toml", output="out", extra=""):
        text = textwrap.dedent(body) + textwrap.dedent(extra)
        if "[output]" not in text:
            text += f'\n[output]\ndirectory = "{tmpdir.join(output)}"\n'
        path = tmpdir.join(name)
        path.write(text)
        return str(path)

    return factory


@pytest.fixture
def bounds_document():
    """Product-singular model with linear-bound breakup, lambda = 2, eta = 2, k3 = 0.1."""
    return BOUNDS


@pytest.fixture
def minimal_document():
    """Model, grid and initial data only."""
    return MINIMAL
