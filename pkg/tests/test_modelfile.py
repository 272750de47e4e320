import numpy as np
import pytest

from quasistatic.modelfile import ModelError, parse_model

SPRING = """
# comment line
[space]
dim = 2

[system]
type = spring
center = 0 0
stiffness = 2.0
"""


def test_parse_spring():
    model = parse_model(SPRING)
    assert model.space.dim == 2
    assert model.system.kind == "spring"
    assert model.system.params["stiffness"] == 2.0


def test_parse_metric():
    model = parse_model(
        """
[space]
dim = 2
metric = 2 0 ; 0 3

[system]
type = friction
"""
    )
    assert np.allclose(model.space.metric, np.diag([2.0, 3.0]))
    assert model.system.kind == "friction"


def test_parse_polynomial():
    model = parse_model(
        """
[space]
dim = 2

[system]
type = potential-poly
terms = 2 0 : 1.0, 0 2 : -1.0
"""
    )
    poly = model.system.params["polynomial"]
    assert poly([1.0, 1.0]) == pytest.approx(0.0)
    assert poly([1.0, 0.0]) == pytest.approx(1.0)


def test_parse_composed():
    model = parse_model(
        """
[space]
dim = 3

[system]
type = composed

[system.a]
type = rod
center = 0 0 0
length = 1.0

[system.b]
type = rod
center = 1 0 0
length = 1.0
"""
    )
    assert model.system.kind == "composed"
    assert len(model.system.params["members"]) == 2


def test_parse_controlled():
    model = parse_model(
        """
[space]
dim = 3

[system]
type = controlled
scenario = spring-chain
anchor = 0 0 0
k10 = 1.0
k20 = 1.0
k21 = 1.0
"""
    )
    assert model.controlled is not None
    assert model.controlled.params["effective_stiffness"] == pytest.approx(1.5)


def test_parse_generic_fibration():
    model = parse_model(
        """
[space]
dim = 2

[system]
type = controlled

[system.inner]
type = potential-poly
terms = 2 0 : 1.0, 0 2 : 1.0, 1 1 : 0.5

[fibration]
matrix = 1 0
"""
    )
    csys = model.controlled
    assert csys is not None
    assert csys.fibration.base.dim == 1
    assert csys.fibration.total.dim == 2
    assert np.allclose(csys.fibration.project([0.3, 0.9]), [0.3])


def test_fibration_needs_controlled_type():
    with pytest.raises(ModelError):
        parse_model(
            """
[space]
dim = 2

[system]
type = friction

[fibration]
matrix = 1 0
"""
        )


def test_parse_dynamics():
    model = parse_model(
        """
[space]
dim = 1

[dynamics]
mass = 1.0
stiffness = 1.0
t0 = 0
t1 = 2.0
"""
    )
    assert model.lagrangian is not None
    assert model.t_span == (0.0, 2.0)


def test_unknown_key_rejected():
    with pytest.raises(ModelError):
        parse_model(SPRING + "color = red\n")


def test_unknown_section_rejected():
    with pytest.raises(ModelError):
        parse_model(SPRING + "\n[plotting]\nstyle = fancy\n")


def test_duplicate_key_rejected():
    with pytest.raises(ModelError):
        parse_model(SPRING + "stiffness = 3.0\n")


def test_missing_space_rejected():
    with pytest.raises(ModelError):
        parse_model("[system]\ntype = skate\n")


def test_bad_number_rejected():
    with pytest.raises(ModelError):
        parse_model(SPRING.replace("2.0", "two"))


def test_wrong_vector_length_rejected():
    with pytest.raises(ModelError):
        parse_model(SPRING.replace("center = 0 0", "center = 0 0 0"))


def test_content_before_section_rejected():
    with pytest.raises(ModelError):
        parse_model("dim = 2\n[space]\ndim = 2\n")


def test_constructor_errors_become_model_errors():
    with pytest.raises(ModelError):
        parse_model(SPRING.replace("stiffness = 2.0", "stiffness = -2.0"))


def test_empty_model_rejected():
    with pytest.raises(ModelError):
        parse_model("[space]\ndim = 2\n")
