import math

import numpy as np
import pytest

from tanhconnect.errors import SpecValidationError
from tanhconnect.piecewise import (
    ConnectorParams,
    DomainInterval,
    PiecewiseSpec,
    make_spec,
    spec_from_dict,
    spec_to_dict,
    validate,
)
from tanhconnect.expr import parse


def test_derived_quantities():
    spec = make_spec((0, 3), [1, 2], ["x", "x - 1", "x - 2"])
    assert spec.n_cuts == 2
    assert spec.length == 3.0
    assert spec.edges == (0.0, 1.0, 2.0, 3.0)
    assert spec.midpoints == (0.5, 1.5, 2.5)


def test_interval_index_puts_cut_on_the_right():
    spec = make_spec((0, 3), [1, 2], ["x", "x - 1", "x - 2"])
    assert spec.interval_index(0.999) == 0
    assert spec.interval_index(1.0) == 1
    assert list(spec.interval_index(np.array([0.0, 2.0, 3.0]))) == [0, 2, 2]


def test_reference_evaluates_active_partition():
    spec = make_spec((0, 3), [1, 2], ["x", "x - 1", "x - 2"])
    xs = np.array([0.25, 1.25, 2.25])
    assert np.allclose(spec.reference(xs), 0.25)
    assert spec.reference(1.5) == 0.5


def test_validation_collects_every_issue():
    bad = PiecewiseSpec(
        domain=DomainInterval(0.0, 1.0),
        cuts=(0.8, 0.2, 1.5),
        partitions=(parse("1"), parse("2")),
        connector=ConnectorParams(sigma=-1.0),
    )
    with pytest.raises(SpecValidationError) as info:
        validate(bad)
    kinds = set(info.value.kinds())
    assert {"CutOutsideDomain", "UnorderedCuts", "PartitionCountMismatch",
            "NonPositiveSigma"} <= kinds


@pytest.mark.parametrize("domain,cuts,parts,kind", [
    ((1, 0), [], ["1"], "InvalidDomain"),
    ((0, math.inf), [], ["1"], "InvalidDomain"),
    ((0, 1), [0.0], ["1", "2"], "CutOutsideDomain"),
    ((0, 1), [0.5, 0.5], ["1", "2", "3"], "UnorderedCuts"),
    ((0, 1), [0.5], ["1"], "PartitionCountMismatch"),
    ((0, 1), [0.5], ["1/(x - 0.25)", "1"], "NonFiniteAtMidpoint"),
])
def test_single_violations(domain, cuts, parts, kind):
    with pytest.raises(SpecValidationError) as info:
        make_spec(domain, cuts, parts)
    assert kind in info.value.kinds()


def test_bad_connector_params():
    with pytest.raises(SpecValidationError) as info:
        make_spec((0, 1), [0.5], ["0", "1"], ConnectorParams(kind="cubic", endpoint_exponent=0))
    assert info.value.kinds().count("InvalidConnectorParams") == 2


def test_validate_is_idempotent():
    spec = make_spec((-1, 1), [0.0], ["-1", "1"])
    assert validate(validate(spec)) is spec


def test_no_cuts_is_allowed():
    spec = make_spec((0, 1), [], ["x^2"])
    assert spec.n_cuts == 0
    assert spec.midpoints == (0.5,)


def test_dict_round_trip():
    spec = make_spec((0, 3), [1, 2], ["x", "x - 1", "x - 2"],
                     ConnectorParams("raw", 1e-6, 2))
    again = spec_from_dict(spec_to_dict(spec))
    assert spec_to_dict(again) == spec_to_dict(spec)
    assert again.connector == spec.connector


def test_dict_defaults_and_variable():
    spec = spec_from_dict({"domain": {"x0": 0, "xf": 2}, "cuts": [1],
                           "partitions": ["0", "t"], "variable": "t"})
    assert spec.connector == ConnectorParams()
    assert spec.variable == "t"
    assert spec.reference(1.5) == 1.5


@pytest.mark.parametrize("doc", [
    {"domain": {"x0": 0, "xf": 1}, "cuts": [], "partitions": ["1"], "colour": "red"},
    {"domain": {"x0": 0, "xf": 1}, "cuts": []},
    {"domain": [0, 1], "cuts": [], "partitions": ["1"]},
    {"domain": {"x0": "0", "xf": 1}, "cuts": [], "partitions": ["1"]},
    {"domain": {"x0": 0, "xf": 1}, "cuts": [], "partitions": [1]},
    {"domain": {"x0": 0, "xf": 1}, "cuts": [], "partitions": ["1"],
     "connector": {"kind": "raw", "width": 2}},
    [1, 2, 3],
])
def test_malformed_documents(doc):
    with pytest.raises(SpecValidationError):
        spec_from_dict(doc)
