import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from utileval import (
    ConfusionCounts,
    CostCoefficients,
    DecisionRule,
    EvalReport,
    LabeledScores,
    ValidationError,
    confusion_at,
    validate,
)


def test_confusion_counts_inclusive_threshold():
    # the two 0.5 scores sit exactly on the threshold and must be accepted
    data = LabeledScores(scores=[0.2, 0.5, 0.5, 0.9], labels=[0, 0, 1, 1])
    counts = confusion_at(data, DecisionRule(0.5))
    assert (counts.tp, counts.fp, counts.fn, counts.tn) == (2, 1, 0, 1)
    assert counts.n == 4


def test_confusion_extreme_thresholds():
    data = LabeledScores(scores=[0.2, 0.5, 0.5, 0.9], labels=[0, 0, 1, 1])
    everything = confusion_at(data, DecisionRule(-1.0))
    assert (everything.tp, everything.fp) == (2, 2)
    nothing = confusion_at(data, DecisionRule(0.9000000001))
    assert (nothing.fn, nothing.tn) == (2, 2)


def test_score_range_is_validated():
    with pytest.raises(ValidationError, match="score out of range at row 1"):
        LabeledScores(scores=[0.5, 1.2], labels=[0, 1])
    with pytest.raises(ValidationError, match="score out of range at row 0"):
        LabeledScores(scores=[-0.1], labels=[1])


def test_labels_must_be_binary():
    with pytest.raises(ValidationError, match="must be 0 or 1"):
        LabeledScores(scores=[0.5, 0.5], labels=[0, 2])
    with pytest.raises(ValidationError, match="non-finite"):
        LabeledScores(scores=[0.5], labels=[np.nan])


def test_length_mismatches_are_reported():
    with pytest.raises(ValidationError, match="length mismatch"):
        LabeledScores(scores=[0.5, 0.6], labels=[1])
    with pytest.raises(ValidationError, match="group"):
        LabeledScores(scores=[0.5, 0.6], labels=[1, 0], group=[1])
    with pytest.raises(ValidationError, match="reference"):
        LabeledScores(scores=[0.5, 0.6], labels=[1, 0], reference_scores=[0.5])
    with pytest.raises(ValidationError, match="context column 'age'"):
        LabeledScores(scores=[0.5, 0.6], labels=[1, 0], context={"age": [40.0]})


def test_empty_and_nonfinite_rejected():
    with pytest.raises(ValidationError):
        LabeledScores(scores=[], labels=[])
    with pytest.raises(ValidationError, match="non-finite"):
        LabeledScores(scores=[np.inf], labels=[1])


def test_arrays_are_readonly():
    data = LabeledScores(scores=[0.5, 0.6], labels=[1, 0])
    with pytest.raises(ValueError):
        data.scores[0] = 0.0
    with pytest.raises(ValueError):
        data.labels[0] = 0


def test_take_keeps_all_columns():
    data = LabeledScores(
        scores=[0.1, 0.5, 0.9],
        labels=[0, 1, 1],
        group=[0, 1, 0],
        reference_scores=[0.2, 0.4, 0.8],
        context={"age": [30.0, 40.0, 50.0]},
        coefficients=CostCoefficients([1, 1, 1], [0, 1, 2], 0.5, 1.0),
    )
    sub = data.take([2, 0])
    assert sub.scores.tolist() == [0.9, 0.1]
    assert sub.group.tolist() == [0, 0]
    assert sub.reference_scores.tolist() == [0.8, 0.2]
    assert sub.context["age"].tolist() == [50.0, 30.0]
    assert sub.coefficients.a01.tolist() == [2.0, 0.0]
    assert sub.coefficients.a10 == 0.5


def test_counts_properties():
    data = LabeledScores(scores=[0.1, 0.5, 0.9], labels=[0, 1, 1])
    assert (data.n, data.n_positive, data.n_negative) == (3, 2, 1)


def test_validate_roundtrip():
    data = LabeledScores(scores=[0.1, 0.9], labels=[0, 1])
    assert validate(data) is data
    with pytest.raises(ValidationError):
        validate("not a dataset")


def test_coefficients_validation():
    with pytest.raises(ValidationError, match="a01"):
        CostCoefficients(1.0, -0.5, 0.0, 1.0)
    with pytest.raises(ValidationError, match="at least one"):
        CostCoefficients(0.0, 0.0, 0.0, 0.0)
    with pytest.raises(ValidationError, match="not finite"):
        CostCoefficients(np.inf, 0.0, 0.0, 1.0)
    with pytest.raises(ValidationError, match="length mismatch"):
        CostCoefficients([1.0, 1.0], [0.0, 0.0, 0.0], 0.0, 1.0)
    with pytest.raises(ValidationError, match=">= 0 everywhere"):
        CostCoefficients([1.0, -1.0], 0.0, 0.0, 1.0)


def test_coefficients_modes():
    constant = CostCoefficients.constant(2, 1, 0.5, 1)
    assert constant.is_constant and constant.n_samples is None
    assert constant.take(np.array([0, 0])) is constant
    mixed = CostCoefficients(1.0, [1.0, 2.0], 0.5, 1.0)
    assert not mixed.is_constant and mixed.n_samples == 2
    a11, a01, a10, a00 = mixed.as_vectors(2)
    assert a11.tolist() == [1.0, 1.0]
    assert a01.tolist() == [1.0, 2.0]
    with pytest.raises(ValidationError, match="does not match"):
        mixed.as_vectors(5)
    zero_one = CostCoefficients.zero_one()
    assert (zero_one.a11, zero_one.a01, zero_one.a10, zero_one.a00) == (1, 0, 0, 1)


def test_decision_rule_validation():
    with pytest.raises(ValidationError):
        DecisionRule(np.nan)
    rule = DecisionRule(0.5)
    out = rule.apply(np.array([0.4, 0.5, 0.6]))
    assert out.tolist() == [False, True, True]


def test_confusion_counts_validation():
    with pytest.raises(ValidationError):
        ConfusionCounts(tp=-1, fp=0, fn=0, tn=0)
    with pytest.raises(ValidationError):
        ConfusionCounts(tp=1.5, fp=0, fn=0, tn=0)


def test_eval_report_checks():
    report = EvalReport(
        metrics={"auc": 0.75},
        curves={"roc": [(0.0, 0.0), (0.5, 1.0), (1.0, 1.0)]},
        intervals={"auc@95": (0.6, 0.9, 0.95)},
    )
    parsed = json.loads(report.to_json())
    assert parsed["metrics"]["auc"] == 0.75
    assert parsed["intervals"]["auc@95"]["level"] == 0.95
    with pytest.raises(ValidationError, match="not finite"):
        EvalReport(metrics={"auc": np.nan})
    with pytest.raises(ValidationError, match="ordered"):
        EvalReport(metrics={}, curves={"roc": [(1.0, 0.0), (0.0, 1.0)]})
    with pytest.raises(ValidationError, match="low"):
        EvalReport(metrics={}, intervals={"auc@95": (0.9, 0.6, 0.95)})
    with pytest.raises(ValidationError, match="level"):
        EvalReport(metrics={}, intervals={"auc@95": (0.6, 0.9, 1.5)})


@given(st.data())
def test_confusion_partitions_the_data(data):
    n = data.draw(st.integers(min_value=1, max_value=60))
    scores = data.draw(
        st.lists(
            st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
            min_size=n,
            max_size=n,
        )
    )
    labels = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    threshold = data.draw(st.floats(min_value=-0.5, max_value=1.5, allow_nan=False))
    ds = LabeledScores(scores=scores, labels=labels)
    counts = confusion_at(ds, DecisionRule(threshold))
    assert counts.tp + counts.fp + counts.fn + counts.tn == n
    assert counts.tp + counts.fn == ds.n_positive
    assert counts.fp + counts.tn == ds.n_negative
