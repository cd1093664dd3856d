import numpy as np
import pandas as pd
import pytest

from schiffer_lab.config.settings import build_config
from schiffer_lab.experiments import EXPERIMENTS, run_experiment
from schiffer_lab.experiments.corpus import corpus, random_coefficients
from schiffer_lab.models.results import ExperimentTable
from schiffer_lab.utils.exceptions import ExperimentError
from schiffer_lab.utils.serialization import load_structured


def _breaking_table(slope, tangent=True):
    return ExperimentTable(
        name="thm-4-2",
        rows=[{"eps": 1e-5, "min_null": 1e-10, "argmin": "[000;000]", "predicted": 1e-10},
              {"eps": 1e-4, "min_null": 1e-8, "argmin": "[000;000]", "predicted": 1e-8}],
        summary={"slope": slope, "monotone": True, "criterion_max": 0.3, "tangent": tangent,
                 "null_order": 2 if tangent else 1, "first_order_rate": 1e-12 if tangent else 0.4},
    )


def _soliton_table(jump, search_rational=False):
    return ExperimentTable(
        name="thm-5-5",
        rows=[{"eps": 0.0, "rational": True, "best_residual": 1e-15, "control_residual": 1e-15, "witnesses": 2},
              {"eps": 1e-4, "rational": search_rational, "best_residual": 2e-8,
               "control_residual": jump * 1e-8, "witnesses": 0}],
        summary={"control_rational": True, "control_witnesses": 2, "min_jump": jump, "min_search_jump": 2.0,
                 "criterion_max": 0.2},
    )


@pytest.fixture
def fake_corpus(x5_1, x5_1_periods):
    def _corpus(genus, count, seed):
        return iter([(x5_1, x5_1_periods)] * count)

    return _corpus


def test_corpus_is_seeded():
    first_rng, second_rng = np.random.default_rng(5), np.random.default_rng(5)
    first = [random_coefficients(2, first_rng) for _ in range(3)]
    second = [random_coefficients(2, second_rng) for _ in range(3)]
    assert first == second
    assert all(len(c) == 6 and c[-1] != 0 for c in first)


def test_corpus_curves_are_squarefree_with_certified_periods():
    for curve, period in corpus(2, 2, seed=3):
        assert curve.genus == 2
        assert period.min_imag_eigenvalue > 0


def test_hyperelliptic_breaking_runner(mocker, tmp_path, genus3, genus3_periods):
    mocker.patch("schiffer_lab.experiments.hyperelliptic_breaking.corpus",
                 side_effect=lambda genus, count, seed: iter([(genus3, genus3_periods)] * count))
    run = mocker.patch("schiffer_lab.experiments.hyperelliptic_breaking.hyperelliptic_breaking_experiment",
                       return_value=_breaking_table(2.02))
    table, (csv_path, summary_path) = run_experiment(
        "thm-4-2", {"genus": 3, "seed": 1, "curves": 2, "points": 2}, build_config(), tmp_path)

    assert run.call_count == 4
    assert table.summary["slopes_match_order"]
    assert table.summary["tangent_fraction"] == 1.0
    assert table.summary["max_first_order_rate"] == pytest.approx(1e-12)
    assert table.summary["all_monotone"]
    frame = pd.read_csv(csv_path)
    assert len(frame) == 8
    assert set(frame.columns) >= {"curve", "point", "eps", "min_null", "slope"}
    summary = load_structured(summary_path)
    assert summary["experiment"] == "thm-4-2"
    assert summary["slope_mean"] == pytest.approx(2.02)


def test_slope_off_the_null_order_is_reported(mocker, tmp_path, fake_corpus):
    mocker.patch("schiffer_lab.experiments.hyperelliptic_breaking.corpus", side_effect=fake_corpus)
    mocker.patch("schiffer_lab.experiments.hyperelliptic_breaking.hyperelliptic_breaking_experiment",
                 return_value=_breaking_table(1.01))
    table, _ = run_experiment("thm-4-2", {"genus": 3, "seed": 1, "curves": 1, "points": 1}, build_config(), tmp_path)
    assert not table.summary["slopes_match_order"]


def test_transverse_run_compares_against_first_order(mocker, tmp_path, fake_corpus):
    mocker.patch("schiffer_lab.experiments.hyperelliptic_breaking.corpus", side_effect=fake_corpus)
    mocker.patch("schiffer_lab.experiments.hyperelliptic_breaking.hyperelliptic_breaking_experiment",
                 return_value=_breaking_table(1.01, tangent=False))
    table, _ = run_experiment("thm-4-2", {"genus": 3, "seed": 1, "curves": 1, "points": 2}, build_config(), tmp_path)
    assert table.summary["slopes_match_order"]
    assert table.summary["tangent_fraction"] == 0.0


def test_unresolved_runs_are_counted(mocker, tmp_path, fake_corpus):
    mocker.patch("schiffer_lab.experiments.hyperelliptic_breaking.corpus", side_effect=fake_corpus)
    mocker.patch("schiffer_lab.experiments.hyperelliptic_breaking.hyperelliptic_breaking_experiment",
                 return_value=_breaking_table(None))
    table, _ = run_experiment("thm-4-2", {"genus": 3, "seed": 1, "curves": 1, "points": 3}, build_config(), tmp_path)
    assert table.summary["unresolved_runs"] == 3
    assert table.summary["slope_mean"] is None
    assert not table.summary["slopes_match_order"]


def test_soliton_breaking_runner(mocker, tmp_path, fake_corpus):
    mocker.patch("schiffer_lab.experiments.soliton_breaking.corpus", side_effect=fake_corpus)
    run = mocker.patch("schiffer_lab.experiments.soliton_breaking.soliton_breaking_experiment",
                       return_value=_soliton_table(1e4))
    table, (csv_path, _) = run_experiment("thm-5-5", {"seed": 2, "instances": 3, "curves": 1},
                                          build_config(), tmp_path)
    assert run.call_count == 3
    assert table.summary["controls_rational"]
    assert table.summary["all_perturbed_broken"]
    assert table.summary["min_jump"] == 1e4
    assert len(pd.read_csv(csv_path)) == 6
    assert table.summary["min_search_jump"] == 2.0
    assert table.summary["search_rational_rows"] == 0


def test_search_false_positive_does_not_hide_the_jump(mocker, tmp_path, fake_corpus):
    mocker.patch("schiffer_lab.experiments.soliton_breaking.corpus", side_effect=fake_corpus)
    mocker.patch("schiffer_lab.experiments.soliton_breaking.soliton_breaking_experiment",
                 return_value=_soliton_table(1e4, search_rational=True))
    table, _ = run_experiment("thm-5-5", {"seed": 2, "instances": 2, "curves": 1}, build_config(), tmp_path)
    assert table.summary["all_perturbed_broken"]
    assert table.summary["search_rational_rows"] == 2


def test_small_control_jump_is_not_broken(mocker, tmp_path, fake_corpus):
    mocker.patch("schiffer_lab.experiments.soliton_breaking.corpus", side_effect=fake_corpus)
    mocker.patch("schiffer_lab.experiments.soliton_breaking.soliton_breaking_experiment",
                 return_value=_soliton_table(3.0))
    table, _ = run_experiment("thm-5-5", {"seed": 2, "instances": 1, "curves": 1}, build_config(), tmp_path)
    assert not table.summary["all_perturbed_broken"]


def test_wrong_genus_rejected(tmp_path):
    with pytest.raises(ExperimentError):
        run_experiment("thm-4-2", {"genus": 2, "seed": 1}, build_config(), tmp_path)


def test_missing_fields(tmp_path):
    with pytest.raises(ExperimentError) as info:
        run_experiment("thm-4-2", {"genus": 3}, build_config(), tmp_path)
    assert "seed" in info.value.message


def test_unknown_experiment(tmp_path):
    with pytest.raises(ExperimentError):
        run_experiment("thm-9-9", {"seed": 1}, build_config(), tmp_path)


def test_foreign_failures_are_wrapped(mocker, tmp_path, fake_corpus):
    mocker.patch("schiffer_lab.experiments.soliton_breaking.corpus", side_effect=fake_corpus)
    mocker.patch("schiffer_lab.experiments.soliton_breaking.soliton_breaking_experiment",
                 side_effect=np.linalg.LinAlgError("singular"))
    with pytest.raises(ExperimentError) as info:
        run_experiment("thm-5-5", {"seed": 2, "instances": 1, "curves": 1}, build_config(), tmp_path)
    assert isinstance(info.value.cause, np.linalg.LinAlgError)


def test_registry():
    assert set(EXPERIMENTS) == {"thm-4-2", "thm-5-5"}


@pytest.mark.slow
def test_soliton_experiment_twenty_instances(tmp_path):
    table, _ = run_experiment("thm-5-5", {"seed": 7, "instances": 20}, build_config(), tmp_path)
    assert table.summary["instances"] == 20
    assert table.summary["controls_rational"]
    assert table.summary["all_perturbed_broken"]
    assert table.summary["min_jump"] >= 10


@pytest.mark.slow
def test_breaking_experiment_five_curves_five_points(tmp_path):
    table, _ = run_experiment("thm-4-2", {"genus": 3, "seed": 7, "curves": 5, "points": 5}, build_config(), tmp_path)
    summary = table.summary
    assert summary["tangent_fraction"] == 1.0
    assert summary["max_first_order_rate"] < 1e-6
    assert summary["all_monotone"]
    if summary["unresolved_runs"] < 25:
        assert summary["slopes_match_order"]
    assert summary["criterion_min"] > 1e-6
