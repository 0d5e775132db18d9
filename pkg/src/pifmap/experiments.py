"""End-to-end experiment trials: raw-feature vs mapped-feature arms.

Each trial generates one seeded dataset, optionally noises the labels,
splits chronologically, and fits ridge models on two designs: the raw
standardized features (arm ``sf``) and the evaluated physics-informed
monomials (arm ``spif``).  The rotating-dipole experiment adds a third
arm with its leading monomial removed (``spif_no_pif1``) to probe how
much that single dimensionally-exact term carries.

Reports are plain JSON-ready dicts so the CLI can serialize them
byte-identically; medians are taken over seeds per noise level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalogs import load_catalog
from .errors import InsufficientData
from .featuremap import FeatureMapSpec, destandardize, evaluate_map, render_monomial
from .metrics import confusion, mae, mse, scores_to_dict
from .ranking import greedy_select
from .regression import (
    DEFAULT_LAMBDA,
    classify,
    fit_standardized,
    ridge_predict,
    standardize_apply,
)
from .synthdata import NoiseConfig, add_noise, gen_bernoulli, gen_binary, gen_pulsar

__all__ = [
    "REGRESSION_NOISE_LEVELS",
    "DEFAULT_SEEDS",
    "TrialSettings",
    "derive_noise_seed",
    "split_point",
    "bernoulli_trial",
    "pulsar_trial",
    "binary_trial",
    "run_experiment",
    "report_markdown",
    "per_seed_csv",
    "boxplot_series",
]

REGRESSION_NOISE_LEVELS: tuple[float, ...] = (0.1, 0.3, 0.5)
DEFAULT_SEEDS: tuple[int, ...] = tuple(range(1, 21))

EXPERIMENT_NAMES = ("bernoulli", "pulsar", "binary")

_SCORE_FIELDS = ("sensitivity", "specificity", "accuracy", "tss", "hss")


@dataclass(frozen=True)
class TrialSettings:
    """Shared per-trial configuration; defaults match the report runs."""

    n: int = 1000
    split: float = 0.7
    lam: float = DEFAULT_LAMBDA
    epsilon: float = 0.01
    threshold: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 < self.split < 1.0:
            raise ValueError(f"split must be in (0, 1), got {self.split}")


def split_point(n: int, fraction: float) -> int:
    """Chronological split index: first ``round(n * fraction)`` rows train."""
    k = int(round(n * fraction))
    if k < 2 or n - k < 1:
        raise InsufficientData(
            f"split {fraction} of {n} rows leaves train={k}, test={n - k}"
        )
    return k


def derive_noise_seed(seed: int, level: float) -> int:
    """Key the noise stream off (seed, level) so arms never share draws."""
    ss = np.random.SeedSequence([int(seed), int(round(level * 1e6))])
    return int(ss.generate_state(1, np.uint64)[0])


def _noisy_labels(y: np.ndarray, seed: int, level: float) -> np.ndarray:
    if level == 0.0:
        return y
    return add_noise(y, NoiseConfig(level=level, seed=derive_noise_seed(seed, level)))


def _regression_arm(X_train, y_train, X_test, y_test, lam, names) -> dict:
    model, _ = fit_standardized(X_train, y_train, lam, feature_names=names)
    Z_test = standardize_apply(X_test, model.standardization)
    predictions = ridge_predict(model, Z_test)
    return {"mae": mae(y_test, predictions), "mse": mse(y_test, predictions)}


def _ranked_refit(spec: FeatureMapSpec, Phi_train, y_train, Phi_test, y_test,
                  settings: TrialSettings) -> tuple[dict, dict]:
    """Greedy-rank the mapped columns, refit the selected set, destandardize."""
    names = spec.monomial_names
    model, Z_train = fit_standardized(
        Phi_train, y_train, settings.lam, feature_names=names
    )
    Z_test = standardize_apply(Phi_test, model.standardization)
    result = greedy_select(
        Z_train, y_train, Z_test, y_test, settings.lam, epsilon=settings.epsilon
    )
    kept = model.standardization.kept
    selected_columns = [kept[j] for j in result.selected]
    selected_names = [names[c] for c in selected_columns]
    refit, _ = fit_standardized(
        Phi_train[:, selected_columns], y_train, settings.lam,
        feature_names=selected_names,
    )
    coefficients, intercept = destandardize(refit)
    ranking = {
        "order": [names[kept[j]] for j in result.order],
        "selected_count": result.selected_count,
        "selected": selected_names,
        "curve": [{"k": pt.k, "mae": pt.mae, "mse": pt.mse} for pt in result.curve],
    }
    coefficient_table = {
        name: float(value)
        for name, value in zip(refit.feature_names, coefficients)
    }
    coefficient_table["intercept"] = intercept
    return ranking, coefficient_table


def bernoulli_trial(seed: int, noise_level: float,
                    settings: TrialSettings = TrialSettings()) -> dict:
    """One seeded pipe-flow run: sf vs spif, plus ranking and coefficients."""
    spec = load_catalog("bernoulli")
    data = gen_bernoulli(settings.n, seed)
    y = _noisy_labels(data.y, seed, noise_level)
    k = split_point(data.n_rows, settings.split)
    Phi = evaluate_map(spec, data)
    arms = {
        "sf": _regression_arm(data.X[:k], y[:k], data.X[k:], y[k:],
                              settings.lam, data.schema.names),
        "spif": _regression_arm(Phi[:k], y[:k], Phi[k:], y[k:],
                                settings.lam, spec.monomial_names),
    }
    ranking, coefficients = _ranked_refit(
        spec, Phi[:k], y[:k], Phi[k:], y[k:], settings
    )
    return {"seed": seed, "noise": noise_level, "arms": arms,
            "ranking": ranking, "coefficients": coefficients}


def pulsar_trial(seed: int, noise_level: float,
                 settings: TrialSettings = TrialSettings()) -> dict:
    """One seeded dipole run: sf vs spif vs spif without the leading term."""
    spec_all = load_catalog("pulsar", allow_inconsistent=True)
    spec_ablated = load_catalog("pulsar_no_pif1", allow_inconsistent=True)
    data = gen_pulsar(settings.n, seed)
    y = _noisy_labels(data.y, seed, noise_level)
    k = split_point(data.n_rows, settings.split)
    Phi_all = evaluate_map(spec_all, data)
    Phi_ablated = evaluate_map(spec_ablated, data)
    arms = {
        "sf": _regression_arm(data.X[:k], y[:k], data.X[k:], y[k:],
                              settings.lam, data.schema.names),
        "spif": _regression_arm(Phi_all[:k], y[:k], Phi_all[k:], y[k:],
                                settings.lam, spec_all.monomial_names),
        "spif_no_pif1": _regression_arm(
            Phi_ablated[:k], y[:k], Phi_ablated[k:], y[k:],
            settings.lam, spec_ablated.monomial_names),
    }
    ranking, coefficients = _ranked_refit(
        spec_all, Phi_all[:k], y[:k], Phi_all[k:], y[k:], settings
    )
    return {"seed": seed, "noise": noise_level, "arms": arms,
            "ranking": ranking, "coefficients": coefficients}


def _classification_arm(X_train, y_train, X_test, y_test, settings, names) -> dict:
    model, _ = fit_standardized(X_train, y_train, settings.lam, feature_names=names)
    Z_test = standardize_apply(X_test, model.standardization)
    predictions = classify(ridge_predict(model, Z_test), settings.threshold)
    return scores_to_dict(confusion(y_test, predictions))


def binary_trial(seed: int, settings: TrialSettings = TrialSettings()) -> dict:
    """One seeded bound-pair run; labels are exact signs, never noised."""
    spec = load_catalog("binary")
    data = gen_binary(settings.n, seed)
    y = data.y
    k = split_point(data.n_rows, settings.split)
    Phi = evaluate_map(spec, data)
    arms = {
        "sf": _classification_arm(data.X[:k], y[:k], data.X[k:], y[k:],
                                  settings, data.schema.names),
        "spif": _classification_arm(Phi[:k], y[:k], Phi[k:], y[k:],
                                    settings, spec.monomial_names),
    }
    return {"seed": seed, "noise": 0.0, "arms": arms}


def _median(values) -> float:
    return float(np.median(np.asarray(values, dtype=float)))


def _noise_key(level: float) -> str:
    return repr(float(level))


def _run_regression(name: str, trial_fn, spec: FeatureMapSpec, seeds,
                    noise_levels, settings: TrialSettings) -> dict:
    trials = []
    for level in noise_levels:
        for seed in seeds:
            trials.append(trial_fn(seed, level, settings))
    arm_names = sorted(trials[0]["arms"]) if trials else []
    medians: dict[str, dict] = {}
    selected_counts: dict[str, dict] = {}
    median_coefficients: dict[str, dict] = {}
    for level in noise_levels:
        key = _noise_key(level)
        batch = [t for t in trials if t["noise"] == level]
        medians[key] = {
            arm: {
                metric: _median([t["arms"][arm][metric] for t in batch])
                for metric in ("mae", "mse")
            }
            for arm in arm_names
        }
        counts: dict[str, int] = {}
        for t in batch:
            c = str(t["ranking"]["selected_count"])
            counts[c] = counts.get(c, 0) + 1
        selected_counts[key] = dict(sorted(counts.items()))
        coefficient_names = sorted(
            {n for t in batch for n in t["coefficients"] if n != "intercept"}
        )
        median_coefficients[key] = {
            n: _median([t["coefficients"][n] for t in batch
                        if n in t["coefficients"]])
            for n in coefficient_names
        }
    return {
        "experiment": name,
        "settings": {
            "n": settings.n, "split": settings.split, "lambda": settings.lam,
            "epsilon": settings.epsilon,
        },
        "seeds": list(seeds),
        "noise_levels": [float(x) for x in noise_levels],
        "monomials": {
            monomial_name: render_monomial(spec, i)
            for i, monomial_name in enumerate(spec.monomial_names)
        },
        "trials": trials,
        "medians": medians,
        "selected_counts": selected_counts,
        "median_coefficients": median_coefficients,
    }


def _run_binary(seeds, settings: TrialSettings) -> dict:
    spec = load_catalog("binary")
    trials = [binary_trial(seed, settings) for seed in seeds]
    arm_names = sorted(trials[0]["arms"]) if trials else []
    medians = {}
    pooled = {}
    for arm in arm_names:
        medians[arm] = {}
        for field in _SCORE_FIELDS:
            values = [t["arms"][arm]["scores"][field] for t in trials]
            finite = [v for v in values if not math.isnan(v)]
            medians[arm][field] = _median(finite) if finite else float("nan")
        totals = np.sum(
            [np.asarray(t["arms"][arm]["confusion"]) for t in trials], axis=0
        )
        from .metrics import ConfusionMatrix  # local import avoids cycle noise

        cm = ConfusionMatrix(
            tp=int(totals[0][0]), fp=int(totals[0][1]),
            fn=int(totals[1][0]), tn=int(totals[1][1]),
        )
        pooled[arm] = scores_to_dict(cm)
    return {
        "experiment": "binary",
        "settings": {
            "n": settings.n, "split": settings.split, "lambda": settings.lam,
            "threshold": settings.threshold,
        },
        "seeds": list(seeds),
        "noise_levels": [0.0],
        "monomials": {
            name: render_monomial(spec, i)
            for i, name in enumerate(spec.monomial_names)
        },
        "trials": trials,
        "medians": medians,
        "pooled": pooled,
    }


def run_experiment(
    name: str,
    seeds=DEFAULT_SEEDS,
    noise_levels=REGRESSION_NOISE_LEVELS,
    settings: TrialSettings = TrialSettings(),
) -> dict:
    """Run one experiment end to end and return its JSON-ready report.

    The classification experiment ignores ``noise_levels``: its labels
    are exact signs of a conserved quantity, so a multiplicative noise
    arm would reproduce the noiseless one.
    """
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise ValueError("at least one seed is required")
    if name == "bernoulli":
        spec = load_catalog("bernoulli")
        return _run_regression("bernoulli", bernoulli_trial, spec, seeds,
                               noise_levels, settings)
    if name == "pulsar":
        spec = load_catalog("pulsar", allow_inconsistent=True)
        return _run_regression("pulsar", pulsar_trial, spec, seeds,
                               noise_levels, settings)
    if name == "binary":
        return _run_binary(seeds, settings)
    raise ValueError(f"unknown experiment {name!r}; choose from {EXPERIMENT_NAMES}")


# --------------------------------------------------------------------------
# Report rendering


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "undefined"
    return f"{x:.6g}"


def report_markdown(report: dict) -> str:
    """Deterministic human-readable summary of one experiment report."""
    name = report["experiment"]
    lines = [f"# {name} experiment", ""]
    settings = report["settings"]
    lines.append(
        "settings: "
        + ", ".join(f"{k}={settings[k]}" for k in sorted(settings))
        + f", seeds={report['seeds'][0]}..{report['seeds'][-1]}"
        f" ({len(report['seeds'])})"
    )
    lines.append("")
    lines.append("## monomials")
    lines.append("")
    lines.append("| name | expression |")
    lines.append("| --- | --- |")
    for mono_name in sorted(report["monomials"]):
        lines.append(f"| {mono_name} | `{report['monomials'][mono_name]}` |")
    lines.append("")
    if name == "binary":
        lines.append("## median skill scores over seeds")
        lines.append("")
        lines.append("| arm | " + " | ".join(_SCORE_FIELDS) + " |")
        lines.append("| --- |" + " --- |" * len(_SCORE_FIELDS))
        for arm in sorted(report["medians"]):
            row = [arm] + [_fmt(report["medians"][arm][f]) for f in _SCORE_FIELDS]
            lines.append("| " + " | ".join(row) + " |")
        lines.append("")
        lines.append("## pooled confusion matrices (rows: [tp, fp], [fn, tn])")
        lines.append("")
        for arm in sorted(report["pooled"]):
            cm = report["pooled"][arm]["confusion"]
            scores = report["pooled"][arm]["scores"]
            lines.append(f"- {arm}: {cm[0]} / {cm[1]}; "
                         + ", ".join(f"{f}={_fmt(scores[f])}"
                                     for f in _SCORE_FIELDS))
        lines.append("")
        return "\n".join(lines) + "\n"

    lines.append("## median test error over seeds")
    lines.append("")
    lines.append("| noise | arm | mae | mse |")
    lines.append("| --- | --- | --- | --- |")
    for level in report["noise_levels"]:
        key = repr(float(level))
        for arm in sorted(report["medians"][key]):
            entry = report["medians"][key][arm]
            lines.append(
                f"| {key} | {arm} | {_fmt(entry['mae'])} | {_fmt(entry['mse'])} |"
            )
    lines.append("")
    lines.append("## greedy selection counts (selected size: seeds)")
    lines.append("")
    for level in report["noise_levels"]:
        key = repr(float(level))
        counts = report["selected_counts"][key]
        rendered = ", ".join(f"{k}: {v}" for k, v in sorted(counts.items()))
        lines.append(f"- noise {key}: {rendered}")
    lines.append("")
    lines.append("## de-standardized coefficients (median over seeds)")
    lines.append("")
    noise_keys = [repr(float(level)) for level in report["noise_levels"]]
    header = ["monomial"] + [f"noise {k}" for k in noise_keys]
    lines.append("| " + " | ".join(header) + " |")
    lines.append("| --- |" + " --- |" * len(noise_keys))
    names = sorted({n for k in noise_keys for n in report["median_coefficients"][k]})
    for mono_name in names:
        row = [mono_name]
        for k in noise_keys:
            value = report["median_coefficients"][k].get(mono_name)
            row.append(_fmt(value) if value is not None else "-")
        lines.append("| " + " | ".join(row) + " |")
    lines.append("")
    return "\n".join(lines) + "\n"


_CSV_COLUMNS = (
    "experiment", "seed", "noise", "arm", "mae", "mse", "selected_count",
    "tp", "fp", "fn", "tn",
) + _SCORE_FIELDS


def per_seed_csv(report: dict) -> str:
    """Flat per-(seed, noise, arm) rows; empty cells where not applicable."""
    rows = [",".join(_CSV_COLUMNS)]
    for trial in report["trials"]:
        for arm in sorted(trial["arms"]):
            entry = trial["arms"][arm]
            cells = {
                "experiment": report["experiment"],
                "seed": str(trial["seed"]),
                "noise": repr(float(trial["noise"])),
                "arm": arm,
            }
            if "mae" in entry:
                cells["mae"] = repr(entry["mae"])
                cells["mse"] = repr(entry["mse"])
                if arm == "spif" and "ranking" in trial:
                    cells["selected_count"] = str(
                        trial["ranking"]["selected_count"]
                    )
            else:
                (tp, fp), (fn, tn) = entry["confusion"]
                cells.update(tp=str(tp), fp=str(fp), fn=str(fn), tn=str(tn))
                for field in _SCORE_FIELDS:
                    value = entry["scores"][field]
                    cells[field] = "" if math.isnan(value) else repr(value)
            rows.append(",".join(cells.get(c, "") for c in _CSV_COLUMNS))
    return "\n".join(rows) + "\n"


def boxplot_series(report: dict) -> list[dict]:
    """Per-metric/noise box-plot inputs: one entry per SVG to emit."""
    out = []
    if report["experiment"] == "binary":
        for field in _SCORE_FIELDS:
            groups = []
            for arm in sorted(report["trials"][0]["arms"]):
                values = [
                    t["arms"][arm]["scores"][field] for t in report["trials"]
                ]
                values = [v for v in values if not math.isnan(v)]
                groups.append((arm, values))
            out.append({
                "stem": f"binary_{field}",
                "title": f"binary: {field} by arm",
                "ylabel": field,
                "groups": groups,
            })
        return out
    for level in report["noise_levels"]:
        key = repr(float(level))
        batch = [t for t in report["trials"] if t["noise"] == level]
        for metric in ("mae", "mse"):
            groups = []
            for arm in sorted(batch[0]["arms"]):
                groups.append(
                    (arm, [t["arms"][arm][metric] for t in batch])
                )
            out.append({
                "stem": f"{report['experiment']}_{metric}_noise{key}",
                "title": f"{report['experiment']}: test {metric}, noise {key}",
                "ylabel": metric,
                "groups": groups,
            })
    return out
