"""Published default hyperparameters and their legal ranges.

Benchmark reports echo the resolved values together with
``DEFAULTS_VERSION`` so every run is self-describing.
"""

from __future__ import annotations

DEFAULTS_VERSION = 1

# Per technique: name -> (default, validator). A validator is
# ("int"|"float", lo, hi), ("choice", options), ("bool",), or a tuple of
# alternatives, any of which may accept the value. None is allowed only
# where "none" is listed.
SCHEMA: dict[str, dict[str, tuple]] = {
    "swr": {
        "alpha_enter": (0.05, ("float", 0.0, 1.0)),
        "max_features": (None, (("none",), ("int", 1, 10_000))),
    },
    "cart": {
        "max_depth": (12, ("int", 1, 64)),
        "min_samples_leaf": (3, ("int", 1, 10_000)),
    },
    "rf": {
        "n_trees": (100, ("int", 1, 10_000)),
        "mtry": (None, (("none",), ("int", 1, 10_000))),
        "bootstrap": (True, ("bool",)),
        "max_depth": (12, ("int", 1, 64)),
        "min_samples_leaf": (3, ("int", 1, 10_000)),
    },
    "svr": {
        "C": (1.0, ("float", 1e-12, 1e12)),
        "epsilon": (0.1, ("float", 0.0, 1e12)),
        "kernel": ("rbf", ("choice", ("linear", "rbf"))),
        "gamma": (None, (("none",), ("float", 1e-12, 1e12))),
        "tol": (1e-3, ("float", 1e-15, 1.0)),
        "max_iter": (20_000, ("int", 1, 100_000_000)),
    },
    "nn": {
        "hidden_units": (16, ("int", 1, 4096)),
        "activation": ("tanh", ("choice", ("tanh", "relu", "sigmoid"))),
        "learning_rate": (0.05, ("float", 1e-9, 10.0)),
        "epochs": (400, ("int", 1, 1_000_000)),
        "batch": (16, ("int", 1, 1_000_000)),
    },
    "mars": {
        "max_terms": (21, ("int", 1, 200)),
        "max_interaction": (1, ("int", 1, 8)),
        "penalty": (3.0, ("float", 0.0, 100.0)),
        "max_knots": (64, ("int", 2, 100_000)),
    },
    "garf": {
        "population_size": (12, ("int", 2, 1000)),
        "max_generations": (10, ("int", 1, 100_000)),
        "time_budget": (None, (("none",), ("float", 1e-6, 1e9))),
        "crossover_rate": (0.9, ("float", 0.0, 1.0)),
        "mutation_rate": (0.1, ("float", 0.0, 1.0)),
        "elitism_count": (1, ("int", 1, 999)),
        "tournament_size": (3, ("int", 1, 1000)),
        "cv_folds": (3, ("int", 2, 100)),
    },
}


def _accepts(validator: tuple, value) -> bool:
    kind = validator[0]
    if isinstance(kind, tuple):  # union of alternatives
        return any(_accepts(alt, value) for alt in validator)
    if kind == "none":
        return value is None
    if kind == "bool":
        return isinstance(value, bool)
    if kind == "int":
        return (
            isinstance(value, int)
            and not isinstance(value, bool)
            and validator[1] <= value <= validator[2]
        )
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return False
        return validator[1] <= float(value) <= validator[2]
    if kind == "choice":
        return value in validator[1]
    raise AssertionError(f"unknown validator kind {kind!r}")


def resolve(technique: str, overrides: dict | None) -> dict:
    """Overlay overrides on the defaults, validating names and ranges."""
    if technique not in SCHEMA:
        raise ValueError(
            f"unknown technique {technique!r}; expected one of {sorted(SCHEMA)}"
        )
    schema = SCHEMA[technique]
    resolved = {name: default for name, (default, _) in schema.items()}
    for name, value in (overrides or {}).items():
        if name not in schema:
            raise ValueError(
                f"{technique}: unknown hyperparameter {name!r} "
                f"(known: {', '.join(sorted(schema))})"
            )
        _, validator = schema[name]
        if not _accepts(validator, value):
            raise ValueError(
                f"{technique}: hyperparameter {name}={value!r} is out of range "
                f"or has the wrong type"
            )
        resolved[name] = value
    return resolved
