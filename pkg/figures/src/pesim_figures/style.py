"""Shared plotting style: colorblind-safe palette and scenario labels."""

# Okabe-Ito subset: distinguishable under red-green color vision deficiency
SCENARIO_COLORS = {
    "balanced": "#0072B2",                   # blue
    "onlylow": "#E69F00",                    # orange
    "onlyhigh": "#009E73",                   # bluish green
    "balanced_errors_penalized": "#CC79A7",  # reddish purple
}

SCENARIO_LABELS = {
    "balanced": "balanced",
    "onlylow": "only low",
    "onlyhigh": "only high",
    "balanced_errors_penalized": "balanced, errors penalized",
}

VARIANT_HATCH = {"full": None, "base": "//"}
