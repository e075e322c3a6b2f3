import os

DEFAULT_MAX_GROUND = 16
ENV_MAX_GROUND = "SUBMEASURE_LAB_MAX_GROUND"


def max_ground() -> int:
    """Limit for subset-exhaustive sweeps; overridable through the environment."""
    raw = os.environ.get(ENV_MAX_GROUND)
    if raw is None or raw == "":
        return DEFAULT_MAX_GROUND
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_MAX_GROUND
    return max(1, value)
