"""Locate the optional public rating datasets used by the acceptance suite."""
from __future__ import annotations

import os
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent


def find_dataset(env_var: str, *candidates: str) -> str | None:
    override = os.environ.get(env_var)
    if override and os.path.exists(override):
        return override
    for rel in candidates:
        path = REPO_ROOT / rel
        if path.exists():
            return str(path)
    return None


ML100K = find_dataset("BIPREC_ML100K", "data/ml-100k/u.data", "data/u.data")
EPINIONS = find_dataset("BIPREC_EPINIONS", "data/epinions.txt",
                        "data/ratings_data.txt")
