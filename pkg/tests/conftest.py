import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from topicbench.ingest import Thread


@pytest.fixture(scope="session")
def blob_texts():
    """Three well-separated groups of 50 documents with a marker token each."""
    rng = np.random.default_rng(77)
    texts = []
    for marker in ("alpha", "beta", "gamma"):
        pool = [f"{marker}word{j}" for j in range(12)]
        for _ in range(50):
            tokens = [marker] * 4 + list(rng.choice(pool, size=8)) + ["shared"]
            texts.append(" ".join(tokens))
    return texts


@pytest.fixture(scope="session")
def fixture_threads():
    """Small three-theme thread corpus for pipeline-level tests."""
    rng = np.random.default_rng(4)
    themes = {
        "games": ["game", "player", "console", "controller", "level", "quest"],
        "health": ["doctor", "patient", "clinic", "treatment", "symptom", "therapy"],
        "finance": ["market", "stock", "invest", "trading", "budget", "savings"],
    }
    threads = []
    idx = 0
    for theme, words in themes.items():
        for _ in range(15):
            body = " ".join(rng.choice(words, size=18)) + f" {theme} {theme}"
            threads.append(Thread(id=f"t{idx:03d}", text=body, comment_count=int(rng.integers(0, 5))))
            idx += 1
    return threads
