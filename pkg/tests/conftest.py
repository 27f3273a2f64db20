# ============================================================================
# tests/conftest.py
# Configuration pytest
# ============================================================================
"""
Configuration et fixtures partagées pour les tests.
"""
import json
import tempfile
from pathlib import Path

import numpy as np
import pytest

from src.controllers.bounds_controller import BoundsController
from src.core.gaussian import make_gaussian, standard_gaussian
from src.core.models import HarnessSettings


@pytest.fixture
def settings():
    """Réglages déterministes, deux threads"""
    return HarnessSettings(threads=2)


@pytest.fixture
def controller(settings):
    """Contrôleur avec réglages de test"""
    return BoundsController(settings)


@pytest.fixture
def temp_dir():
    """Crée un dossier temporaire"""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def rng():
    """Générateur numpy à graine fixe"""
    return np.random.default_rng(12345)


@pytest.fixture
def standard_2d():
    """N(0, I_2)"""
    return standard_gaussian(2)


@pytest.fixture
def sample_gaussian():
    """Gaussienne 2-D quelconque"""
    return make_gaussian([1.0, -0.5], [[2.0, 0.3], [0.3, 0.5]])


@pytest.fixture
def write_document(temp_dir):
    """Écrit un document JSON et renvoie son chemin"""
    def _write(name, data):
        path = temp_dir / name
        path.write_text(json.dumps(data) if not isinstance(data, str) else data, encoding='utf-8')
        return path
    return _write
