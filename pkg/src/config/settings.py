"""
Paramètres généraux de la boîte à outils
Configuration globale, tolérances numériques et constantes de référence
"""

import os
from pathlib import Path
from typing import Dict, Any

# Chemins de l'application
BASE_DIR = Path(__file__).parent.parent.parent
OUTPUT_DIR = BASE_DIR / "results"

# Configuration de l'application
APP_CONFIG = {
    "name": "Bell Trace Distance",
    "version": "1.0.0",
    "description": "Quantification de la non-localité par distance de trace au polytope local",
    "license": "MIT",
    "debug": os.getenv("DEBUG", "False").lower() == "true"
}

# Tolérances numériques
NUMERICS_CONFIG = {
    "feasibility_tolerance": 1e-9,      # positivité, normalisation, appartenance
    "distribution_tolerance": 1e-12,    # somme des poids d'entrée
    "quantum_tolerance": 1e-10,         # projecteurs (hermiticité, idempotence)
    "state_norm_tolerance": 1e-12,
    "nonsignaling_tolerance": 1e-9,
    "file_weight_tolerance": 1e-6       # renormalisation des fichiers de poids
}

# Limites et contraintes
LIMITS = {
    "max_dimension": 10 ** 7,           # taille maximale d'un comportement
    "max_strategies": 10 ** 7,          # colonnes de la matrice de stratégies
    "max_parties": 8,
    "cglmp_outputs": (2, 8),
    "inn22_settings": (2, 7),
    "mermin_parties": (2, 8)
}

# Configuration du solveur linéaire (scipy / HiGHS)
SOLVER_CONFIG = {
    "method": "highs-ds",
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
    "presolve": True,
    "contract_residual": 1e-9,          # résidu primal toléré
    "contract_slackness": 1e-7,         # complémentarité
    "contract_gap": 1e-7                # écart de dualité relatif
}

# Configuration de la divergence de Kullback-Leibler
KL_CONFIG = {
    "gap_tolerance": 1e-7,
    "max_iterations": 100_000,
    "refresh_every": 100,               # recalcul exact de A·λ
    "line_search_xtol": 1e-14
}

# Configuration des balayages
SCAN_CONFIG = {
    "default_steps": 51,
    "gamma_min": 0.0,
    "gamma_max": 2 ** -0.5,
    "gamma_steps": 201,
    "float_format": "%.10g",
    "default_jobs": 1,
    "default_seed": 20240101
}

# Codes de sortie de la ligne de commande
CLI_CONFIG = {
    "exit_codes": {
        "ok": 0,
        "failure": 1,
        "parse": 2,
        "solver": 3,
        "infeasible": 4
    },
    "monotonicity_trials": 500,
    "monotonicity_tolerance": 1e-9
}

# Configuration des logs
LOGGING_CONFIG = {
    "level": os.getenv("NONLOCALITY_LOG_LEVEL", "WARNING"),
    "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    "datefmt": "%Y-%m-%d %H:%M:%S"
}

# Valeurs de référence publiées (vérifiées par les tests)
REFERENCE_VALUES = {
    "pr_box_nl": 0.25,
    "tsirelson_nl": 0.1035,
    "cglmp_quantum_nl": {2: 0.1035, 3: 0.1143, 4: 0.1215, 5: 0.1269},
    "cglmp3_quantum_value": 0.2287,
    "gamma_maximizer": 0.617,
    "gamma_onset": 0.369,
    "maximally_entangled_gamma": 3 ** -0.5
}


def get_config(section: str) -> Dict[str, Any]:
    """Récupérer une section de configuration"""
    configs = {
        "app": APP_CONFIG,
        "numerics": NUMERICS_CONFIG,
        "limits": LIMITS,
        "solver": SOLVER_CONFIG,
        "kl": KL_CONFIG,
        "scan": SCAN_CONFIG,
        "cli": CLI_CONFIG,
        "logging": LOGGING_CONFIG,
        "references": REFERENCE_VALUES
    }

    return configs.get(section, {})


def get_tolerance(key: str) -> float:
    """Récupérer une tolérance numérique"""
    return NUMERICS_CONFIG[key]


def get_exit_code(key: str) -> int:
    """Récupérer un code de sortie de la ligne de commande"""
    return CLI_CONFIG["exit_codes"][key]


def is_debug_mode() -> bool:
    """Vérifier si le mode debug est activé"""
    return APP_CONFIG["debug"]


def get_output_path(subfolder: str = "") -> Path:
    """Obtenir le chemin vers un dossier de résultats"""
    path = OUTPUT_DIR / subfolder if subfolder else OUTPUT_DIR
    path.mkdir(parents=True, exist_ok=True)
    return path
