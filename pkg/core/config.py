import os, yaml

from core.settings import get_settings

BASE_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))

# usados quando app.yaml não define a chave
DEFAULT_MOTOR = {
    "ordem": 8,
    "ordem_maxima": 64,
    "tentativas": 3,
    "semente": 0,
    "limite_coordenadas": 3,
    "limite_auxiliar": 3,
    "tentativas_projecao": 10,
    "profundidade_verificacao": 2,
    "deslocamento_maximo": 4,
}

def _load_yaml(path: str) -> dict:
    if not os.path.exists(path):
        return {}
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}

def load_all_configs() -> dict:
    settings = get_settings()
    cfg_dir = settings.CONFIG_DIR or os.path.join(BASE_DIR, "config")
    app = _load_yaml(os.path.join(cfg_dir, "app.yaml"))
    motor = {**DEFAULT_MOTOR, **(app.get("motor") or {})}
    caminhos = app.get("caminhos") or {}
    corpus_dir = settings.CORPUS_DIR or os.path.join(BASE_DIR, caminhos.get("corpus") or "corpus")
    return {
        "app": app,
        "motor": motor,
        "dirs": {"config": cfg_dir, "corpus": corpus_dir},
    }
