# core/settings.py
from functools import lru_cache
from pydantic_settings import BaseSettings, SettingsConfigDict

class Settings(BaseSettings):
    # Onde ler variáveis e como tratá-las
    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="",
        case_sensitive=False,
        extra="ignore",
    )

    # Nível dos eventos JSON (stderr)
    LOG_LEVEL: str = "WARNING"

    # ---- Diretórios (vazio = relativo à raiz do projeto) ----
    CONFIG_DIR: str = ""
    CORPUS_DIR: str = ""

@lru_cache()
def get_settings() -> Settings:
    return Settings()
