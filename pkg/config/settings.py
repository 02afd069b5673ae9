from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Library defaults; override with ``GLOBLIN_*`` environment variables or ``.env``."""

    log_level: str = "INFO"
    seed: int = 0x5EED
    quadrature_order: int = 8
    ratio_eps: float = 1e-7
    dense_limit: int = 4096
    exact_norm_limit: int = 512
    power_iterations: int = 200
    probe_count: int = 20
    output_dir: str = "output"

    model_config = SettingsConfigDict(env_prefix="GLOBLIN_", env_file=".env", extra="ignore")


settings = Settings()
