# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Application configuration using pydantic-settings."""

from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-wide settings loaded from environment variables."""

    output_dir: Path = Path("./results")
    workers: int = 1
    fft_workers: int = 1
    log_level: str = "INFO"

    model_config = SettingsConfigDict(
        env_prefix="ATOMGATE_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


settings = Settings()
