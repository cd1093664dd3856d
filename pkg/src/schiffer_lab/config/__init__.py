from .settings import RunConfig, build_config, get_settings, use_settings, reset_settings

__all__ = ["RunConfig", "build_config", "get_settings", "use_settings", "reset_settings"]
