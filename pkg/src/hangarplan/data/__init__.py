"""Bundled data files: catalog snapshot, aircraft outline, scenario presets,
and reference blueprint costs."""

from importlib import resources


def read_text(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def preset_names() -> list[str]:
    root = resources.files(__package__).joinpath("presets")
    return sorted(p.name.removesuffix(".json") for p in root.iterdir()
                  if p.name.endswith(".json"))


def read_preset(name: str) -> str:
    return resources.files(__package__).joinpath("presets").joinpath(f"{name}.json").read_text(
        encoding="utf-8")
