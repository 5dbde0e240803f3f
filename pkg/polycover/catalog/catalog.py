import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Sequence

from polycover.geometry import Polytope3

"""
Named polytopes:

Every entry of polytopes.json names a generator recipe and its parameters,
so that the CLI verbs accept e.g. ``chiseled-cube2`` wherever a polytope
file is expected.
"""


# Enum variants are strings to keep the JSON readable.
class Recipe(str, Enum):
    Cube = "cube"
    Chiseled = "chiseled"
    Counterexample = "counterexample"
    Random = "random"


@dataclass
class PolytopeConfig:
    name: str = field(default="")
    aliases: Sequence[str] = field(default_factory=list)
    recipe: Recipe = field(default=Recipe.Cube)
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.recipe = Recipe(self.recipe)


# Keys are stored in lowercase.
polytope_aliases: Dict[str, str] = None
polytope_configs: Dict[str, PolytopeConfig] = None


def load_catalog() -> Dict[str, PolytopeConfig]:
    global polytope_aliases
    global polytope_configs

    polytope_aliases = {}
    polytope_configs = {}

    with open(Path(__file__).parent / "polytopes.json", "r") as f:
        catalog_dict = json.load(f)

    for key, value in catalog_dict.items():
        config = PolytopeConfig(**value)
        config.name = key

        key = key.lower()
        polytope_configs[key] = config

        for alias in config.aliases:
            polytope_aliases[alias.lower()] = key

    return polytope_configs


def resolve_polytope_config(name: str) -> PolytopeConfig:
    name = name.lower()
    if not polytope_configs:
        load_catalog()

    if name in polytope_aliases:
        name = polytope_aliases[name]

    if name not in polytope_configs:
        raise ValueError(f"Unknown polytope '{name}'.")

    return polytope_configs[name]


def build_polytope(config: PolytopeConfig) -> Polytope3:
    # Localized import: generators pull in the analysis stack.
    from polycover import generators

    params = config.params
    if config.recipe == Recipe.Cube:
        return generators.cube(params["n"])
    if config.recipe == Recipe.Chiseled:
        return generators.chiseled_cube(params["n"], params["pairs"], params.get("depth", 1))
    if config.recipe == Recipe.Counterexample:
        return generators.counterexample_simplex()
    return generators.random_cs_smooth(params["seed"], params["n"], params["chisels"])
