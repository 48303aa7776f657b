# Sphinx configuration for the Morrey documentation.
# https://www.sphinx-doc.org/en/master/usage/configuration.html

from pathlib import Path

import toml

PYPROJECT = Path(__file__).parents[2] / "pyproject.toml"
poetry = toml.load(PYPROJECT)["tool"]["poetry"]

project = "Morrey"
author = "Chakib Benziane"
copyright = f"2023, {author}"
version = release = poetry["version"]

extensions = [
        "sphinx.ext.autodoc",
        "sphinx.ext.autosummary",
        "sphinx.ext.mathjax",
        "sphinx.ext.napoleon",
        "sphinx.ext.viewcode",
        "sphinxcontrib.autodoc_pydantic",
        "sphinx_copybutton",
        "myst_parser",
        ]

source_suffix = {
        ".rst": "restructuredtext",
        ".md": "markdown",
        }

myst_enable_extensions = ["colon_fence", "dollarmath"]

# report and config models: fields only, no json schema
autodoc_pydantic_model_show_json = False
autodoc_pydantic_model_show_config_summary = False
autodoc_pydantic_model_show_validator_summary = False
autodoc_pydantic_field_list_validators = False

autodoc_member_order = "bysource"
autodoc_typehints_format = "short"
autodoc_default_options = {
    "members": True,
    "show-inheritance": True,
    "undoc-members": True,
}
autosummary_generate = True

templates_path = ["_templates"]

html_theme = "sphinx_book_theme"
html_title = f"Morrey {version}"
