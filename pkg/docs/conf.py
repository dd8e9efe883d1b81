import os
import sys

sys.path.insert(0, os.path.abspath("../src"))

project = "SwitchLab"
author = "Louis Goodnews"
release = "0.1.0"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.viewcode",
    "sphinx_autodoc_typehints",
]

autodoc_mock_imports = ["Logger", "DateUtil"]

html_theme = "sphinx_rtd_theme"
