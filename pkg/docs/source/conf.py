# -*- coding: utf-8 -*-
#
# supercone documentation build configuration file
#
# This file is execfile()d with the current directory set to its containing dir.

import datetime
from importlib.metadata import version as get_version

# -- General configuration -----------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.napoleon",
    "sphinx.ext.viewcode",
    "sphinx.ext.mathjax",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

# General information about the project.
project = "supercone"
author = "supercone Authors"

version = get_version("supercone-spdc")
release = version
this_year = datetime.date.today().year
copyright = "%s, %s" % (this_year, author)

exclude_patterns = ["_build"]
pygments_style = "sphinx"

# Numpy style docstrings only.
napoleon_google_docstring = False
napoleon_numpy_docstring = True

# Compiled kernels cannot be introspected without numba.
autodoc_mock_imports = ["numba"]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
}

# -- Options for HTML output ---------------------------------------------------

html_theme = "sphinx_rtd_theme"
html_static_path = []
htmlhelp_basename = "superconedoc"

# -- Options for LaTeX and manual page output ----------------------------------

latex_documents = [
    ("index", "supercone.tex", "supercone Documentation", author, "manual"),
]

man_pages = [("index", "supercone", "supercone Documentation", [author], 1)]
