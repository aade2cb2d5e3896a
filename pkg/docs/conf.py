#!/usr/bin/env python
#
# cmfe_gelation documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys

sys.path.insert(0, os.path.abspath("../src"))

import cmfe_gelation

# -- General configuration ---------------------------------------------

extensions = ["sphinx.ext.autodoc", "sphinx.ext.viewcode"]

templates_path = ["_templates"]

source_suffix = ".rst"

master_doc = "index"

project = "CMFE Gelation"
copyright = "2026, CMFE Gelation developers"
author = "CMFE Gelation developers"

version = cmfe_gelation.__version__
release = cmfe_gelation.__version__

language = "en"

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

pygments_style = "sphinx"

todo_include_todos = False

# -- Options for HTML output -------------------------------------------

html_theme = "alabaster"

html_static_path = ["_static"]

htmlhelp_basename = "cmfe_gelationdoc"

# -- Options for LaTeX output ------------------------------------------

latex_elements = {}

latex_documents = [
    (master_doc, "cmfe_gelation.tex", "CMFE Gelation Documentation", author, "manual"),
]

# -- Options for manual page output ------------------------------------

man_pages = [(master_doc, "cmfe_gelation", "CMFE Gelation Documentation", [author], 1)]

# -- Options for Texinfo output ----------------------------------------

texinfo_documents = [
    (
        master_doc,
        "cmfe_gelation",
        "CMFE Gelation Documentation",
        author,
        "cmfe_gelation",
        "Sectional solver and gelation-bound checks for coagulation with multiple fragmentation.",
        "Miscellaneous",
    ),
]
