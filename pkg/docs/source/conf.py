# -*- coding: utf-8 -*-
#
# RegexAnneal documentation build configuration file
#
# This file is execfile()d with the current directory set to its containing dir.
#
# Note that not all possible configuration values are present in this
# autogenerated file.

import datetime
from importlib.metadata import version as get_version

# -- General configuration -----------------------------------------------------

# If your documentation needs a minimal Sphinx version, state it here.
needs_sphinx = "1.8"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
]

# The suffix of source filenames.
source_suffix = ".rst"

# The master toctree document.
master_doc = "index"

# General information about the project.
project = "RegexAnneal"
author = "RegexAnneal Authors"

# The version info for the project you're documenting, acts as replacement for
# |version| and |release|, also used in various other places throughout the
# built documents.
version = get_version(project)
release = version
this_year = datetime.date.today().year
copyright = "%s, %s" % (this_year, author)

# The name of the Pygments (syntax highlighting) style to use.
pygments_style = "sphinx"

# -- Options for HTML output ---------------------------------------------------

html_theme = "sphinx_rtd_theme"

# Output file base name for HTML help builder.
htmlhelp_basename = "regexannealdoc"

# -- Options for LaTeX output --------------------------------------------------

latex_documents = [
    ("index", "regexanneal.tex", "RegexAnneal Documentation", author, "manual"),
]

# -- Options for manual page output --------------------------------------------

man_pages = [("index", "regexanneal", "RegexAnneal Documentation", [author], 1)]

intersphinx_mapping = {
    "python": ("http://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
}
