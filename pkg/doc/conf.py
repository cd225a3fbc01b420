"""Sphinx configuration file for single-package documentation builds.
"""

from documenteer.conf.pipelinespkg import *


project = "voa.pseudotrace"
html_theme_options["logotext"] = project
html_title = project
html_short_title = project
