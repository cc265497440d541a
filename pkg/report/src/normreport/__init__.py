"""Static report renderer for norm-verification suite outputs."""

from .render import ReportBundle, render
from .schemas import SchemaError, load_results, load_study_file

__all__ = ["ReportBundle", "render", "SchemaError", "load_results", "load_study_file"]

__version__ = "0.1.0"
