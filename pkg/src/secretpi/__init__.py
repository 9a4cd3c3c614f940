"""Secret pi-calculus workbench: parsing, reduction, labelled transitions,
spies and bounded weak bisimilarity."""

__version__ = "0.1.0"
