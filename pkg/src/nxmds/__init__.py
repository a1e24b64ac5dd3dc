"""Row-extended MDS storage with hash-based integrity audits."""

__version__ = "0.1.0"
