"""Berry-phase tunnelling spectra of large moments in cubic crystal fields."""

__version__ = "0.1.0"
