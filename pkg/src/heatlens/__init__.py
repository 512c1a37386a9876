"""Decision-boundary geometry via Brownian hitting probabilities."""

__version__ = "0.1.0"
