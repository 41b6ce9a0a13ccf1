"""fiberlens: cohort saliency engine and analytics service for fiber-tract studies."""

__version__ = "0.1.0"
