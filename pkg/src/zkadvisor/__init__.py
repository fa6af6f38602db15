"""Privacy-preserving advisory pipeline: attested risk-trait inference plus
an LLM advisor driven by emphasis-controlled prompting."""

__version__ = "0.1.0"
