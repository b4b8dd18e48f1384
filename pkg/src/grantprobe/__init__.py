"""grantprobe: perturbation-based evaluation harness for LLM grant review.

The package turns a small corpus of grant proposals into a controlled
benchmark: documents are parsed into structured bundles, degraded along six
quality axes by a registry of 42 perturbations, reviewed by three LLM review
architectures, judged by a three-model panel, and analysed with reliability
and sensitivity statistics.  Everything runs offline against a deterministic
mock gateway or online against any OpenAI-compatible endpoint.
"""

__version__ = "0.1.0"
