"""A compiler and statevector verifier for a small Qmod dialect."""
__version__ = "0.1.0"
