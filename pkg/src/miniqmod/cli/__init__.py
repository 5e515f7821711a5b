"""Command-line driver and the shipped example corpus."""
from .corpus import CORPUS, CorpusEntry, compile_entry, program_source
from .helpers import DegenerateSegment, linear_coefs, segment_coefs

__all__ = ["CORPUS", "CorpusEntry", "compile_entry", "program_source",
           "DegenerateSegment", "linear_coefs", "segment_coefs"]
