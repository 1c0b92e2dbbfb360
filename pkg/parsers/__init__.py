from .complex_parser import ComplexParser

__all__ = ["ComplexParser"]
