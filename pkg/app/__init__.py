"""Basaa Orthography Toolkit - tone-aware transliteration between Basaa spellings"""

__version__ = "0.1.0"
__author__ = "Basaa Orthography Toolkit Team"
