#!/usr/bin/env python3
"""
Basaa Orthography Toolkit - Run Script
Thin launcher for the command-line interface
"""

from app.main import main

if __name__ == "__main__":
    main()
