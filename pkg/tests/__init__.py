"""
Test package for hidaquat.

This package contains test modules for the p-adic, measure, quaternion
algebra and form layers, the configuration and the command-line suites.
"""
