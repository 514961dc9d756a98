"""
BL Frame - Test Package

This package contains the tests for the spline systems, the frame norms, the
reference norms and both front ends.
"""
