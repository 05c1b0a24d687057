"""
Tests for the ppv-certify toolkit.
"""
