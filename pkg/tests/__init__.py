"""Test suite for APEX DualBounds."""
