"""Tests for qrt-elliptic."""
