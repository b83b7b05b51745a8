"""Test suite for the difference calculus toolkit"""
