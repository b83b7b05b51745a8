"""API routes"""

