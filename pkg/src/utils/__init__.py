"""Utility functions: logging setup"""
