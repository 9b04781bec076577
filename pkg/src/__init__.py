"""k-synchronizability verification toolkit for message-passing systems"""

__version__ = "0.1.0"
