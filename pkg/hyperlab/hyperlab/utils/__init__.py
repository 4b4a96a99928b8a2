"""
Utility modules for Hyperlab
"""

import importlib

from hyperlab.hyperlab.exceptions import ConfigError, throw


def get_attr(method_string: str):
    """
    Resolve a dotted path such as "package.module.attribute"

    Args:
        method_string: Dotted path to a module-level attribute

    Returns:
        The attribute object
    """
    module_name, _, attr = method_string.rpartition(".")
    if not module_name:
        throw(f"Not a dotted path: {method_string}", ConfigError)
    try:
        module = importlib.import_module(module_name)
    except ImportError as e:
        throw(f"Cannot import {module_name}: {e}", ConfigError)
    try:
        return getattr(module, attr)
    except AttributeError:
        throw(f"{module_name} has no attribute {attr}", ConfigError)
