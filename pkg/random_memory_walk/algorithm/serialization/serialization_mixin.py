"""
This module defines Mixin for serialization.
"""
import json
import math


def json_safe(value):
    """Replaces non-finite floats, recursively, by None."""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {key: json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(item) for item in value]
    return value


def dumps(values):
    """Deterministic JSON text: sorted keys, fixed indentation."""
    return json.dumps(json_safe(values), sort_keys=True, indent=2) + '\n'


class SerializationMixin(object):
    """
    Mixin for value objects with to_dict / from_dict, taking care of
    saving to and loading from JSON files.
    """

    def save_instance(self, filepath):
        with open(filepath, 'w') as file:
            file.write(dumps(self.to_dict()))

    @classmethod
    def load_instance(cls, filepath):
        with open(filepath, 'r') as file:
            load_dict = json.load(file)
        return cls.from_dict(load_dict)
