from functools import partial

from yaml import SafeLoader as YamlSafeLoader, YAMLError, load as load_yaml

load_yaml = partial(load_yaml, Loader=YamlSafeLoader)

__all__ = ["YAMLError", "load_yaml"]
