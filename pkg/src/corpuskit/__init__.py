"""corpuskit: corpus manager for morphologically rich low-resource languages."""

from .corpus import Corpus, meta_from_document
from .registry import Registry, TextMeta, default_registry
from .morphology import (Dictionary, default_feature_map, default_ruleset,
                         export_unimorph, import_unimorph, load_feature_map,
                         load_ruleset)
from .bundle import load_bundle, save_bundle

__version__ = "0.1.0"

__all__ = [
    "Corpus", "Dictionary", "Registry", "TextMeta",
    "default_registry", "default_ruleset", "default_feature_map",
    "load_ruleset", "load_feature_map",
    "export_unimorph", "import_unimorph",
    "load_bundle", "save_bundle", "meta_from_document",
]
