"""synsetlink: ImageNet synsets -> WordNet 3.0 LOD URIs -> Wikidata items."""

from synsetlink.identifiers import (
    ImageNetId,
    PartOfSpeech,
    QId,
    SynsetRef,
    UriStyle,
    WnVersion,
    WordNetUri,
    imagenet_to_uri,
    normalize_uri,
    parse_imagenet_id,
    parse_qid,
    parse_wordnet_uri,
    uri_to_imagenet,
)

__version__ = "0.1.0"

__all__ = [
    "ImageNetId",
    "PartOfSpeech",
    "QId",
    "SynsetRef",
    "UriStyle",
    "WnVersion",
    "WordNetUri",
    "imagenet_to_uri",
    "normalize_uri",
    "parse_imagenet_id",
    "parse_qid",
    "parse_wordnet_uri",
    "uri_to_imagenet",
    "__version__",
]
