"""Message catalogues: flat key=template files, one per language.

Feedback items carry keys plus parameters; this module turns them into
display text. Catalogues ship inside the package under data/messages/ and
additional directories can be layered on top for custom exercises.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

DEFAULT_LANGUAGE = "en"

_PLACEHOLDER = re.compile(r"\{([a-z_]+)\}")


def parse_catalogue(text: str) -> dict[str, str]:
    """Parse `key = template` lines; # starts a comment, blank lines skipped."""
    out: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, template = line.partition("=")
        if not sep:
            continue
        out[key.strip()] = template.strip()
    return out


class MessageCatalogue:
    """Per-language key -> template lookup with English fallback."""

    def __init__(self, by_language: dict[str, dict[str, str]]):
        self.by_language = by_language

    @classmethod
    def load_default(cls) -> "MessageCatalogue":
        data = resources.files("logictutor").joinpath("data/messages")
        languages = {}
        for entry in sorted(data.iterdir(), key=lambda e: e.name):
            if entry.name.endswith(".txt"):
                languages[entry.name[:-4]] = parse_catalogue(entry.read_text(encoding="utf-8"))
        return cls(languages)

    @classmethod
    def load_dir(cls, path: Path) -> "MessageCatalogue":
        languages = {}
        for file in sorted(Path(path).glob("*.txt")):
            languages[file.stem] = parse_catalogue(file.read_text(encoding="utf-8"))
        return cls(languages)

    def languages(self) -> tuple[str, ...]:
        return tuple(sorted(self.by_language))

    def resolve(self, key: str, params: dict | None = None, language: str = DEFAULT_LANGUAGE) -> str:
        template = self.by_language.get(language, {}).get(key)
        if template is None:
            template = self.by_language.get(DEFAULT_LANGUAGE, {}).get(key)
        if template is None:
            return key
        params = params or {}
        return _PLACEHOLDER.sub(lambda m: str(params.get(m.group(1), m.group(0))), template)

    def resolve_items(self, items, language: str = DEFAULT_LANGUAGE) -> list[dict]:
        """Wire form of feedback items with resolved display text attached."""
        out = []
        for item in items:
            entry = item.to_dict()
            entry["text"] = self.resolve(item.key, item.params, language)
            out.append(entry)
        return out


_default: MessageCatalogue | None = None


def default_catalogue() -> MessageCatalogue:
    global _default
    if _default is None:
        _default = MessageCatalogue.load_default()
    return _default
