"""UTF-8 byte-offset bookkeeping.

Every span in the file formats (mentions, tokens, coreference chains,
sentences) is a [start, end) byte offset into the UTF-8 encoding of the
document text. Matching and tokenization happen on the decoded string, so
this module keeps the char<->byte maps in one place.
"""

import re

_TOKEN_RE = re.compile(r"\w+", re.UNICODE)


class ByteMapper:
    """Char/byte offset conversion for one text."""

    def __init__(self, text: str):
        self.text = text
        offsets = [0] * (len(text) + 1)
        total = 0
        for i, ch in enumerate(text):
            total += len(ch.encode("utf-8"))
            offsets[i + 1] = total
        self._char_to_byte = offsets
        self._byte_to_char = {b: i for i, b in enumerate(offsets)}

    @property
    def byte_len(self) -> int:
        return self._char_to_byte[-1]

    def to_byte(self, char_index: int) -> int:
        return self._char_to_byte[char_index]

    def to_char(self, byte_offset: int) -> int:
        try:
            return self._byte_to_char[byte_offset]
        except KeyError:
            raise ValueError(f"byte offset {byte_offset} is not on a character boundary") from None

    def slice(self, byte_start: int, byte_end: int) -> str:
        return self.text[self.to_char(byte_start):self.to_char(byte_end)]


# Greek all-caps drops diacritics ("ΝΟΣΟΚΟΜΟΣ"), so a pure case fold would
# never match accented lowercase patterns; fold Greek vowels to their plain
# forms. Latin accents are left alone (French keeps them in capitals).
_GREEK_DEACCENT = str.maketrans("άέήίόύώϊϋΐΰ", "αεηιουωιυιυ")


def fold(s: str) -> str:
    """Length-preserving case fold, so folded offsets align with the original."""
    return "".join(_fold_char(c) for c in s)


def _fold_char(c: str) -> str:
    folded = c.casefold()
    if len(folded) == 1:
        return folded.translate(_GREEK_DEACCENT)
    lowered = c.lower()
    return lowered.translate(_GREEK_DEACCENT) if len(lowered) == 1 else c


def word_tokens(text: str) -> list[tuple[int, int, str]]:
    """(char_start, char_end, surface) for every \\w+ run."""
    return [(m.start(), m.end(), m.group()) for m in _TOKEN_RE.finditer(text)]


def is_word_char(c: str) -> bool:
    return c.isalnum() or c == "_"
