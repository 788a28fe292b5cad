"""Bundled stopword lists: common English words plus per-language keyword sets."""

from __future__ import annotations

ENGLISH = frozenset(
    """
    a about above after again against all am an and any are as at be because
    been before being below between both but by can cannot could did do does
    doing down during each few for from further had has have having he her
    here hers herself him himself his how i if in into is it its itself just
    me more most my myself no nor not now of off on once only or other our
    ours ourselves out over own same she should so some such than that the
    their theirs them themselves then there these they this those through to
    too under until up very was we were what when where which while who whom
    why will with would you your yours yourself yourselves
    """.split()
)

JAVA_KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends false final finally float for goto
    if implements import instanceof int interface long native new null
    package private protected public return short static strictfp super
    switch synchronized this throw throws transient true try void volatile
    while
    """.split()
)

PYTHON_KEYWORDS = frozenset(
    """
    and as assert async await break class continue def del elif else except
    false finally for from global if import in is lambda none nonlocal not
    or pass raise return self true try while with yield
    """.split()
)

LANGUAGE_KEYWORDS = {
    "java": JAVA_KEYWORDS,
    "python": PYTHON_KEYWORDS,
}


def stopword_set(languages: tuple[str, ...] = ()) -> frozenset[str]:
    """English stopwords joined with the keyword lists of the given languages."""
    words = set(ENGLISH)
    for lang in languages:
        try:
            words |= LANGUAGE_KEYWORDS[lang]
        except KeyError:
            raise ValueError(f"no bundled keyword list for language {lang!r}") from None
    return frozenset(words)
