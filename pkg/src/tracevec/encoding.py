"""Rendering abstract tokens as words and assembling sentences.

Surface forms: $START, $END, $ERR, $RET_*, name_$EQ_c and friends, !path
for stores, ?path for assume-time reads, and bare callee names.  Called,
ParamTo and ParamShare intentionally collide on the callee word so a call
is never duplicated alongside its dataflow tokens.
"""

from __future__ import annotations

from .abstraction import (
    AbstractionConfig,
    AccessPathSensitive,
    AccessPathStore,
    Called,
    Error,
    FunctionEnd,
    FunctionStart,
    ParamShare,
    ParamTo,
    PropRet,
    RetCmp,
    RetConst,
    RetError,
)

__all__ = ["Sentence", "encode_token", "encode_trace", "load_stop_words"]

Sentence = list[str]


def encode_token(tok) -> str:
    if isinstance(tok, Called):
        return tok.callee
    if isinstance(tok, (ParamTo, ParamShare)):
        return tok.earlier
    if isinstance(tok, RetCmp):
        return f"{tok.callee}_${tok.op}_{tok.constant}"
    if isinstance(tok, PropRet):
        return f"$RET_{tok.callee}"
    if isinstance(tok, RetConst):
        return f"$RET_{tok.constant}"
    if isinstance(tok, RetError):
        return f"$RET_{tok.code}"
    if isinstance(tok, FunctionStart):
        return "$START"
    if isinstance(tok, FunctionEnd):
        return "$END"
    if isinstance(tok, Error):
        return "$ERR"
    if isinstance(tok, AccessPathStore):
        return "!" + tok.path
    if isinstance(tok, AccessPathSensitive):
        return "?" + tok.path
    raise TypeError(f"unencodable token {tok!r}")


def encode_trace(tokens, cfg: AbstractionConfig) -> Sentence:
    """Encode abstract tokens as a sentence.

    Stop-word filtering applies to call-derived words only (Called, ParamTo,
    ParamShare); other token kinds always survive.
    """
    words = []
    for tok in tokens:
        word = encode_token(tok)
        if isinstance(tok, (Called, ParamTo, ParamShare)) and word in cfg.stop_words:
            continue
        words.append(word)
    return words


def load_stop_words(path) -> frozenset[str]:
    """Read a stop-word list, one identifier per line; '#' lines are comments."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh
                         if line.strip() and not line.startswith("#"))
