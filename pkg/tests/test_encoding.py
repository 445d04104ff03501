import pytest

from tracevec.abstraction import (
    ERROR,
    FUNCTION_END,
    FUNCTION_START,
    AbstractionConfig,
    AccessPathSensitive,
    AccessPathStore,
    Called,
    ParamShare,
    ParamTo,
    PropRet,
    RetCmp,
    RetConst,
    RetError,
)
from tracevec.encoding import encode_token, encode_trace

from conftest import sentences_for


@pytest.mark.parametrize("tok,word", [
    (Called("kmalloc"), "kmalloc"),
    (ParamTo("kfree", "kmalloc"), "kmalloc"),
    (ParamShare("unlock", "lock"), "lock"),
    (RetCmp("NEQ", "alloc", 0), "alloc_$NEQ_0"),
    (RetCmp("EQ", "alloc", -1), "alloc_$EQ_-1"),
    (RetError("ENOMEM"), "$RET_ENOMEM"),
    (RetConst(0), "$RET_0"),
    (RetConst(-99), "$RET_-99"),
    (PropRet("bar"), "$RET_bar"),
    (PropRet("PTR_ERR"), "$RET_PTR_ERR"),
    (AccessPathStore("->baz"), "!->baz"),
    (AccessPathSensitive("->foo.bar"), "?->foo.bar"),
    (FUNCTION_START, "$START"),
    (FUNCTION_END, "$END"),
    (ERROR, "$ERR"),
])
def test_surface_forms(tok, word):
    assert encode_token(tok) == word


class TestStopWords:
    CFG = AbstractionConfig()

    def test_defaults(self):
        assert self.CFG.stop_words == {"__builtin_expect", "__compiletime_assert"}

    def test_call_words_filtered(self):
        tokens = [Called("__builtin_expect"), Called("g")]
        assert encode_trace(tokens, self.CFG) == ["g"]

    def test_dataflow_words_filtered(self):
        tokens = [ParamTo("g", "__builtin_expect"), Called("g")]
        assert encode_trace(tokens, self.CFG) == ["g"]

    def test_non_call_words_always_survive(self):
        # only call-derived words are subject to stop-word filtering
        tokens = [RetCmp("EQ", "__builtin_expect", 0), PropRet("__builtin_expect")]
        assert encode_trace(tokens, self.CFG) == [
            "__builtin_expect_$EQ_0", "$RET___builtin_expect"]

    def test_empty_stop_list_keeps_everything(self):
        cfg = AbstractionConfig(stop_words=frozenset())
        tokens = [Called("__builtin_expect")]
        assert encode_trace(tokens, cfg) == ["__builtin_expect"]


class TestEndToEndShape:
    """The two-path lock/alloc procedure whose encoded sentences are known
    in full (asserted token-for-token in the acceptance suite)."""

    SOURCE = """
    int f(struct s *o, int lockarg) {
        lock(lockarg);
        int m = alloc(64);
        if (m != 0) {
            o->baz = m;
            bar(m);
        }
        unlock(lockarg);
        if (m != 0) {
            return 0;
        }
        return -12;
    }
    """

    def test_dataflow_words_precede_their_call(self):
        s1 = sentences_for(self.SOURCE)[0]
        # alloc's result feeds bar: the pair is "alloc bar", never "bar alloc"
        assert "alloc bar" in " ".join(s1)

    def test_error_ordering(self):
        sentences = sentences_for(self.SOURCE)
        failing = next(s for s in sentences if "$ERR" in s)
        assert failing[-3:] == ["$ERR", "$RET_ENOMEM", "$END"]
