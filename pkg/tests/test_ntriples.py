"""N-Triples parsing and serialization."""
import io
from pathlib import Path

import pytest

from dsnip import (ParseError, RdfGraph, Triple, blank, iri, literal,
                   parse_ntriples, parse_ntriples_file, serialize, term_to_text,
                   triple_to_line)

GOLDEN = Path(__file__).parent / "data" / "golden.nt"


def test_golden_corpus_parses():
    graph, report = parse_ntriples_file(GOLDEN)
    # 19 statements in the file, one exact duplicate.
    assert report.triples == 18
    assert len(graph) == 18
    assert report.skipped_lines == 0
    assert report.duration_ms >= 0.0


def test_golden_round_trip_is_exact():
    graph, _ = parse_ntriples_file(GOLDEN)
    text = serialize(graph)
    again, report = parse_ntriples(text)
    assert again == graph
    assert report.skipped_lines == 0
    # Serialization is a fixed point: canonical text re-serializes to itself.
    assert serialize(again) == text


def test_term_escapes_resolve():
    graph, _ = parse_ntriples_file(GOLDEN)
    lexicals = {n.lexical for n in graph.nodes}
    assert "café" in lexicals          # é in a literal
    assert "http://g.test/café" in lexicals  # é in an IRI
    assert "\U0001F600" in lexicals         # astral \U escape
    assert 'line1\nline2\ttab "quoted" back\\slash' in lexicals
    assert "" in lexicals                   # empty literal


def test_lang_and_datatype_terms():
    graph, _ = parse_ntriples_file(GOLDEN)
    assert literal("bonjour", lang="fr") in graph.nodes
    assert literal("color", lang="en-US") in graph.nodes
    assert literal("42", datatype="http://www.w3.org/2001/XMLSchema#integer") in graph.nodes


def test_blank_nodes_and_self_loop():
    graph, _ = parse_ntriples_file(GOLDEN)
    assert blank("b1") in graph.nodes and blank("b2") in graph.nodes
    g = iri("http://g.test/gamma")
    assert any(t.subject == g and t.object == g for t in graph.triples)


def test_duplicate_lines_dedupe_preserving_order():
    text = ("<http://x.test/b> <http://x.test/p> <http://x.test/c> .\n"
            "<http://x.test/a> <http://x.test/p> <http://x.test/c> .\n"
            "<http://x.test/b> <http://x.test/p> <http://x.test/c> .\n")
    graph, report = parse_ntriples(text)
    assert report.triples == 2
    assert graph.triples[0].subject == iri("http://x.test/b")


@pytest.mark.parametrize("bad", [
    "<http://x.test/a> <http://x.test/p> .",             # missing object
    "<http://x.test/a> <http://x.test/p> <http://x.test/b>",  # missing dot
    '"lit" <http://x.test/p> <http://x.test/b> .',       # literal subject
    "<http://x.test/a> _:b <http://x.test/b> .",         # blank predicate
    '<http://x.test/a> <http://x.test/p> "x"@ .',        # empty lang tag
    '<http://x.test/a> <http://x.test/p> "x"^^missing .',
    "<http://x.test/a> <http://x.test/p> <http://x.test/b> . extra",
    '<http://x.test/a> <http://x.test/p> "unterminated .',
    '<http://x.test/a> <http://x.test/p> "bad\\qescape" .',
    "<http://x.test/a> <http://x.test/p> <http://x.test/sp ace> .",
    "<http://x.test/a> <http://x.test/p> \"bad\\u12\" .",
])
def test_strict_mode_rejects_malformed_lines(bad):
    with pytest.raises(ParseError):
        parse_ntriples(bad)


def test_parse_error_carries_line_number():
    text = ("<http://x.test/a> <http://x.test/p> <http://x.test/b> .\n"
            "garbage here\n")
    with pytest.raises(ParseError) as err:
        parse_ntriples(text)
    assert err.value.line == 2
    assert "2" in str(err.value)


def test_lenient_mode_skips_and_counts():
    text = ("<http://x.test/a> <http://x.test/p> <http://x.test/b> .\n"
            "garbage here\n"
            "also : garbage\n"
            "<http://x.test/b> <http://x.test/p> <http://x.test/c> .\n")
    graph, report = parse_ntriples(text, mode="lenient")
    assert report.triples == 2
    assert report.skipped_lines == 2


def test_comments_blanks_and_crlf():
    text = ("# leading comment\r\n"
            "\r\n"
            "<http://x.test/a> <http://x.test/p> \"v\" .\r\n"
            "   \n"
            "<http://x.test/a> <http://x.test/p> <http://x.test/b> . # tail\n")
    graph, report = parse_ntriples(text)
    assert report.triples == 2
    assert report.skipped_lines == 0


def test_parse_accepts_str_bytes_and_streams():
    line = '<http://x.test/a> <http://x.test/p> "café" .\n'
    for source in (line, line.encode("utf-8"), io.StringIO(line),
                   io.BytesIO(line.encode("utf-8"))):
        graph, _ = parse_ntriples(source)
        assert len(graph) == 1
        assert graph.triples[0].object.lexical == "café"


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        parse_ntriples("", mode="fast")


def test_serializer_escapes_and_quotes():
    t = triple_to_line(
        Triple(
            iri("http://x.test/a"), iri("http://x.test/p"),
            literal('say "hi"\n\tplease\\')))
    assert t == ('<http://x.test/a> <http://x.test/p> '
                 '"say \\"hi\\"\\n\\tplease\\\\" .')
    assert term_to_text(literal("x", lang="en-US")) == '"x"@en-US'
    assert term_to_text(blank("b7")) == "_:b7"
    assert term_to_text(
        literal("5", datatype="http://www.w3.org/2001/XMLSchema#int")
    ) == '"5"^^<http://www.w3.org/2001/XMLSchema#int>'


def test_report_json_shape():
    _, report = parse_ntriples("<http://x.test/a> <http://x.test/p> \"v\" .")
    d = report.to_json_dict()
    assert set(d) == {"triples", "skippedLines", "durationMs"}
    assert d["triples"] == 1 and d["skippedLines"] == 0


def test_graph_equality_ignores_order():
    a = iri("http://x.test/a")
    p = iri("http://x.test/p")
    b = iri("http://x.test/b")
    t1 = Triple(a, p, b)
    t2 = Triple(b, p, a)
    assert RdfGraph([t1, t2]) == RdfGraph([t2, t1])
    assert hash(RdfGraph([t1, t2])) == hash(RdfGraph([t2, t1]))
