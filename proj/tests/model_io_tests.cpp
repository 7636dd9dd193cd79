// Tests for the plain-text formats: round trips for every built-in model,
// serialization as a fixed point, hand-written documents, and a catalogue of
// malformed inputs that must fail loudly.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "sca/model_io.hpp"

using namespace sca;

namespace {

std::string write_temp(const std::string& name, const std::string& text)
{
    const std::string path = "/tmp/sca_model_io_" + name;
    std::ofstream out(path);
    out << text;
    return path;
}

}  // namespace

TEST_CASE("every built-in model survives a serialize/parse round trip")
{
    for (const std::string& name : builtin_model_names()) {
        const Model m = builtin_model(name);
        const std::string text = serialize_model(m);
        const Model back = parse_model(text);
        REQUIRE(models_equal(m, back));
        // Serialization is a fixed point of the round trip.
        REQUIRE(serialize_model(back) == text);
    }
}

TEST_CASE("a hand-written model file reproduces the built-in XOR rule")
{
    const std::string text =
        "# adds each cell to its right neighbour\n"
        "[model]\n"
        "name = xor01\n"
        "\n"
        "[alphabet]\n"
        "symbols = 0 1\n"
        "\n"
        "[domain]\n"
        "forbidden =\n"
        "[codomain]\n"
        "forbidden =   # full shift too\n"
        "\n"
        "[map]\n"
        "left = 0\n"
        "right = 1\n"
        "00 -> 0\n"
        "01 -> 1\n"
        "10 -> 1\n"
        "11 -> 0\n";
    const Model m = parse_model(text);
    REQUIRE(m.name == "xor01");
    REQUIRE(models_equal(m, builtin_model("xor01")));
}

TEST_CASE("torus models serialize to a tag and nothing else")
{
    const Model q2r = parse_model("[lattice2d]\ntype = q2r\n");
    REQUIRE(q2r.name == "q2r");
    REQUIRE(q2r.lattice2d == "q2r");
    REQUIRE_FALSE(q2r.map.has_value());
    REQUIRE(models_equal(q2r, builtin_model("q2r")));

    REQUIRE_THROWS_AS(parse_model("[lattice2d]\ntype = glider\n"), parse_error);
    REQUIRE_THROWS_AS(
        parse_model("[lattice2d]\ntype = q2r\n[map]\nleft = 0\nright = 0\n"), parse_error);
}

TEST_CASE("shift spaces round-trip, including multi-character alphabets")
{
    const Sft1D golden = Sft1D(binary_alphabet(), {parse_word(binary_alphabet(), "11")});
    REQUIRE(parse_sft(serialize_sft(golden)) == golden);

    const Sft1D full = full_shift(make_alphabet({"0", "1", "2"}));
    REQUIRE(parse_sft(serialize_sft(full)) == full);

    const auto pairs = make_alphabet({"00", "01", "10", "11"});
    const Sft1D paired(pairs, {parse_word(pairs, "00,11"), parse_word(pairs, "01,01")});
    const std::string text = serialize_sft(paired);
    REQUIRE(text.find("00,11") != std::string::npos);
    REQUIRE(parse_sft(text) == paired);

    const Sft1D direct = parse_sft("[alphabet]\nsymbols = 0 1\n[sft]\nforbidden = 11 000\n");
    REQUIRE(direct.memory() == 2);
    REQUIRE_FALSE(direct.is_full_shift());
}

TEST_CASE("observables round-trip with exact rational values")
{
    const auto ternary = make_alphabet({"0", "1", "2"});
    const Sft1D fs = full_shift(ternary);

    const LocalObservable walls(fs, 1, [](const cells_t& w) { return rational(w[0] == 2 ? 1 : 0); });
    REQUIRE(parse_observable(serialize_observable(walls)) == walls);

    const LocalObservable fancy(fs, 2, [](const cells_t& w) {
        return rational(3 * w[0] - 2 * w[1], 7);
    });
    const std::string text = serialize_observable(fancy);
    REQUIRE(parse_observable(text) == fancy);
    REQUIRE(serialize_observable(parse_observable(text)) == text);

    // Constants carry a single value key instead of rows.
    const LocalObservable c = LocalObservable::constant(fs, rational(-3, 2));
    const std::string ctext = serialize_observable(c);
    REQUIRE(ctext.find("value = -3/2") != std::string::npos);
    REQUIRE(parse_observable(ctext) == c);

    // On a proper subshift only language words appear as rows.
    const Sft1D golden(binary_alphabet(), {parse_word(binary_alphabet(), "11")});
    const LocalObservable ones(golden, 1, [](const cells_t& w) { return rational(w[0]); });
    const std::string gtext = serialize_observable(ones);
    REQUIRE(parse_observable(gtext) == ones);
    REQUIRE(gtext.find("forbidden = 11") != std::string::npos);
}

TEST_CASE("observable documents reject inconsistent range and rows")
{
    const std::string head = "[alphabet]\nsymbols = 0 1\n[observable]\n";
    // Range 0 takes a value, not rows.
    REQUIRE_THROWS_AS(parse_observable(head + "range = 0\n0 -> 1\n1 -> 0\n"), parse_error);
    REQUIRE_THROWS_AS(parse_observable(head + "range = 0\n"), parse_error);
    // Positive range takes rows, not a value.
    REQUIRE_THROWS_AS(parse_observable(head + "range = 1\nvalue = 2\n"), parse_error);
    // Rows must cover the language exactly.
    REQUIRE_THROWS_AS(parse_observable(head + "range = 1\n0 -> 1\n"), parse_error);
    REQUIRE_THROWS_AS(parse_observable(head + "range = 1\n0 -> 1\n1 -> 0\n00 -> 1\n"), parse_error);
    REQUIRE_THROWS_AS(parse_observable(head + "range = -1\n"), parse_error);
    REQUIRE_THROWS_AS(parse_observable(head + "range = 1\n0 -> 1\n1 -> 1/0\n"), parse_error);
    REQUIRE_THROWS_AS(parse_observable(head + "range = 1\n0 -> 1\n1 -> abc\n"), parse_error);
    // Rows outside the language of the declared shift.
    REQUIRE_THROWS_AS(
        parse_observable("[alphabet]\nsymbols = 0 1\n[sft]\nforbidden = 11\n"
                         "[observable]\nrange = 2\n00 -> 1\n01 -> 0\n10 -> 0\n11 -> 5\n"),
        parse_error);
}

TEST_CASE("malformed documents fail with parse errors, never silently")
{
    // Section grammar.
    REQUIRE_THROWS_AS(parse_sft("[alphabet\nsymbols = 0 1\n"), parse_error);
    REQUIRE_THROWS_AS(parse_sft("[bogus]\nsymbols = 0 1\n"), parse_error);
    REQUIRE_THROWS_AS(parse_sft("symbols = 0 1\n"), parse_error);
    REQUIRE_THROWS_AS(parse_sft("[alphabet]\nsymbols = 0 1\n[alphabet]\nsymbols = 0\n"),
                      parse_error);
    REQUIRE_THROWS_AS(parse_sft("[alphabet]\nsymbols = 0 1\nnonsense line\n"), parse_error);
    REQUIRE_THROWS_AS(parse_sft("[alphabet]\nsymbols = 0 1\nsymbols = 0\n"), parse_error);
    REQUIRE_THROWS_AS(parse_sft("[alphabet]\ncolor = red\n"), parse_error);
    REQUIRE_THROWS_AS(parse_sft("[alphabet]\nsymbols = 0 1\n[sft]\n0 -> 1\n"), parse_error);
    REQUIRE_THROWS_AS(parse_sft(""), parse_error);

    // Wrong document kind.
    REQUIRE_THROWS_AS(parse_sft("[alphabet]\nsymbols = 0 1\n[map]\nleft = 0\nright = 0\n"),
                      parse_error);
    REQUIRE_THROWS_AS(parse_observable("[model]\nname = x\n"), parse_error);
    REQUIRE_THROWS_AS(parse_model("[alphabet]\nsymbols = 0 1\n[sft]\nforbidden =\n"), parse_error);

    // Model-specific complaints.
    const std::string mhead = "[alphabet]\nsymbols = 0 1\n[map]\n";
    REQUIRE_THROWS_AS(parse_model("[alphabet]\nsymbols = 0 1\n"), parse_error);
    REQUIRE_THROWS_AS(parse_model(mhead + "right = 0\n0 -> 0\n1 -> 1\n"), parse_error);
    REQUIRE_THROWS_AS(parse_model(mhead + "left = zero\nright = 0\n0 -> 0\n1 -> 1\n"), parse_error);
    REQUIRE_THROWS_AS(parse_model(mhead + "left = 0\nright = 0.5\n0 -> 0\n1 -> 1\n"), parse_error);
    REQUIRE_THROWS_AS(parse_model(mhead + "left = 0\nright = 0\n0 -> 0\n"), parse_error);
    REQUIRE_THROWS_AS(parse_model(mhead + "left = 0\nright = 0\n0 -> 0\n1 -> 2\n"), parse_error);
    REQUIRE_THROWS_AS(parse_model(mhead + "left = 0\nright = 0\n0 -> 0\n1 -> 1\n00 -> 0\n"),
                      parse_error);
    REQUIRE_THROWS_AS(parse_model(mhead + "left = 0\nright = 0\n0 -> 0\n0 -> 1\n1 -> 1\n"),
                      parse_error);
    REQUIRE_THROWS_AS(parse_model(mhead + "left = 0\nright = 0\n0 ->\n1 -> 1\n"), parse_error);

    // A map whose image leaves the declared codomain.
    REQUIRE_THROWS_AS(
        parse_model("[alphabet]\nsymbols = 0 1\n[codomain]\nforbidden = 11\n"
                    "[map]\nleft = 0\nright = 0\n0 -> 0\n1 -> 1\n"),
        invalid_construction);
}

TEST_CASE("file loaders report the offending path")
{
    const std::string good = write_temp("good.sft", "[alphabet]\nsymbols = 0 1\n[sft]\nforbidden = 11\n");
    const Sft1D x = load_sft(good);
    REQUIRE(x.memory() == 1);

    const std::string bad = write_temp("bad.sft", "[alphabet\nsymbols = 0 1\n");
    try {
        load_sft(bad);
        FAIL("expected a parse error");
    } catch (const parse_error& e) {
        REQUIRE(std::string(e.what()).find(bad) != std::string::npos);
    }

    try {
        load_model("/tmp/sca_model_io_does_not_exist.model");
        FAIL("expected a parse error");
    } catch (const parse_error& e) {
        REQUIRE(std::string(e.what()).find("does_not_exist") != std::string::npos);
    }

    const std::string obs = write_temp(
        "ones.obs", "[alphabet]\nsymbols = 0 1\n[observable]\nrange = 1\n0 -> 0\n1 -> 1\n");
    const LocalObservable f = load_observable(obs);
    REQUIRE(f.range() == 1);
    REQUIRE(f.value({1}) == rational(1));

    std::remove(good.c_str());
    std::remove(bad.c_str());
    std::remove(obs.c_str());
}

TEST_CASE("model equality tracks the name, the tag, and the behaviour")
{
    Model a = builtin_model("xor01");
    Model b = builtin_model("xor01");
    b.description = "different words";
    REQUIRE(models_equal(a, b));

    Model renamed = builtin_model("xor01");
    renamed.name = "other";
    REQUIRE_FALSE(models_equal(a, renamed));

    REQUIRE_FALSE(models_equal(builtin_model("q2r"), builtin_model("ising-contour")));
    REQUIRE_FALSE(models_equal(builtin_model("xor01"), builtin_model("xor-symmetric")));
    Model tagless;
    tagless.name = "xor01";
    REQUIRE_FALSE(models_equal(a, tagless));
    REQUIRE_THROWS_AS(serialize_model(tagless), domain_violation);
}
