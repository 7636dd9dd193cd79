#pragma once

// The worked examples shipped with the tool: seven one-dimensional maps and
// two torus models. Everything the CLI can name lives here, so tests and
// command-line runs agree on what, say, "xor-with-walls" means.

#include <optional>
#include <string>
#include <vector>

#include "sca/errors.hpp"
#include "sca/sliding_map.hpp"
#include "sca/word.hpp"

namespace sca {

struct Model {
    std::string name;
    std::string description;
    std::optional<SlidingBlockMap1D> map;  // engaged for the 1D models
    std::string lattice2d;                 // "q2r" or "ising-contour" for the torus models

    bool is_1d() const { return map.has_value(); }
};

inline const std::vector<std::string>& builtin_model_names() {
    static const std::vector<std::string> names = {
        "xor01",
        "xor-symmetric",
        "xor-with-walls",
        "ternary-collapse",
        "transpose-xor",
        "bipermutive-ternary",
        "majority3",
        "q2r",
        "ising-contour",
    };
    return names;
}

inline Model builtin_model(const std::string& name) {
    auto binary = [] { return full_shift(binary_alphabet()); };
    auto ternary = [] { return full_shift(make_alphabet({"0", "1", "2"})); };

    if (name == "xor01") {
        Sft1D fs = binary();
        return {name, "adds each cell to its right neighbour modulo 2",
                SlidingBlockMap1D(fs, fs, 0, 1,
                                  [](const cells_t& w) { return (w[0] + w[1]) % 2; }),
                ""};
    }
    if (name == "xor-symmetric") {
        Sft1D fs = binary();
        return {name, "adds the two outer neighbours modulo 2, ignoring the centre cell",
                SlidingBlockMap1D(fs, fs, -1, 1,
                                  [](const cells_t& w) { return (w[0] + w[2]) % 2; }),
                ""};
    }
    if (name == "xor-with-walls") {
        Sft1D fs = ternary();
        return {name, "XOR dynamics running between permanent walls of symbol 2",
                SlidingBlockMap1D(fs, fs, 0, 1,
                                  [](const cells_t& w) {
                                      return w[0] == 2 ? 2 : (w[0] + w[1]) % 2;
                                  }),
                ""};
    }
    if (name == "ternary-collapse") {
        auto a3 = make_alphabet({"0", "1", "2"});
        Sft1D dom(a3, {parse_word(a3, "11"), parse_word(a3, "22")});
        Sft1D cod(a3, {parse_word(a3, "22"), parse_word(a3, "21")});
        return {name, "factors the shift forbidding 11, 22 onto the shift forbidding 22, 21",
                SlidingBlockMap1D(dom, cod, 0, 1,
                                  [](const cells_t& w) {
                                      return (w[0] == 2 && w[1] == 1) ? 1 : w[0];
                                  }),
                ""};
    }
    if (name == "transpose-xor") {
        // Pair symbols "ab"; the space-time diagrams of this reversible map
        // are the transposed diagrams of the symmetric XOR.
        Sft1D fs = full_shift(make_alphabet({"00", "01", "10", "11"}));
        return {name, "reversible pair-symbol map transposing the symmetric XOR in space-time",
                SlidingBlockMap1D(fs, fs, 0, 1,
                                  [](const cells_t& w) {
                                      const int a = w[0] / 2, b = w[0] % 2, d = w[1] % 2;
                                      return b * 2 + (a + d) % 2;
                                  }),
                ""};
    }
    if (name == "bipermutive-ternary") {
        Sft1D fs = ternary();
        return {name, "adds the outer neighbours modulo 3, plus one when the centre reads 2",
                SlidingBlockMap1D(fs, fs, -1, 1,
                                  [](const cells_t& w) {
                                      return (w[0] + w[2] + (w[1] == 2 ? 1 : 0)) % 3;
                                  }),
                ""};
    }
    if (name == "majority3") {
        Sft1D fs = binary();
        return {name, "majority vote of a cell and its two neighbours",
                SlidingBlockMap1D(fs, fs, -1, 1,
                                  [](const cells_t& w) {
                                      return (w[0] + w[1] + w[2]) >= 2 ? 1 : 0;
                                  }),
                ""};
    }
    if (name == "q2r")
        return {name, "reversible two-stage spin dynamics on an even torus", std::nullopt, "q2r"};
    if (name == "ising-contour")
        return {name, "two-to-one factor map from torus spins to boundary contours",
                std::nullopt, "ising-contour"};
    throw domain_violation("unknown built-in model '" + name + "'");
}

}  // namespace sca
