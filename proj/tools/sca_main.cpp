// sca: command-line runner for the shift, conservation, equilibrium, and
// randomization machinery in include/sca.
//
// Every run prints a JSON envelope {tool, tool_version, command, config,
// result, wall_time_seconds} to stdout. Commands with tabular payloads take
// --csv PATH; PATH "-" prints the CSV to stdout instead of the JSON. With a
// fixed seed and config, outputs are byte-identical apart from
// wall_time_seconds. Exit codes: 0 success, 1 I/O or parse problems
// (including bad flags), 2 contract violations raised by the library.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sca/analysis.hpp"
#include "sca/conservation.hpp"
#include "sca/lattice2d.hpp"
#include "sca/markov.hpp"
#include "sca/model_io.hpp"
#include "sca/models.hpp"
#include "sca/randomize.hpp"
#include "sca/version.hpp"

using json = nlohmann::ordered_json;

namespace {

struct Output {
    json result;
    std::string csv;         // written to --csv when nonempty
    std::string csv_path;    // "", "-", or a file path
    std::string raw_stdout;  // plain-text commands print this and no JSON
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

sca::Model resolve_model(const std::string& spec) {
    const auto& names = sca::builtin_model_names();
    if (std::find(names.begin(), names.end(), spec) != names.end())
        return sca::builtin_model(spec);
    return sca::load_model(spec);
}

const sca::SlidingBlockMap1D& require_1d(const sca::Model& m) {
    if (!m.map)
        throw sca::unsupported_input("model '" + m.name +
                                     "' is a torus model; this command needs a 1D map");
    return *m.map;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sca::parse_error("cannot write '" + path + "'");
    out << content;
    out.flush();
    if (!out) throw sca::parse_error("short write to '" + path + "'");
}

sca::LocalObservable load_or_constant(const std::string& path, const sca::Sft1D& x) {
    if (path.empty()) return sca::LocalObservable::constant(x, sca::rational(0));
    sca::LocalObservable f = sca::load_observable(path);
    if (!(f.sft() == x))
        throw sca::contract_violation("observable in '" + path +
                                      "' lives on a different shift than the run uses");
    return f;
}

// "gibbs" (measure fit to the observable), "maxent" (observable ignored),
// or "bernoulli:p" on a binary full shift.
sca::MarkovMeasure make_initial_measure(const std::string& spec, const sca::Sft1D& domain,
                                        const std::optional<sca::LocalObservable>& f) {
    if (spec == "gibbs") {
        if (f) return sca::gibbs_from_observable(domain, *f);
        return sca::gibbs_from_observable(domain, sca::LocalObservable::constant(domain, 0));
    }
    if (spec == "maxent")
        return sca::gibbs_from_observable(domain, sca::LocalObservable::constant(domain, 0));
    if (spec.rfind("bernoulli:", 0) == 0) {
        if (!domain.is_full_shift() || domain.alphabet_size() != 2)
            throw sca::parse_error("bernoulli initial measures need a binary full shift");
        double p = 0;
        std::size_t used = 0;
        const std::string digits = spec.substr(10);
        try {
            p = std::stod(digits, &used);
        } catch (const std::exception&) {
            throw sca::parse_error("bad bias in '" + spec + "'");
        }
        if (used != digits.size() || p <= 0.0 || p >= 1.0)
            throw sca::parse_error("bernoulli bias must lie strictly between 0 and 1");
        return sca::MarkovMeasure(domain, 0, {{1.0 - p, p}});
    }
    throw sca::parse_error("unknown initial measure '" + spec +
                           "' (expected gibbs, maxent, or bernoulli:p)");
}

json observable_rows(const sca::LocalObservable& f) {
    json rows = json::object();
    if (f.range() == 0) {
        rows[""] = sca::rational_to_string(f.value(sca::cells_t{}));
        return rows;
    }
    const auto& alph = *f.sft().alphabet();
    for (const sca::cells_t& w : f.sft().language(f.range(), sca::kLanguageCap))
        rows[sca::display_cells(alph, w)] = sca::rational_to_string(f.value(w));
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"statistical mechanics of surjective cellular maps on shift spaces"};
    app.require_subcommand(1);
    std::function<Output()> runner;
    std::string command;
    json config;

    // ---- analyze ----------------------------------------------------------
    auto an = std::make_shared<std::string>();
    {
        CLI::App* sub = app.add_subcommand("analyze",
            "decide surjectivity, pre-injectivity, and injectivity of a map");
        sub->add_option("--model", *an, "model file or built-in name")->required();
        sub->callback([&, an] {
            command = "analyze";
            config = {{"model", *an}};
            runner = [an]() -> Output {
                const sca::Model m = resolve_model(*an);
                const auto rep = sca::analyze_map(require_1d(m));
                Output out;
                out.result = {
                    {"surjective", rep.surjective},
                    {"preinjective", rep.preinjective},
                    {"injective", rep.injective},
                    {"orphan", rep.orphan ? json(sca::display_word(*rep.orphan)) : json(nullptr)},
                };
                return out;
            };
        });
    }

    // ---- conserve ---------------------------------------------------------
    CLI::App* conserve = app.add_subcommand("conserve", "conservation laws of a map");
    conserve->require_subcommand(1);
    struct ConserveOpts {
        std::string model, observable, out;
        int range = 1;
    };
    auto co = std::make_shared<ConserveOpts>();
    {
        CLI::App* sub = conserve->add_subcommand("check",
            "is the observable conserved by the map?");
        sub->add_option("--model", co->model, "model file or built-in name")->required();
        sub->add_option("--observable", co->observable, "observable file")->required();
        sub->callback([&, co] {
            command = "conserve check";
            config = {{"model", co->model}, {"observable", co->observable}};
            runner = [co]() -> Output {
                const sca::Model m = resolve_model(co->model);
                const auto& phi = require_1d(m);
                const sca::LocalObservable f = load_or_constant(co->observable, phi.domain());
                Output out;
                out.result = {{"conserved", sca::is_conserved(phi, f)},
                              {"observable_range", f.range()}};
                return out;
            };
        });
    }
    {
        CLI::App* sub = conserve->add_subcommand("discover",
            "all conserved observables of a given range, modulo trivial ones");
        sub->add_option("--model", co->model, "model file or built-in name")->required();
        sub->add_option("--range", co->range, "observable range to search")->required();
        sub->callback([&, co] {
            command = "conserve discover";
            config = {{"model", co->model}, {"range", co->range}};
            runner = [co]() -> Output {
                const sca::Model m = resolve_model(co->model);
                const auto basis = sca::discover_conserved(require_1d(m), co->range);
                json reps = json::array();
                for (const auto& f : basis.representatives) reps.push_back(observable_rows(f));
                Output out;
                out.result = {{"range", co->range},
                              {"quotient_dim", basis.quotient_dim},
                              {"trivial_dim", static_cast<int>(basis.trivial_basis.size())},
                              {"representatives", reps}};
                return out;
            };
        });
    }
    {
        CLI::App* sub = conserve->add_subcommand("flux",
            "local flux certifying a conserved observable");
        sub->add_option("--model", co->model, "model file or built-in name")->required();
        sub->add_option("--observable", co->observable, "observable file")->required();
        sub->add_option("--out", co->out, "write the flux as an observable file");
        sub->callback([&, co] {
            command = "conserve flux";
            config = {{"model", co->model},
                      {"observable", co->observable},
                      {"out", co->out}};
            runner = [co]() -> Output {
                const sca::Model m = resolve_model(co->model);
                const auto& phi = require_1d(m);
                const sca::LocalObservable f = load_or_constant(co->observable, phi.domain());
                const sca::FluxObservable flux = sca::synthesize_flux(phi, f);
                if (!co->out.empty()) write_text(co->out, sca::serialize_observable(flux.flux));
                Output out;
                out.result = {{"flux_range", flux.flux.range()},
                              {"flux", observable_rows(flux.flux)},
                              {"difference_range", flux.difference.range()}};
                return out;
            };
        });
    }

    // ---- gibbs ------------------------------------------------------------
    CLI::App* gibbs = app.add_subcommand("gibbs", "equilibrium measures from observables");
    gibbs->require_subcommand(1);
    struct GibbsOpts {
        std::string sft, model, observable, init = "gibbs", csv;
        int length = 6;
        double tolerance = 1e-9;
    };
    auto go = std::make_shared<GibbsOpts>();
    {
        CLI::App* sub = gibbs->add_subcommand("build",
            "Markov measure equilibrium for an observable on a shift");
        sub->add_option("--sft", go->sft, "shift file")->required();
        sub->add_option("--observable", go->observable, "observable file (default: constant 0)");
        sub->add_option("--csv", go->csv, "transition rows as CSV (PATH or -)");
        sub->callback([&, go] {
            command = "gibbs build";
            config = {{"sft", go->sft}, {"observable", go->observable}, {"csv", go->csv}};
            runner = [go]() -> Output {
                const sca::Sft1D x = sca::load_sft(go->sft);
                const sca::LocalObservable f = load_or_constant(go->observable, x);
                const sca::MarkovMeasure mu = sca::gibbs_from_observable(x, f);
                const auto& alph = *x.alphabet();
                json contexts = json::array(), stationary = json::array(),
                     transitions = json::array();
                std::ostringstream csv;
                csv << "context,symbol,probability\n";
                for (std::size_t u = 0; u < mu.contexts().size(); ++u) {
                    contexts.push_back(sca::display_cells(alph, mu.contexts()[u]));
                    stationary.push_back(mu.stationary(static_cast<int>(u)));
                    json row = json::array();
                    for (int a = 0; a < x.alphabet_size(); ++a) {
                        row.push_back(mu.transition(static_cast<int>(u), a));
                        csv << sca::display_cells(alph, mu.contexts()[u]) << ','
                            << alph.symbol(a) << ','
                            << fmt17(mu.transition(static_cast<int>(u), a)) << '\n';
                    }
                    transitions.push_back(row);
                }
                Output out;
                out.result = {{"pressure", sca::pressure(x, f)},
                              {"order", mu.order()},
                              {"contexts", contexts},
                              {"stationary", stationary},
                              {"transitions", transitions}};
                out.csv = csv.str();
                out.csv_path = go->csv;
                return out;
            };
        });
    }
    {
        CLI::App* sub = gibbs->add_subcommand("push",
            "cylinder table of the image measure under a map");
        sub->add_option("--model", go->model, "model file or built-in name")->required();
        sub->add_option("--observable", go->observable,
                        "observable on the domain shift (default: constant 0)");
        sub->add_option("--init", go->init, "initial measure: gibbs, maxent, or bernoulli:p");
        sub->add_option("--length", go->length, "longest cylinder to tabulate");
        sub->add_option("--csv", go->csv, "word,length,probability CSV (PATH or -)");
        sub->callback([&, go] {
            command = "gibbs push";
            config = {{"model", go->model}, {"observable", go->observable},
                      {"init", go->init}, {"length", go->length}, {"csv", go->csv}};
            runner = [go]() -> Output {
                const sca::Model m = resolve_model(go->model);
                const auto& phi = require_1d(m);
                std::optional<sca::LocalObservable> f;
                if (!go->observable.empty())
                    f = load_or_constant(go->observable, phi.domain());
                const sca::MarkovMeasure mu = make_initial_measure(go->init, phi.domain(), f);
                const sca::CylinderTable table = sca::pushforward(phi, mu, go->length);
                const auto& alph = *phi.codomain().alphabet();
                std::ostringstream csv;
                csv << "word,length,probability\n";
                json sums = json::array();
                for (int n = 1; n <= go->length; ++n) {
                    double sum = 0;
                    for (const auto& [w, p] : table.levels[static_cast<std::size_t>(n - 1)]) {
                        csv << sca::display_cells(alph, w) << ',' << n << ',' << fmt17(p) << '\n';
                        sum += p;
                    }
                    sums.push_back(sum);
                }
                Output out;
                out.result = {{"levels", go->length}, {"level_sums", sums}};
                out.csv = csv.str();
                out.csv_path = go->csv;
                return out;
            };
        });
    }
    {
        CLI::App* sub = gibbs->add_subcommand("invariance",
            "compare a measure with its image, cylinder by cylinder");
        sub->add_option("--model", go->model, "model file or built-in name")->required();
        sub->add_option("--observable", go->observable,
                        "observable on the domain shift (default: constant 0)");
        sub->add_option("--init", go->init, "initial measure: gibbs, maxent, or bernoulli:p");
        sub->add_option("--length", go->length, "longest cylinder compared");
        sub->add_option("--tolerance", go->tolerance, "probability tolerance");
        sub->callback([&, go] {
            command = "gibbs invariance";
            config = {{"model", go->model}, {"observable", go->observable},
                      {"init", go->init}, {"length", go->length},
                      {"tolerance", go->tolerance}};
            runner = [go]() -> Output {
                const sca::Model m = resolve_model(go->model);
                const auto& phi = require_1d(m);
                std::optional<sca::LocalObservable> f;
                if (!go->observable.empty())
                    f = load_or_constant(go->observable, phi.domain());
                const sca::MarkovMeasure mu = make_initial_measure(go->init, phi.domain(), f);
                const sca::InvarianceReport rep =
                    sca::check_invariance(phi, mu, go->length, go->tolerance);
                Output out;
                out.result = {
                    {"equal_up_to_length", rep.equal_up_to_length},
                    {"checked_length", rep.checked_length},
                    {"tolerance", rep.tolerance},
                    {"first_mismatch",
                     rep.first_mismatch ? json(sca::display_word(*rep.first_mismatch))
                                        : json(nullptr)},
                    {"measure_prob", rep.measure_prob},
                    {"image_prob", rep.image_prob},
                    {"note", rep.note},
                };
                return out;
            };
        });
    }
    {
        CLI::App* sub = gibbs->add_subcommand("entropy",
            "entropy of the equilibrium measure, with an optional block profile");
        sub->add_option("--sft", go->sft, "shift file")->required();
        sub->add_option("--observable", go->observable, "observable file (default: constant 0)");
        sub->add_option("--length", go->length, "profile depth");
        sub->add_option("--csv", go->csv, "length,rate,increment CSV (PATH or -)");
        sub->callback([&, go] {
            command = "gibbs entropy";
            config = {{"sft", go->sft}, {"observable", go->observable},
                      {"length", go->length}, {"csv", go->csv}};
            runner = [go]() -> Output {
                const sca::Sft1D x = sca::load_sft(go->sft);
                const sca::LocalObservable f = load_or_constant(go->observable, x);
                const sca::MarkovMeasure mu = sca::gibbs_from_observable(x, f);
                const auto profile = sca::block_entropy_profile(mu.cylinder_table(go->length));
                std::ostringstream csv;
                csv << "length,rate,increment\n";
                json rows = json::array();
                for (const auto& row : profile) {
                    csv << row.length << ',' << fmt17(row.rate) << ',' << fmt17(row.increment)
                        << '\n';
                    rows.push_back({{"length", row.length},
                                    {"rate", row.rate},
                                    {"increment", row.increment}});
                }
                Output out;
                out.result = {{"entropy", sca::entropy(mu)},
                              {"pressure", sca::pressure(x, f)},
                              {"expected_value", sca::expected_value(mu, f)},
                              {"profile", rows}};
                out.csv = csv.str();
                out.csv_path = go->csv;
                return out;
            };
        });
    }
    {
        CLI::App* sub = gibbs->add_subcommand("pressure",
            "log of the leading transfer eigenvalue");
        sub->add_option("--sft", go->sft, "shift file")->required();
        sub->add_option("--observable", go->observable, "observable file (default: constant 0)");
        sub->callback([&, go] {
            command = "gibbs pressure";
            config = {{"sft", go->sft}, {"observable", go->observable}};
            runner = [go]() -> Output {
                const sca::Sft1D x = sca::load_sft(go->sft);
                const sca::LocalObservable f = load_or_constant(go->observable, x);
                Output out;
                out.result = {{"pressure", sca::pressure(x, f)}};
                return out;
            };
        });
    }

    // ---- simulate ---------------------------------------------------------
    CLI::App* simulate = app.add_subcommand("simulate", "torus models");
    simulate->require_subcommand(1);
    struct SimOpts {
        int width = 200, height = 200;
        long long steps = 1000;
        std::string init = "bernoulli:0.1", record = "energy,magnetization", csv;
        std::uint64_t seed = 1;
        long long record_every = 1;
        std::string in, out;
    };
    auto so = std::make_shared<SimOpts>();
    {
        CLI::App* sub = simulate->add_subcommand("q2r",
            "reversible two-stage spin dynamics with exact energy conservation");
        sub->add_option("--width", so->width, "torus width (even)");
        sub->add_option("--height", so->height, "torus height (even)");
        sub->add_option("--steps", so->steps, "number of full steps");
        sub->add_option("--init", so->init, "initial spins, bernoulli:p");
        sub->add_option("--seed", so->seed, "random seed");
        sub->add_option("--record", so->record,
                        "comma list of energy, magnetization, blocks:n");
        sub->add_option("--record-every", so->record_every, "rows every k steps");
        sub->add_option("--csv", so->csv, "time series CSV (PATH or -)");
        sub->callback([&, so] {
            command = "simulate q2r";
            config = {{"width", so->width}, {"height", so->height}, {"steps", so->steps},
                      {"init", so->init}, {"seed", so->seed}, {"record", so->record},
                      {"record_every", so->record_every}, {"csv", so->csv}};
            runner = [so]() -> Output {
                if (so->init.rfind("bernoulli:", 0) != 0)
                    throw sca::parse_error("q2r init must be bernoulli:p");
                double p = 0;
                try {
                    p = std::stod(so->init.substr(10));
                } catch (const std::exception&) {
                    throw sca::parse_error("bad bias in '" + so->init + "'");
                }
                bool rec_energy = false, rec_mag = false;
                int block_cells = 0;
                {
                    std::istringstream in(so->record);
                    std::string tok;
                    while (std::getline(in, tok, ',')) {
                        if (tok == "energy") rec_energy = true;
                        else if (tok == "magnetization") rec_mag = true;
                        else if (tok.rfind("blocks:", 0) == 0)
                            block_cells = std::stoi(tok.substr(7));
                        else if (!tok.empty())
                            throw sca::parse_error("unknown record field '" + tok + "'");
                    }
                }
                if (so->record_every < 1)
                    throw sca::parse_error("--record-every must be positive");

                sca::SpinGrid g = sca::SpinGrid::bernoulli(so->width, so->height, p, so->seed);
                const long long e0 = sca::ising_energy(g);
                const auto b0 = block_cells ? sca::block_distribution(g, block_cells)
                                            : std::map<std::uint64_t, double>{};
                std::ostringstream csv;
                csv << "t";
                if (rec_energy) csv << ",energy";
                if (rec_mag) csv << ",magnetization";
                if (block_cells) csv << ",block_tv_from_initial";
                csv << '\n';
                bool conserved = true;
                for (long long t = 0;; t += 1) {
                    if (t % so->record_every == 0 || t == so->steps) {
                        csv << t;
                        if (rec_energy) {
                            const long long e = sca::ising_energy(g);
                            conserved = conserved && e == e0;
                            csv << ',' << e;
                        }
                        if (rec_mag) csv << ',' << sca::magnetization(g);
                        if (block_cells)
                            csv << ','
                                << fmt17(sca::total_variation(
                                       sca::block_distribution(g, block_cells), b0));
                        csv << '\n';
                    }
                    if (t == so->steps) break;
                    sca::q2r_advance(g, 1);
                }
                conserved = conserved && sca::ising_energy(g) == e0;
                Output out;
                out.result = {{"initial_energy", e0},
                              {"final_energy", sca::ising_energy(g)},
                              {"energy_conserved", conserved},
                              {"final_magnetization", sca::magnetization(g)}};
                if (block_cells)
                    out.result["final_block_tv_from_initial"] =
                        sca::total_variation(sca::block_distribution(g, block_cells), b0);
                out.csv = csv.str();
                out.csv_path = so->csv;
                return out;
            };
        });
    }
    {
        CLI::App* sub = simulate->add_subcommand("contour-map",
            "map a grid of spins (+/- rows) to its boundary contours");
        sub->add_option("--in", so->in, "spin grid file, rows of + and -")->required();
        sub->add_option("--out", so->out, "contour grid file, glyph names per row")->required();
        sub->callback([&, so] {
            command = "simulate contour-map";
            config = {{"in", so->in}, {"out", so->out}};
            runner = [so]() -> Output {
                std::vector<std::string> rows;
                {
                    std::istringstream in(sca::read_text_file(so->in));
                    std::string line;
                    while (std::getline(in, line)) {
                        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
                            line.pop_back();
                        if (!line.empty()) rows.push_back(line);
                    }
                }
                const sca::SpinGrid g = sca::SpinGrid::from_rows(rows);
                const sca::ContourGrid y = sca::contour_map(g);
                std::ostringstream grid;
                for (int r = 0; r < y.height(); ++r) {
                    for (int c = 0; c < y.width(); ++c) {
                        if (c) grid << ' ';
                        grid << sca::contour_glyph_name(y.at(r, c));
                    }
                    grid << '\n';
                }
                write_text(so->out, grid.str());
                Output out;
                out.result = {{"width", y.width()},
                              {"height", y.height()},
                              {"valid", sca::is_valid_contour(y)},
                              {"contour_length", sca::contour_length(y)},
                              {"ising_energy", sca::ising_energy(g)}};
                return out;
            };
        });
    }

    // ---- randomize --------------------------------------------------------
    CLI::App* randomize = app.add_subcommand("randomize", "approach to the uniform measure");
    randomize->require_subcommand(1);
    struct RandOpts {
        std::string model, init = "maxent", csv;
        double bias = 0.1, eps = 0.01;
        long long tmax = 512, time = 100, samples = 1000;
        int cells = 8, width = 0;
        std::uint64_t seed = 1;
    };
    auto ro = std::make_shared<RandOpts>();
    {
        CLI::App* sub = randomize->add_subcommand("exact",
            "closed-form marginals of a XOR-additive map acting on Bernoulli(p)");
        sub->add_option("--model", ro->model, "model file or built-in name")->required();
        sub->add_option("--bias", ro->bias, "Bernoulli bias of the input");
        sub->add_option("--cells", ro->cells, "marginal width");
        sub->add_option("--tmax", ro->tmax, "largest time");
        sub->add_option("--eps", ro->eps, "threshold for the density-one fraction");
        sub->add_option("--csv", ro->csv, "t,tv,cesaro_tv,density CSV (PATH or -)");
        sub->callback([&, ro] {
            command = "randomize exact";
            config = {{"model", ro->model}, {"bias", ro->bias}, {"cells", ro->cells},
                      {"tmax", ro->tmax}, {"eps", ro->eps}, {"csv", ro->csv}};
            runner = [ro]() -> Output {
                const sca::Model m = resolve_model(ro->model);
                const auto& phi = require_1d(m);
                if (ro->tmax < 0) throw sca::parse_error("--tmax must be nonnegative");
                std::vector<double> tv;
                std::ostringstream csv;
                csv << "t,tv,cesaro_tv,density\n";
                sca::ParityRow row = sca::parity_row(phi, 0);
                std::vector<double> cesaro;
                for (long long t = 0; t <= ro->tmax; ++t) {
                    const auto dist = sca::exact_marginal(row, ro->bias, ro->cells);
                    if (cesaro.empty()) cesaro.assign(dist.prob.size(), 0.0);
                    for (std::size_t i = 0; i < dist.prob.size(); ++i)
                        cesaro[i] += dist.prob[i];
                    sca::MarginalDistribution mean{ro->cells, 2, cesaro};
                    for (double& x : mean.prob) x /= static_cast<double>(t + 1);
                    const auto one = sca::exact_marginal(row, ro->bias, 1);
                    tv.push_back(sca::tv_to_uniform(dist));
                    csv << t << ',' << fmt17(tv.back()) << ',' << fmt17(sca::tv_to_uniform(mean))
                        << ',' << fmt17(one.prob[1]) << '\n';
                    if (t < ro->tmax) row = sca::advance_parity_row(phi, row);
                }
                // Spike ratios: the value at t = 2^k against the median over
                // the surrounding dyadic window (2^{k-1}, 2^{k+1}).
                json spikes = json::object();
                for (int k = 2; (1LL << (k + 1)) <= ro->tmax; ++k) {
                    const long long spike = 1LL << k;
                    std::vector<double> window;
                    for (long long t = (1LL << (k - 1)) + 1; t < (1LL << (k + 1)); ++t)
                        if (t != spike) window.push_back(tv[static_cast<std::size_t>(t)]);
                    std::sort(window.begin(), window.end());
                    const double median = window[window.size() / 2];
                    spikes[std::to_string(spike)] =
                        median > 0 ? tv[static_cast<std::size_t>(spike)] / median : 0.0;
                }
                Output out;
                out.result = {{"density_one_fraction", sca::density_one_diagnostic(tv, ro->eps)},
                              {"spike_ratios", spikes},
                              {"tv_final", tv.back()}};
                out.csv = csv.str();
                out.csv_path = ro->csv;
                return out;
            };
        });
    }
    {
        CLI::App* sub = randomize->add_subcommand("sample",
            "Monte-Carlo orbit study for any 1D endomorphism");
        sub->add_option("--model", ro->model, "model file or built-in name")->required();
        sub->add_option("--init", ro->init, "initial measure: maxent, gibbs, or bernoulli:p");
        sub->add_option("--time", ro->time, "number of steps");
        sub->add_option("--width", ro->width,
                        "initial word length (0 picks cells + time * spread + 8)");
        sub->add_option("--samples", ro->samples, "independent replicas");
        sub->add_option("--seed", ro->seed, "random seed");
        sub->add_option("--cells", ro->cells, "observed window width");
        sub->add_option("--csv", ro->csv, "t,density CSV (PATH or -)");
        sub->callback([&, ro] {
            command = "randomize sample";
            config = {{"model", ro->model}, {"init", ro->init}, {"time", ro->time},
                      {"width", ro->width}, {"samples", ro->samples}, {"seed", ro->seed},
                      {"cells", ro->cells}, {"csv", ro->csv}};
            runner = [ro]() -> Output {
                const sca::Model m = resolve_model(ro->model);
                const auto& phi = require_1d(m);
                const sca::MarkovMeasure mu =
                    make_initial_measure(ro->init, phi.domain(), std::nullopt);
                int width = ro->width;
                if (width == 0)
                    width = ro->cells +
                            static_cast<int>(ro->time) * (phi.right() - phi.left()) + 8;
                const sca::OrbitSample run = sca::sample_orbit(
                    phi, mu, ro->time, width, ro->samples, ro->seed, ro->cells);
                std::ostringstream csv;
                csv << "t,density\n";
                for (std::size_t t = 0; t < run.density.size(); ++t)
                    csv << t << ',' << fmt17(run.density[t]) << '\n';
                Output out;
                out.result = {{"cells", ro->cells},
                              {"density_final", run.density.back()},
                              {"observed_cells", run.observed_cells},
                              {"marginal_tv_to_uniform", sca::tv_to_uniform(run.marginal)}};
                out.csv = csv.str();
                out.csv_path = ro->csv;
                return out;
            };
        });
    }

    // ---- models -----------------------------------------------------------
    CLI::App* models = app.add_subcommand("models", "built-in model inventory");
    models->require_subcommand(1);
    auto mo = std::make_shared<std::pair<std::string, std::string>>();  // name, out
    {
        CLI::App* sub = models->add_subcommand("list", "names of all built-in models");
        sub->callback([&] {
            command = "models list";
            config = json::object();
            runner = []() -> Output {
                json items = json::array();
                for (const auto& name : sca::builtin_model_names()) {
                    const sca::Model m = sca::builtin_model(name);
                    items.push_back({{"name", m.name},
                                     {"kind", m.is_1d() ? "map" : "torus"},
                                     {"description", m.description}});
                }
                Output out;
                out.result = {{"models", items}};
                return out;
            };
        });
    }
    {
        CLI::App* sub = models->add_subcommand("show",
            "print a built-in model in the model file format");
        sub->add_option("name", mo->first, "built-in model name")->required();
        sub->add_option("--out", mo->second, "write to a file instead of stdout");
        sub->callback([&, mo] {
            command = "models show";
            config = {{"name", mo->first}, {"out", mo->second}};
            runner = [mo]() -> Output {
                const std::string text = sca::serialize_model(sca::builtin_model(mo->first));
                Output out;
                if (mo->second.empty()) {
                    out.raw_stdout = text;
                } else {
                    write_text(mo->second, text);
                    out.result = {{"written", mo->second}, {"bytes", text.size()}};
                }
                return out;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        Output out = runner();
        if (!out.raw_stdout.empty()) {
            std::cout << out.raw_stdout;
            return 0;
        }
        if (!out.csv_path.empty()) {
            if (out.csv_path == "-") {
                std::cout << out.csv;
                return 0;
            }
            write_text(out.csv_path, out.csv);
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json envelope;
        envelope["tool"] = sca::kToolName;
        envelope["tool_version"] = sca::kToolVersion;
        envelope["command"] = command;
        envelope["config"] = config;
        envelope["result"] = out.result;
        envelope["wall_time_seconds"] = elapsed;
        std::cout << envelope.dump(2) << '\n';
        return 0;
    } catch (const sca::parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const sca::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
