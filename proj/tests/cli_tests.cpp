// End-to-end tests for the sca binary: envelope shape, command results,
// CSV routing, determinism under a fixed seed, and exit codes. The binary
// path and the samples directory come in as compile definitions.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "sca/model_io.hpp"
#include "sca/version.hpp"

using json = nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args)
{
    const std::string cmd = std::string(SCA_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string sample(const std::string& name)
{
    return std::string(SCA_SAMPLES_DIR) + "/" + name;
}

// Runs a command expected to succeed with a JSON envelope on stdout.
json run_json(const std::string& args)
{
    const RunResult r = run_cli(args);
    INFO("command: " << args << "\nstdout: " << r.out);
    REQUIRE(r.code == 0);
    const json envelope = json::parse(r.out);
    REQUIRE(envelope.at("tool") == sca::kToolName);
    REQUIRE(envelope.at("tool_version") == sca::kToolVersion);
    REQUIRE(envelope.contains("command"));
    REQUIRE(envelope.contains("config"));
    REQUIRE(envelope.contains("result"));
    REQUIRE(envelope.at("wall_time_seconds").is_number());
    return envelope;
}

std::string strip_wall_time(const std::string& text)
{
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.find("wall_time_seconds") == std::string::npos) out << line << '\n';
    return out.str();
}

long count_lines(const std::string& text)
{
    long n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("models list describes the whole inventory in one envelope")
{
    const json envelope = run_json("models list");
    REQUIRE(envelope.at("command") == "models list");
    const json& items = envelope.at("result").at("models");
    REQUIRE(items.size() == sca::builtin_model_names().size());
    bool saw_xor = false, saw_q2r = false;
    for (const json& item : items) {
        if (item.at("name") == "xor01") {
            saw_xor = true;
            REQUIRE(item.at("kind") == "map");
        }
        if (item.at("name") == "q2r") {
            saw_q2r = true;
            REQUIRE(item.at("kind") == "torus");
        }
        REQUIRE(item.at("description").is_string());
    }
    REQUIRE(saw_xor);
    REQUIRE(saw_q2r);
}

TEST_CASE("models show prints loadable model text")
{
    const RunResult shown = run_cli("models show xor01");
    REQUIRE(shown.code == 0);
    REQUIRE(shown.out.rfind("[model]", 0) == 0);  // plain text, not JSON
    REQUIRE(sca::models_equal(sca::parse_model(shown.out), sca::builtin_model("xor01")));

    const std::string path = "/tmp/sca_cli_q2r.model";
    const json envelope = run_json("models show q2r --out " + path);
    REQUIRE(envelope.at("result").at("written") == path);
    REQUIRE(envelope.at("result").at("bytes").get<long>() > 0);
    REQUIRE(sca::models_equal(sca::load_model(path), sca::builtin_model("q2r")));
    std::remove(path.c_str());

    REQUIRE(run_cli("models show no-such-model").code == 2);
}

TEST_CASE("analyze reports the expected verdicts for the stock maps")
{
    const json xr = run_json("analyze --model xor01").at("result");
    REQUIRE(xr.at("surjective") == true);
    REQUIRE(xr.at("preinjective") == true);
    REQUIRE(xr.at("injective") == false);
    REQUIRE(xr.at("orphan").is_null());

    const json mj = run_json("analyze --model majority3").at("result");
    REQUIRE(mj.at("surjective") == false);
    REQUIRE(mj.at("preinjective") == false);
    REQUIRE(mj.at("orphan") == "01001");

    const json tx = run_json("analyze --model transpose-xor").at("result");
    REQUIRE(tx.at("injective") == true);

    // Model files resolve exactly like built-in names.
    const json file = run_json("analyze --model " + sample("xor01.model")).at("result");
    REQUIRE(file == xr);

    // Torus models have no 1D analysis.
    REQUIRE(run_cli("analyze --model q2r").code == 2);
}

TEST_CASE("conservation commands agree with the library on the wall model")
{
    const json check = run_json("conserve check --model xor-with-walls --observable " +
                                sample("wall-count.obs"))
                           .at("result");
    REQUIRE(check.at("conserved") == true);
    REQUIRE(check.at("observable_range") == 1);

    const json none = run_json("conserve discover --model xor01 --range 2").at("result");
    REQUIRE(none.at("quotient_dim") == 0);
    REQUIRE(none.at("representatives").empty());

    const json walls = run_json("conserve discover --model xor-with-walls --range 1").at("result");
    REQUIRE(walls.at("quotient_dim") == 1);
    REQUIRE(walls.at("representatives").size() == 1);
    REQUIRE(walls.at("trivial_dim").get<int>() >= 1);

    const std::string flux_path = "/tmp/sca_cli_flux.obs";
    const json flux = run_json("conserve flux --model xor-with-walls --observable " +
                               sample("wall-count.obs") + " --out " + flux_path)
                          .at("result");
    REQUIRE(flux.at("flux_range").get<int>() >= 1);
    REQUIRE(flux.contains("difference_range"));
    const sca::LocalObservable loaded = sca::load_observable(flux_path);
    REQUIRE(loaded.range() == flux.at("flux_range").get<int>());
    std::remove(flux_path.c_str());

    // Asking for the flux of a non-conserved observable is a contract error.
    REQUIRE(run_cli("conserve flux --model xor01 --observable " + sample("ones.obs")).code == 2);
}

TEST_CASE("gibbs pressure matches the closed form for the golden mean shift")
{
    const json envelope = run_json("gibbs pressure --sft " + sample("golden-mean.sft"));
    const double pressure = envelope.at("result").at("pressure").get<double>();
    REQUIRE_THAT(pressure,
                 Catch::Matchers::WithinAbs(std::log((1.0 + std::sqrt(5.0)) / 2.0), 1e-9));

    // A potential that rewards ones raises the pressure.
    const json tilted = run_json("gibbs build --sft " + sample("golden-mean.sft") +
                                 " --observable " + sample("golden-mean-energy.obs"));
    REQUIRE(tilted.at("result").at("pressure").get<double>() > pressure + 0.1);
    for (const json& row : tilted.at("result").at("transitions")) {
        double sum = 0;
        for (const json& q : row) sum += q.get<double>();
        REQUIRE_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("csv dash routes the table to stdout and suppresses the envelope")
{
    const RunResult r = run_cli("gibbs build --sft " + sample("golden-mean.sft") + " --csv -");
    REQUIRE(r.code == 0);
    REQUIRE(r.out.rfind("context,symbol,probability\n", 0) == 0);
    REQUIRE(r.out.find('{') == std::string::npos);
    // Two order-1 contexts, two symbols each, plus the header.
    REQUIRE(count_lines(r.out) == 5);
}

TEST_CASE("csv path writes the table beside a clean JSON envelope")
{
    const std::string path = "/tmp/sca_cli_push.csv";
    const json envelope = run_json("gibbs push --model xor01 --init bernoulli:0.3 --length 4 --csv " + path);
    const json& sums = envelope.at("result").at("level_sums");
    REQUIRE(sums.size() == 4);
    for (const json& s : sums)
        REQUIRE_THAT(s.get<double>(), Catch::Matchers::WithinAbs(1.0, 1e-9));
    const std::string csv = slurp(path);
    REQUIRE(csv.rfind("word,length,probability\n", 0) == 0);
    REQUIRE(count_lines(csv) == 1 + 2 + 4 + 8 + 16);
    std::remove(path.c_str());
}

TEST_CASE("invariance detects the uniform fixed point and the moved Bernoulli")
{
    const json equal =
        run_json("gibbs invariance --model xor01 --init maxent --length 8").at("result");
    REQUIRE(equal.at("equal_up_to_length") == true);
    REQUIRE(equal.at("checked_length") == 8);
    REQUIRE(equal.at("first_mismatch").is_null());

    const json moved =
        run_json("gibbs invariance --model xor01 --init bernoulli:0.3 --length 4").at("result");
    REQUIRE(moved.at("equal_up_to_length") == false);
    REQUIRE(moved.at("first_mismatch") == "0");
    REQUIRE_THAT(moved.at("measure_prob").get<double>(), Catch::Matchers::WithinAbs(0.7, 1e-9));
    // The image of Bernoulli(0.3) under XOR gives zeros 0.7^2 + 0.3^2.
    REQUIRE_THAT(moved.at("image_prob").get<double>(), Catch::Matchers::WithinAbs(0.58, 1e-9));
}

TEST_CASE("entropy command ties the profile to the pressure identity")
{
    const std::string path = "/tmp/sca_cli_entropy.csv";
    const json r = run_json("gibbs entropy --sft " + sample("golden-mean.sft") +
                            " --length 6 --csv " + path)
                       .at("result");
    const double phi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
    // With a zero potential the equilibrium entropy equals the pressure.
    REQUIRE_THAT(r.at("entropy").get<double>(), Catch::Matchers::WithinAbs(phi, 1e-9));
    REQUIRE_THAT(r.at("pressure").get<double>(), Catch::Matchers::WithinAbs(phi, 1e-9));
    REQUIRE_THAT(r.at("expected_value").get<double>(), Catch::Matchers::WithinAbs(0.0, 1e-12));
    // Each profile row pairs H_n with the increment to H_{n+1}, so a table
    // of depth 6 yields rows n = 1 .. 5.
    REQUIRE(r.at("profile").size() == 5);
    const std::string csv = slurp(path);
    REQUIRE(csv.rfind("length,rate,increment\n", 0) == 0);
    REQUIRE(count_lines(csv) == 6);
    std::remove(path.c_str());
}

TEST_CASE("q2r simulation conserves energy and is reproducible bit for bit")
{
    const std::string args =
        "simulate q2r --width 16 --height 8 --steps 64 --seed 5 --init bernoulli:0.2 "
        "--record energy,magnetization,blocks:2 --csv /tmp/sca_cli_q2r.csv";
    const json envelope = run_json(args);
    const json& r = envelope.at("result");
    REQUIRE(r.at("energy_conserved") == true);
    REQUIRE(r.at("initial_energy") == r.at("final_energy"));
    REQUIRE(r.contains("final_block_tv_from_initial"));

    const std::string csv = slurp("/tmp/sca_cli_q2r.csv");
    REQUIRE(csv.rfind("t,energy,magnetization,block_tv_from_initial\n", 0) == 0);
    REQUIRE(count_lines(csv) == 66);  // header + t = 0 .. 64

    const RunResult twin1 = run_cli(args);
    const RunResult twin2 = run_cli(args);
    REQUIRE(twin1.code == 0);
    REQUIRE(twin2.code == 0);
    REQUIRE(strip_wall_time(twin1.out) == strip_wall_time(twin2.out));
    std::remove("/tmp/sca_cli_q2r.csv");
}

TEST_CASE("contour-map converts the sample grid and reports the length identity")
{
    const std::string out_path = "/tmp/sca_cli_contours.txt";
    const json r = run_json("simulate contour-map --in " + sample("spins.txt") + " --out " +
                            out_path)
                       .at("result");
    REQUIRE(r.at("valid") == true);
    REQUIRE(r.at("width") == 4);
    REQUIRE(r.at("height") == 4);
    REQUIRE(r.at("contour_length") == 20);
    REQUIRE(r.at("ising_energy") == 20);
    const std::string grid = slurp(out_path);
    REQUIRE(grid.rfind("lu", 0) == 0);  // hand-checked top-left glyph
    REQUIRE(count_lines(grid) == 4);
    std::remove(out_path.c_str());

    REQUIRE(run_cli("simulate contour-map --in /tmp/sca_cli_missing.txt --out " + out_path).code ==
            1);
}

TEST_CASE("randomize exact surfaces the spike structure of the dyadic times")
{
    const std::string path = "/tmp/sca_cli_exact.csv";
    const json r = run_json("randomize exact --model xor01 --bias 0.25 --cells 1 --tmax 64 "
                            "--eps 0.02 --csv " + path)
                       .at("result");
    // tv(t) = 0.5^{2^popcount(t)} / 2 dips under 0.02 exactly when the time
    // has three or more set bits: 42 of the 65 times 0..64 qualify.
    const double fraction = r.at("density_one_fraction").get<double>();
    REQUIRE_THAT(fraction, Catch::Matchers::WithinAbs(42.0 / 65.0, 1e-12));
    REQUIRE(r.at("spike_ratios").contains("32"));
    REQUIRE(r.at("spike_ratios").at("32").get<double>() > 5.0);
    REQUIRE(r.at("tv_final").is_number());
    const std::string csv = slurp(path);
    REQUIRE(csv.rfind("t,tv,cesaro_tv,density\n", 0) == 0);
    REQUIRE(count_lines(csv) == 66);
    std::remove(path.c_str());

    // Closed forms only exist for XOR-additive rules.
    REQUIRE(run_cli("randomize exact --model majority3 --tmax 4").code == 2);
}

TEST_CASE("randomize sample runs any endomorphism and respects the seed")
{
    const std::string args =
        "randomize sample --model majority3 --init bernoulli:0.2 --time 4 --samples 200 "
        "--seed 9 --cells 2";
    const json r = run_json(args).at("result");
    // Auto width is cells + time * spread + 8 = 18, so 10 cells survive.
    REQUIRE(r.at("observed_cells") == 200 * 10);
    REQUIRE(r.at("density_final").get<double>() < 0.15);
    REQUIRE(r.at("marginal_tv_to_uniform").get<double>() >= 0.0);

    const RunResult twin1 = run_cli(args);
    const RunResult twin2 = run_cli(args);
    REQUIRE(strip_wall_time(twin1.out) == strip_wall_time(twin2.out));
}

TEST_CASE("exit codes separate usage errors from contract errors")
{
    REQUIRE(run_cli("").code == 1);                            // no subcommand
    REQUIRE(run_cli("analyze").code == 1);                     // missing --model
    REQUIRE(run_cli("analyze --model xor01 --bogus 1").code == 1);
    REQUIRE(run_cli("gibbs pressure --sft /tmp/sca_cli_no_such_file.sft").code == 1);
    REQUIRE(run_cli("gibbs push --model xor01 --init bernoulli:1.5").code == 1);
    REQUIRE(run_cli("analyze --model q2r").code == 2);         // library contract
    REQUIRE(run_cli("--help").code == 0);
}
