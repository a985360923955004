#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string bin() {
    const char* b = std::getenv("MTCAV_BIN");
    REQUIRE(b != nullptr);
    return b;
}

std::string repo_config(const std::string& name) {
    // tests run from the build tree; configs live next to the sources
    const char* src = std::getenv("MTCAV_CONFIG_DIR");
    if (src) return std::string(src) + "/" + name;
    return std::string(CONFIG_DIR) + "/" + name;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("mtcav_cli_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int counter() {
        static int c = 0;
        return c++;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = bin() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("spectrum produces a symmetric resonant doublet") {
    TempDir dir;
    const std::string out = dir.file("spec.csv");
    REQUIRE(run("spectrum --config " + repo_config("spectrum_resonant.cfg") + " --out " + out) == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "omega,value");
    double max_lo = 0, arg_lo = 0, max_hi = 0, arg_hi = 0;
    std::string line;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const double w = std::stod(line.substr(0, comma));
        const double v = std::stod(line.substr(comma + 1));
        if (w < 5.0 && v > max_lo) max_lo = v, arg_lo = w;
        if (w > 5.0 && v > max_hi) max_hi = v, arg_hi = w;
    }
    REQUIRE(arg_lo == Catch::Approx(4.0).margin(0.02));
    REQUIRE(arg_hi == Catch::Approx(6.0).margin(0.02));
    REQUIRE(max_lo == Catch::Approx(max_hi).epsilon(1e-6)); // equal weights straddle omega0
}

TEST_CASE("estimate is bit-exact reproducible and honors --check") {
    TempDir dir;
    const std::string a = dir.file("a.json"), b = dir.file("b.json");
    REQUIRE(run("estimate --out " + a) == 0);
    REQUIRE(run("estimate --out " + b) == 0);
    REQUIRE(slurp(a) == slurp(b));

    auto js = nlohmann::json::parse(slurp(a));
    REQUIRE(js["_flags"]["e_vac_mismatch_flagged"].get<bool>());
    REQUIRE(js["lambda_mt"]["pass"].get<bool>());
    REQUIRE(js["_verdict"]["all_gates_pass"].get<bool>());

    // sabotage one input: exit 4 under --check, report still written
    const std::string c = dir.file("c.json");
    REQUIRE(run("estimate --set \"E_ow=1e2 V/m\" --check --out " + c) == 4);
    auto bad = nlohmann::json::parse(slurp(c));
    REQUIRE_FALSE(bad["lambda_mt"]["pass"].get<bool>());
}

TEST_CASE("estimate config uses unit suffixes and rejects bare numbers") {
    TempDir dir;
    REQUIRE(run("estimate --config " + repo_config("estimate_default.cfg") + " --out " +
                dir.file("e.json")) == 0);
    // missing suffix on an SI quantity
    REQUIRE(run("estimate --set \"T_r=1e-4\" --out " + dir.file("x.json")) == 2);
    // wrong dimension
    REQUIRE(run("estimate --set \"T_r=1e-4 m\" --out " + dir.file("y.json")) == 2);
    // natural-unit scenario must reject unit suffixes
    REQUIRE(run("spectrum --set \"lambda=1 s\" --out " + dir.file("z.csv")) == 2);
}

TEST_CASE("unknown keys are rejected by name") {
    TempDir dir;
    REQUIRE(run("spectrum --set bogus_key=1 --out " + dir.file("s.csv")) == 2);
}

TEST_CASE("sweep feeds report which fits the sqrt(N) law") {
    TempDir dir;
    const std::string sw = dir.file("sw.csv"), rep = dir.file("rep.json");
    REQUIRE(run("sweep --config " + repo_config("sweep_splitting.cfg") + " --out " + sw) == 0);
    REQUIRE(run("report " + sw + " --out " + rep) == 0);
    auto js = nlohmann::json::parse(slurp(rep));
    REQUIRE(js["fits"].size() == 1);
    const double exponent = js["fits"][0]["exponent"].get<double>();
    REQUIRE(exponent == Catch::Approx(0.5).margin(0.01));
    REQUIRE(js["fits"][0]["kind"].get<std::string>() == "splitting_vs_n_emitters");

    // idempotence: a second run is byte-identical
    const std::string rep2 = dir.file("rep2.json");
    REQUIRE(run("report " + sw + " --out " + rep2) == 0);
    REQUIRE(slurp(rep) == slurp(rep2));
}

TEST_CASE("sweep propagates solver failures as exit 3") {
    TempDir dir;
    // grid far away from the doublet: no peaks found
    REQUIRE(run("sweep --config " + repo_config("sweep_splitting.cfg") +
                " --set omega_min=10 --set omega_max=12 --set points=50 --out " +
                dir.file("sw.csv")) == 3);
}

TEST_CASE("report with no inputs is a config error") {
    TempDir dir;
    REQUIRE(run("report --out " + dir.file("rep.json")) == 2);
}

TEST_CASE("cat scaling through the CLI") {
    TempDir dir;
    const std::string out = dir.file("cat.csv"), rep = dir.file("catrep.json");
    REQUIRE(run("cat --config " + repo_config("cat_scaling.cfg") + " --out " + out) == 0);
    REQUIRE(run("report " + out + " --out " + rep) == 0);
    auto js = nlohmann::json::parse(slurp(rep));
    REQUIRE(js["fits"][0]["kind"].get<std::string>() == "rate_vs_D");
    REQUIRE(js["fits"][0]["exponent"].get<double>() == Catch::Approx(2.0).margin(0.1));
}

TEST_CASE("soliton profile export") {
    TempDir dir;
    const std::string out = dir.file("kink.csv");
    REQUIRE(run("soliton --config " + repo_config("soliton_asymmetric.cfg") + " --out " + out) == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "xi,u,uprime");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    REQUIRE(rows > 100);
}

TEST_CASE("deterministic parallel sweep") {
    TempDir dir;
    const std::string a = dir.file("a.csv"), b = dir.file("b.csv");
    const std::string base = "sweep --config " + repo_config("sweep_splitting.cfg") +
                             " --set points=801 ";
    REQUIRE(run(base + "--jobs 1 --out " + a) == 0);
    REQUIRE(run(base + "--jobs 4 --out " + b) == 0);
    REQUIRE(slurp(a) == slurp(b));
}
