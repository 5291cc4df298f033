#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path workdir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "bazykin_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Result run(const std::string& args) {
    const fs::path out = workdir() / "stdout.txt";
    const fs::path err = workdir() / "stderr.txt";
    const std::string cmd = std::string(BAZYKIN_AF_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    Result r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path p = workdir() / name;
    std::ofstream(p) << body;
    return p;
}

fs::path set_a() {
    return write_config("set_a.json",
                        R"({"gamma": 1, "alpha": 1, "xi": 0, "omega": 4, "epsilon": 0.5, "delta": 8, "m": 6})");
}

fs::path set_b() {
    return write_config("set_b.json", R"({"gamma": 15, "alpha": 0.1, "xi": 0.45, "omega": 0.01, "epsilon": 0.024,
                                          "delta": 0.45, "m": 0.28})");
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("simulate with cycle detection") {
    const Result r = run("simulate --config " + set_b().string() + " --epsilon 0.024 --t-end 2000 --detect");
    REQUIRE(r.exit_code == 0);
    CHECK(first_line(r.out) == "t,x,y");
    CHECK(r.err.find("cycle: true") != std::string::npos);

    const Result none = run("simulate --config " + set_b().string() + " --epsilon 0.03 --t-end 2000 --detect");
    REQUIRE(none.exit_code == 0);
    CHECK(none.err.find("cycle: false") != std::string::npos);
}

TEST_CASE("bifurcate reports the transcritical and saddle-node values") {
    const Result r = run("bifurcate --config " + set_a().string() + " --kind transcritical");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j.at("xi_star").get<double>() - 2.8) < 1e-12);
    const Result sn = run("bifurcate --config " + set_a().string() + " --kind saddle-node");
    REQUIRE(sn.exit_code == 0);
    CHECK(std::abs(nlohmann::json::parse(sn.out).at("xi_star").get<double>() - 3.0) < 1e-12);
}

TEST_CASE("regions CSV carries the phi columns") {
    const fs::path out = workdir() / "regions.csv";
    const Result r = run("regions --config " + set_a().string() + " --alpha 0..2:20 --xi 0..5:20 -o " + out.string());
    REQUIRE(r.exit_code == 0);
    const std::string csv = slurp(out);
    CHECK(first_line(csv) == "alpha,xi,phi1,phi2,phi3,phi4,base_region,subregion,outcome");
    CHECK(lines(csv) == 401);
}

TEST_CASE("identical runs produce identical bytes") {
    const std::string a = (workdir() / "a.csv").string();
    const std::string b = (workdir() / "b.csv").string();
    for (const std::string& cmd : {"simulate --config " + set_b().string() + " --t-end 50",
                                  "regions --config " + set_a().string() + " --alpha 0..2:12 --xi 0..5:12",
                                  "cusp --config " + set_a().string() + " --xi 0.5 --u 1.5..2:4 --eps 0.3..0.6:4",
                                  "equilibria --config " + set_b().string()}) {
        REQUIRE(run(cmd + " -o " + a).exit_code == 0);
        REQUIRE(run(cmd + " -o " + b).exit_code == 0);
        INFO(cmd);
        CHECK(slurp(a) == slurp(b));
        CHECK(slurp(a).find('\r') == std::string::npos);
    }
}

TEST_CASE("equilibria output and nullclines") {
    const Result r = run("equilibria --config " + set_b().string() + " --epsilon 0.03");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    int interior = 0;
    for (const auto& e : j) interior += e.at("kind") == "interior";
    CHECK(interior == 3);

    const Result n = run("equilibria --config " + set_b().string() + " --nullclines 0..15:31");
    REQUIRE(n.exit_code == 0);
    CHECK(first_line(n.out) == "x,prey_y,predator_y");
    CHECK(lines(n.out) == 32);
}

TEST_CASE("control solve on a reachable target") {
    const fs::path cfg = write_config("control.json", R"({
        "gamma": 8, "alpha": 0.1, "xi": 0.1, "omega": 0.01, "epsilon": 0.01, "delta": 0.96, "m": 0.3,
        "control": {"which": "quantity", "bounds": [0, 2], "start": [5, 2], "target": [4.66873539, 3.55095187]}
    })");
    const fs::path summary = workdir() / "summary.json";
    const Result r = run("control --config " + cfg.string() + " --summary " + summary.string());
    REQUIRE(r.exit_code == 0);
    CHECK(first_line(r.out) == "s,t,x,y,u,p,q,switching_function");
    CHECK(lines(r.out) == 42);
    const auto j = nlohmann::json::parse(slurp(summary));
    CHECK(j.at("endpoint_error").get<double>() < 1e-6);
    CHECK(j.at("pmp_consistency").get<double>() >= 0.95);
}

TEST_CASE("verify subcommand passes on set A") {
    const Result r = run("verify --config " + set_a().string() + " --xi 2");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("passed") == true);
}

TEST_CASE("exit codes and error JSON") {
    CHECK(run("").exit_code == 2);
    CHECK(run("frobnicate").exit_code == 2);
    CHECK(run("simulate --no-such-flag").exit_code == 2);
    CHECK(run("regions --alpha 0..2 --xi 0..1:3").exit_code == 2);

    const Result missing = run("simulate --config /nonexistent/cfg.json");
    CHECK(missing.exit_code == 1);
    const auto err = nlohmann::json::parse(missing.err);
    CHECK(err.at("error") == "io");
    CHECK(err.at("message").get<std::string>().find("/nonexistent/cfg.json") != std::string::npos);

    const fs::path bad = write_config("bad.json", "{\"gamma\": ");
    const Result malformed = run("simulate --config " + bad.string());
    CHECK(malformed.exit_code == 1);
    CHECK(nlohmann::json::parse(malformed.err).at("error") == "invalid_input");

    const Result invalid = run("simulate --gamma 0");
    CHECK(invalid.exit_code == 1);
    CHECK(nlohmann::json::parse(invalid.err).at("error") == "invalid_input");

    const Result no_hopf = run("bifurcate --config " + set_b().string() + " --epsilon 0.02 --kind hopf --eps-range 0.02..0.04");
    CHECK(no_hopf.exit_code == 1);
    CHECK(nlohmann::json::parse(no_hopf.err).at("error") == "no_hopf_found");
}

TEST_CASE("help lists every subcommand and exits cleanly") {
    const Result top = run("--help");
    CHECK(top.exit_code == 0);
    for (const char* sub : {"simulate", "equilibria", "bifurcate", "regions", "cusp", "control", "verify"}) {
        CHECK(top.out.find(sub) != std::string::npos);
        const Result h = run(std::string(sub) + " --help");
        CHECK(h.exit_code == 0);
        CHECK(h.out.find("--config") != std::string::npos);
        CHECK(h.out.find("--output") != std::string::npos);
    }
}
