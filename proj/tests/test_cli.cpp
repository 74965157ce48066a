#include <doctest.h>

#include <cstdlib>

#include <json.hpp>

#include "cli_fixture.hpp"
#include "mapca/manifest.hpp"

using fixture::run;
using json = nlohmann::json;

TEST_CASE("spectrum examples") {
    fixture::Workspace ws("mapca_cli_spectrum");
    auto r = run({"spectrum", ws.path("diag41.csv"), "--metric", "identity", "-k", "1", "-o", ws.path("s.json")});
    REQUIRE(r.code == 0);
    json j = json::parse(ws.read("s.json"));
    CHECK(j["eigenvalues"] == json::array({4.0}));
    CHECK(j["loadings"]["rows"] == 2);
    CHECK(j["constraint_residual"].get<double>() < 1e-12);
    CHECK(j["manifest"]["command"] == "spectrum");
    CHECK(j["manifest"]["input_digest"] == mapca::sha256_hex(ws.read("diag41.csv")));

    r = run({"spectrum", ws.path("data4.csv"), "--metric", "beta=1"});
    REQUIRE(r.code == 0);
    for (double l : json::parse(r.out)["eigenvalues"]) CHECK(std::abs(l - 1.0) < 1e-9);

    r = run({"spectrum", ws.path("data4.csv"), "--metric", "file=" + ws.path("metric_ok.csv"), "-k", "2"});
    CHECK(r.code == 0);
    r = run({"spectrum", ws.path("data4.csv"), "--metric", "beta=2", "--allow-any-beta"});
    CHECK(r.code == 0);
}

TEST_CASE("beta sweep examples") {
    fixture::Workspace ws("mapca_cli_sweep");
    REQUIRE(run({"beta-sweep", ws.path("diag41.csv"), "--grid", "3", "-o", ws.path("b.csv")}).code == 0);
    const std::string csv = ws.read("b.csv");
    CHECK(csv.rfind("beta,kappa,lambda_1,lambda_2\n0,4,4,1\n0.5,2,", 0) == 0);
    CHECK(csv.substr(csv.size() - 9) == "\n1,1,1,1\n");
    const mapca::Matrix t = mapca::io::read_csv_text(ws.read("b.csv"));
    CHECK(std::abs(t(1, 2) - 2.0) < 1e-12);
    const json m = json::parse(ws.read("b.csv.manifest.json"));
    CHECK(m["artifact_digest"] == mapca::sha256_hex(ws.read("b.csv")));

    // closed-form kappa against the ratio of the solved extremes
    const auto sweep = run({"beta-sweep", ws.path("data4.csv"), "--grid", "11"});
    REQUIRE(sweep.code == 0);
    const mapca::Matrix k = mapca::io::read_csv_text(sweep.out);
    CHECK(k.rows() == 11);
    CHECK(k.cols() == 6);
    for (std::size_t i = 0; i < k.rows(); ++i) {
        const double ratio = k(i, 2) / k(i, 5);
        CHECK(std::abs(k(i, 1) - ratio) <= 1e-9 * std::max(1.0, ratio));
        if (i > 0) CHECK(k(i, 1) <= k(i - 1, 1));
    }
    CHECK(std::abs(k(10, 1) - 1.0) <= 1e-9);

    const auto white = run({"beta-sweep", ws.path("white.csv"), "--grid", "5"});
    REQUIRE(white.code == 0);
    const mapca::Matrix w = mapca::io::read_csv_text(white.out);
    for (std::size_t i = 0; i < w.rows(); ++i) CHECK(std::abs(w(i, 1) - 1.0) < 1e-9);
}

TEST_CASE("equicheck expected outcomes") {
    fixture::Workspace ws("mapca_cli_equicheck");
    auto check = [&](const std::string& rule, const char* observed) {
        const auto r = run({"equicheck", ws.path("data4.csv"), "--rule", rule, "--trials", "10", "--seed", "5"});
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j["observed"] == observed);
        CHECK(j["outcome_matches"] == true);
        CHECK(j["trials"].size() == 10);
        return j;
    };
    const json diag = check("diag", "pass");
    CHECK(diag["counterexample"].is_null());
    for (const auto& t : diag["trials"]) CHECK(t["pass"] == true);
    const json half = check("beta=0.5", "fail");
    CHECK(half["counterexample"]["spectrum_deviation"].get<double>() > 1e-6);
    check("identity", "fail");
    check("beta=1", "pass");
    CHECK(run({"equicheck", ws.path("data4.csv"), "--rule", "diag", "--signed", "--trials", "10"}).code == 0);
}

TEST_CASE("uniqueness examples") {
    for (const char* p : {"2", "3", "4"}) {
        const auto r = run({"uniqueness", "--p", p, "--seed", "1"});
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j["unique"] == true);
        CHECK(j["results"][0]["solution_space_dim"] == std::stoi(p));
        CHECK(j["results"][1]["solution_space_dim"] == 0);
        CHECK(j["results"][1]["max_deviation_from_diag"].get<double>() < 1e-8);
    }
}

TEST_CASE("graph-embed examples") {
    fixture::Workspace ws("mapca_cli_graph");
    auto r = run({"graph-embed", ws.path("p3.txt"), "-k", "3", "--variant", "unnormalized", "--embedding",
                  ws.path("e.csv"), "-o", ws.path("s.json")});
    REQUIRE(r.code == 0);
    json j = json::parse(ws.read("s.json"));
    const std::vector<double> want{0.0, 1.0, 3.0};
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(j["eigenvalues"][i].get<double>() - want[i]) < 1e-9);
    CHECK(j["manifest"]["consistency"]["pass"] == true);
    CHECK(j["manifest"]["embedding_digest"] == mapca::sha256_hex(ws.read("e.csv")));
    CHECK(ws.read("e.csv").rfind("vertex,coord_1,coord_2,coord_3\n", 0) == 0);

    r = run({"graph-embed", ws.path("k3.txt"), "-k", "3", "--variant", "generalized", "--beta", "0.5"});
    REQUIRE(r.code == 0);
    j = json::parse(r.out);
    const std::vector<double> k3{0.0, 1.5, 1.5};
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(j["eigenvalues"][i].get<double>() - k3[i]) < 1e-9);
    CHECK(j["beta_laplacian_spectrum"].size() == 3);

    r = run({"graph-embed", ws.path("two.txt"), "-k", "3"});
    REQUIRE(r.code == 0);
    j = json::parse(r.out);
    CHECK(j["component_count"] == 2);
    CHECK(std::abs(j["eigenvalues"][1].get<double>()) < 1e-9);
    CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("deep examples") {
    fixture::Workspace ws("mapca_cli_deep");
    auto r = run({"deep", "--config", ws.path("deep_none.cfg"), "--data", ws.path("data4.csv"), "--check", "none",
                  "-o", ws.path("d.json")});
    REQUIRE(r.code == 0);
    json j = json::parse(ws.read("d.json"));
    CHECK(j["constraint_residual"].get<double>() < 1e-8);
    CHECK(j["stack"]["layers"].size() == 2);

    r = run({"deep", "--config", ws.path("deep_inv.cfg"), "--data", ws.path("data4.csv"), "--check", "invariance",
             "--scaling-seed", "3"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["check"]["observed"] == "pass");

    r = run({"deep", "--config", ws.path("deep_cx.cfg"), "--data", ws.path("data4.csv"), "--check", "counterexample",
             "--scaling-seed", "3"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["check"]["observed"] == "fail");
}

TEST_CASE("exit-code matrix") {
    fixture::Workspace ws("mapca_cli_exit");
    struct Case {
        std::vector<std::string> args;
        int code;
    };
    const std::string d4 = ws.path("data4.csv");
    const std::vector<Case> cases{
        {{}, 2},
        {{"frobnicate"}, 2},
        {{"spectrum"}, 2},
        {{"spectrum", ws.path("missing.csv")}, 2},
        {{"spectrum", ws.path("ragged.csv")}, 2},
        {{"spectrum", ws.path("text.csv")}, 2},
        {{"spectrum", ws.path("one_row.csv")}, 2},
        {{"spectrum", d4, "-k", "abc"}, 2},
        {{"spectrum", d4, "--metric", "cosine"}, 2},
        {{"spectrum", d4, "--metric", "beta=1.5"}, 2},
        {{"spectrum", d4, "--metric", "file=" + ws.path("metric_indef.csv")}, 3},
        {{"spectrum", d4, "--metric", "file=" + ws.path("metric_asym.csv")}, 3},
        {{"spectrum", ws.path("singular.csv"), "--metric", "beta=0.5"}, 3},
        {{"spectrum", d4, "-k", "5"}, 4},
        {{"spectrum", d4, "--metric", "file=" + ws.path("metric_2x2.csv")}, 4},
        {{"beta-sweep", ws.path("singular.csv")}, 3},
        {{"beta-sweep", d4, "--grid", "1"}, 2},
        {{"equicheck", ws.path("ragged.csv")}, 2},
        {{"equicheck", ws.path("singular.csv"), "--rule", "beta=0.5"}, 3},
        {{"equicheck", d4, "--rule", "beta=-1"}, 2},
        {{"equicheck", d4, "--seed", "-4"}, 2},
        {{"uniqueness", "--p", "9"}, 2},
        {{"uniqueness", "--p", "3", "--n-sigma", "1", "--n-scaling", "1"}, 5},
        {{"graph-embed", ws.path("bad_edges.txt")}, 2},
        {{"graph-embed", ws.path("isolated.txt")}, 6},
        {{"graph-embed", ws.path("p3.txt"), "-k", "4"}, 4},
        {{"graph-embed", ws.path("p3.txt"), "--variant", "random_walk"}, 2},
        {{"graph-embed", ws.path("p3.txt"), "--beta", "3"}, 2},
        {{"deep", "--config", ws.path("deep_bad.cfg"), "--data", d4}, 2},
        {{"deep", "--config", ws.path("deep_wide.cfg"), "--data", d4}, 4},
        {{"deep", "--config", ws.path("deep_inv.cfg"), "--data", ws.path("singular.csv")}, 4},
        {{"deep", "--config", ws.path("deep_inv.cfg"), "--data", d4, "--check", "maybe"}, 2},
        {{"deep", "--config", ws.path("deep_none.cfg"), "--data", d4, "--check", "invariance"}, 2},
        {{"deep", "--config", ws.path("deep_inv.cfg"), "--data", d4, "--max-residual", "0"}, 7},
    };
    for (const Case& c : cases) {
        std::string joined;
        for (const auto& a : c.args) joined += a + " ";
        CAPTURE(joined);
        const auto r = run(c.args);
        CHECK(r.code == c.code);
        if (r.code != 0) CHECK(r.out.empty());
    }
}

TEST_CASE("nothing is written on failure") {
    fixture::Workspace ws("mapca_cli_partial");
    CHECK(run({"spectrum", ws.path("data4.csv"), "-k", "9", "-o", ws.path("x.json")}).code == 4);
    CHECK_FALSE(ws.exists("x.json"));
    CHECK(run({"deep", "--config", ws.path("deep_inv.cfg"), "--data", ws.path("data4.csv"), "--max-residual", "0",
               "-o", ws.path("d.json")})
              .code == 7);
    CHECK_FALSE(ws.exists("d.json"));
    CHECK(run({"graph-embed", ws.path("isolated.txt"), "--embedding", ws.path("e.csv"), "-o", ws.path("s.json")}).code ==
          6);
    CHECK_FALSE(ws.exists("e.csv"));
    CHECK_FALSE(ws.exists("s.json"));
}

TEST_CASE("seed precedence: --seed over MAPCA_SEED over zero") {
    fixture::Workspace ws("mapca_cli_seed");
    const std::string cmd = std::string(MAPCA_CLI_PATH) + " equicheck " + ws.path("data4.csv") + " --trials 3";
    auto seed_of = [&](const std::string& prefix, const std::string& suffix, const std::string& file) {
        const int rc = std::system((prefix + cmd + suffix + " -o " + ws.path(file)).c_str());
        REQUIRE(rc == 0);
        return json::parse(ws.read(file))["manifest"]["seed"].get<std::uint64_t>();
    };
    CHECK(seed_of("env -u MAPCA_SEED ", "", "a.json") == 0);
    CHECK(seed_of("MAPCA_SEED=17 ", "", "b.json") == 17);
    CHECK(seed_of("MAPCA_SEED=17 ", " --seed 4", "c.json") == 4);
    CHECK(std::system(("MAPCA_SEED=oops " + cmd + " >/dev/null 2>&1").c_str()) != 0);
}

TEST_CASE("deep seed comes from the config when neither flag nor environment sets it") {
    fixture::Workspace ws("mapca_cli_deep_seed");
    ws.write("seeded.cfg", "dims = 4,3\nrule = diag\nseed = 12\n");
    const std::string cmd = std::string(MAPCA_CLI_PATH) + " deep --config " + ws.path("seeded.cfg") + " --data " +
                            ws.path("data4.csv");
    auto seed_of = [&](const std::string& prefix, const std::string& suffix, const std::string& file) {
        REQUIRE(std::system((prefix + cmd + suffix + " -o " + ws.path(file)).c_str()) == 0);
        return json::parse(ws.read(file))["manifest"]["seed"].get<std::uint64_t>();
    };
    CHECK(seed_of("env -u MAPCA_SEED ", "", "a.json") == 12);
    CHECK(seed_of("MAPCA_SEED=5 ", "", "b.json") == 5);
    CHECK(seed_of("MAPCA_SEED=5 ", " --seed 8", "c.json") == 8);
}

TEST_CASE("help and version exit cleanly") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"--version"}).code == 0);
}
