// Exit-code contracts of the command-line tool, exercised through the real
// binary.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "netmorph/serialize.hpp"

using namespace netmorph;
namespace fs = std::filesystem;

namespace {

#ifndef NETMORPH_CLI_BIN
#define NETMORPH_CLI_BIN "netmorph"
#endif
#ifndef NETMORPH_FIXTURES_DIR
#define NETMORPH_FIXTURES_DIR "fixtures"
#endif

const std::string kBin = NETMORPH_CLI_BIN;
const std::string kFixtures = NETMORPH_FIXTURES_DIR;

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "netmorph_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = kBin + " " + args + " > " + (work_dir() / "out.txt").string() +
                            " 2> " + (work_dir() / "err.txt").string();
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string last_stdout() {
    std::ifstream in(work_dir() / "out.txt");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

}  // namespace

TEST_CASE("transform the fixture with the mu=80 preset") {
    const std::string report = path_of("w-report.json");
    const int code = run("transform --in " + kFixtures + "/net-2621.json --mode wide --mu 80 --B 3 --out " +
                         path_of("w.json") + " --report " + report);
    CHECK(code == 0);
    std::ifstream in(report);
    std::ostringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("\"M\"") != std::string::npos);
    CHECK(ss.str().find("mismatch_budget") != std::string::npos);
    CHECK(last_stdout().find("warning") != std::string::npos);  // 80 is under budget
}

TEST_CASE("transform a pwl document through the exact deep path") {
    const std::string report = path_of("pwl-report.json");
    const int code = run("transform --in " + kFixtures + "/pwl5.json --mode deep --out " +
                         path_of("pwl-deep.json") + " --report " + report);
    CHECK(code == 0);
    std::ifstream in(report);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto pos = text.find("\"max_exact_error\": ");
    REQUIRE(pos != std::string::npos);
    const double err = std::stod(text.substr(pos + 19));
    CHECK(err < 1e-9);
}

TEST_CASE("malformed input exits 2") {
    std::ofstream bad(path_of("bad.json"));
    bad << "{ not json";
    bad.close();
    CHECK(run("transform --in " + path_of("bad.json") + " --mode wide") == 2);
}

TEST_CASE("infeasible delta exits 3") {
    CHECK(run("transform --in " + kFixtures + "/net-2621.json --mode wide --delta 1e-30 --B 3") == 3);
}

TEST_CASE("unsupported dimension exits 4, cover rescues it") {
    NetworkBuilder b(3);
    const int id = b.add_neuron(Activation::Relu, 0.0, {Term{input_source(0), 1.0}});
    b.set_output(0.0, {Term{id, 1.0}});
    save_network(std::move(b).build(), path_of("net3.json"));
    CHECK(run("transform --in " + path_of("net3.json") + " --mode wide") == 4);

    std::ofstream cover(path_of("cover3.json"));
    cover << R"({"D":3,"pieces":[{"vertices":[[0,0,0],[1,0,0],[0,1,0],[0,0,1]],)"
          << R"("a":[1,0,0],"b":0.0}]})";
    cover.close();
    CHECK(run("transform --in " + path_of("net3.json") + " --mode deep --delta 0.5 --cover " +
              path_of("cover3.json") + " --out " + path_of("deep3.json")) == 0);
}

TEST_CASE("verify: identical networks pass, relu(x) vs zero fails") {
    const Network f = testing::relu_scalar(1.0, 0.0);
    save_network(f, path_of("relu.json"));
    save_network(testing::constant_net(1, 0.0), path_of("zero.json"));
    CHECK(run("verify --in " + path_of("relu.json") + " --against " + path_of("relu.json") +
              " --B 1 --delta 0.01") == 0);
    CHECK(run("verify --in " + path_of("relu.json") + " --against " + path_of("zero.json") +
              " --B 1 --delta 0.1") == 1);
}

TEST_CASE("end-to-end: transform both ways, verify within the combined budget") {
    const std::string wide = path_of("e2e-wide.json");
    const std::string deep = path_of("e2e-deep.json");
    CHECK(run("transform --in " + kFixtures + "/net-2621.json --mode wide --delta 0.1 --B 3 "
              "--seed 7 --out " + wide) == 0);
    CHECK(run("transform --in " + kFixtures + "/net-2621.json --mode deep --delta 0.1 --B 3 "
              "--seed 7 --out " + deep) == 0);
    CHECK(run("verify --in " + wide + " --against " + deep +
              " --B 3 --delta 0.2 --samples 200000 --seed 5") == 0);
}

TEST_CASE("extract round trips the pwl form") {
    const Network f = testing::abs_net();
    save_network(f, path_of("abs.json"));
    CHECK(run("extract --in " + path_of("abs.json") + " --B 1 --out " + path_of("abs-pwl.json")) == 0);
    std::ifstream in(path_of("abs-pwl.json"));
    std::ostringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("breakpoints") != std::string::npos);
}

TEST_CASE("analyze: range CSV and the single-row mode") {
    CHECK(run("analyze --nsum-min 4 --nsum-max 10 --out " + path_of("a.csv")) == 0);
    std::ifstream in(path_of("a.csv"));
    std::string header;
    std::getline(in, header);
    CHECK(header == "n_sigma,width,depth");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) rows++;
    CHECK(rows == 7);
    CHECK(run("analyze --nsum 40") == 0);
    CHECK(last_stdout().find("40,40,") != std::string::npos);
    CHECK(run("analyze --nsum-min -3 --nsum-max -1") == 2);
}

TEST_CASE("reports are byte-identical across runs with the same seed") {
    const std::string r1 = path_of("rep1.json"), r2 = path_of("rep2.json");
    const Network f = testing::relu_scalar(2.0, -0.5);
    NetworkBuilder b2(2);
    const int u = b2.add_neuron(Activation::Relu, 0.0, {Term{input_source(0), 1.0}});
    const int v = b2.add_neuron(Activation::Relu, 0.0, {Term{input_source(1), 1.0}});
    b2.set_output(0.0, {Term{u, 1.0}, Term{v, -0.5}});
    const Network g = std::move(b2).build();
    save_network(g, path_of("g2.json"));
    NetworkBuilder b3(2);
    const int w = b3.add_neuron(Activation::Relu, 0.1, {Term{input_source(0), 1.0}});
    b3.set_output(0.0, {Term{w, 1.0}});
    save_network(std::move(b3).build(), path_of("h2.json"));
    (void)f;
    CHECK(run("verify --in " + path_of("g2.json") + " --against " + path_of("h2.json") +
              " --B 1 --samples 50000 --seed 11 --report " + r1) == 1);
    CHECK(run("verify --in " + path_of("g2.json") + " --against " + path_of("h2.json") +
              " --B 1 --samples 50000 --seed 11 --report " + r2) == 1);
    std::ifstream f1(r1), f2(r2);
    std::ostringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(!s1.str().empty());
}

TEST_CASE("classification transform and label verify") {
    const std::string wide = path_of("cls-wide.json");
    const std::string deep = path_of("cls-deep.json");
    CHECK(run("transform --in " + kFixtures + "/net-2621.json --task classification "
              "--mode wide --delta 0.02 --B 3 --seed 9 --out " + wide) == 0);
    CHECK(run("transform --in " + kFixtures + "/net-2621.json --task classification "
              "--mode deep --delta 0.02 --B 3 --seed 9 --out " + deep) == 0);
    CHECK(run("verify --in " + wide + " --against " + deep +
              " --task classification --B 3 --delta 0.05 --samples 200000") == 0);
}
