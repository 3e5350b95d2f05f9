// End-to-end checks of the command-line surface: JSON output re-parses to
// the in-memory results, exit codes follow the documented contract, and
// the on-disk catalog cache reloads to the same payload.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "delpezzo/enumerate.hpp"
#include "delpezzo/json_io.hpp"

using namespace delpezzo;
using nlohmann::json;

#ifndef DELPEZZO_CLI_PATH
#error "DELPEZZO_CLI_PATH must be defined"
#endif
#ifndef DELPEZZO_TEST_DATA
#error "DELPEZZO_TEST_DATA must be defined"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    std::string cmd = env_prefix + std::string(DELPEZZO_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
    int status = pclose(pipe);
    int code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

std::vector<json> parse_lines(const std::string& out) {
    std::vector<json> lines;
    std::size_t pos = 0;
    while (pos < out.size()) {
        std::size_t end = out.find('\n', pos);
        if (end == std::string::npos) end = out.size();
        std::string line = out.substr(pos, end - pos);
        if (!line.empty()) lines.push_back(json::parse(line));
        pos = end + 1;
    }
    return lines;
}

}  // namespace

TEST_CASE("cli enumerate: counts and per-line payload") {
    RunResult res = run("enumerate --delta 8 --conics");
    CHECK(res.exit_code == 0);
    auto lines = parse_lines(res.output);
    REQUIRE(lines.size() == 2161);
    CHECK(lines.back()["count"] == 2160);
    auto d8 = LatticeContext::blowup_plane(8);
    const ClassCatalog& cat = conic_classes(d8);
    for (std::size_t i = 0; i < 5; ++i) {
        DivisorClass c = class_from_json(lines[i]["class"]);
        CHECK(c == cat.classes[i]);
        CHECK(lines[i]["sq"].get<Coeff>() == 0);
        CHECK(lines[i]["kdeg"].get<Coeff>() == 2);
    }

    res = run("enumerate --delta 8 --exceptional");
    lines = parse_lines(res.output);
    CHECK(lines.back()["count"] == 240);

    res = run("enumerate --delta 0 --exceptional");
    lines = parse_lines(res.output);
    CHECK(lines.back()["count"] == 0);
}

TEST_CASE("cli enumerate: --out writes the same lines to a file") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "delpezzo_enum_out.jsonl";
    fs::remove(path);
    RunResult res = run("enumerate --delta 4 --conics --out " + path.string());
    CHECK(res.exit_code == 0);
    CHECK(res.output.empty());
    std::ifstream in(path);
    REQUIRE(bool(in));
    std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto lines = parse_lines(contents);
    REQUIRE(lines.size() == 6);
    CHECK(lines.back()["count"] == 5);
    fs::remove(path);
}

TEST_CASE("cli enumerate: usage errors exit 2") {
    CHECK(run("enumerate --delta 8").exit_code == 2);
    CHECK(run("enumerate --delta 11 --conics").exit_code == 2);
    CHECK(run("bogus-subcommand").exit_code == 2);
    CHECK(run("enumerate --delta 8 --deg 1 --sq 2").exit_code == 2);  // unbounded query
}

TEST_CASE("cli orbit: single class, pair cell, stabilizer") {
    RunResult res = run("orbit --delta 2 --class 1,1,0");
    CHECK(res.exit_code == 0);
    json rep = json::parse(res.output);
    CHECK(rep["size"] == 2);

    res = run("orbit --delta 8 --class 1,1,0,0,0,0,0,0,0 --pair 4,0,2,2,2,1,1,1,1");
    CHECK(res.exit_code == 0);
    rep = json::parse(res.output);
    REQUIRE(rep.contains("pair_cell"));
    CHECK(rep["pair_cell"]["product"] == 4);
    CHECK(rep["pair_cell"]["ample"] == true);

    res = run("orbit --delta 8 --fix e8");
    CHECK(res.exit_code == 0);
    rep = json::parse(res.output);
    CHECK(rep["cell_count"] == 5);

    // Cap exceeded: partial orbit, exit 3.
    res = run("orbit --delta 8 --class 1,1,0,0,0,0,0,0,0 --cap 50");
    CHECK(res.exit_code == 3);
    rep = json::parse(res.output);
    CHECK(rep["complete"] == false);
}

TEST_CASE("cli nef: membership and witness exit code") {
    RunResult res = run("nef --delta 7 --class -K");
    CHECK(res.exit_code == 0);
    json rep = json::parse(res.output);
    CHECK(rep["nef"] == true);
    CHECK(rep["ample"] == true);

    res = run("nef --delta 8 --class 0,0,0,0,0,0,0,0,-2");  // 2 e_8
    CHECK(res.exit_code == 4);
    rep = json::parse(res.output);
    CHECK(rep["nef"] == false);
    auto d8 = LatticeContext::blowup_plane(8);
    DivisorClass witness = class_from_json(rep["witness"]);
    CHECK(intersect(d8, DivisorClass({0, 0, 0, 0, 0, 0, 0, 0, -2}), witness) < 0);

    res = run("nef --quadric --class 1,1");
    CHECK(res.exit_code == 0);
    CHECK(json::parse(res.output)["ample"] == true);
}

TEST_CASE("cli decompose: report with verification block") {
    RunResult res = run("decompose --delta 8 --class -K");
    CHECK(res.exit_code == 0);
    json rep = json::parse(res.output);
    CHECK(rep["n"] == json::array({1, 0, 0, 0, 0, 0, 0}));
    CHECK(rep["verification"]["reconstruction"] == true);
    CHECK(rep["residual"]["class"] == json::array({0, 0}));

    res = run("decompose --delta 8 --class 0,-1,0,0,0,0,0,0,0");
    CHECK(res.exit_code == 4);
}

TEST_CASE("cli graph-chi on the fixture files") {
    std::string data = DELPEZZO_TEST_DATA;
    RunResult res = run("graph-chi --delta 8 --graph " + data + "/triple_point.json");
    CHECK(res.exit_code == 0);
    json rep = json::parse(res.output);
    CHECK(rep["tangent_chi"] == 5);
    CHECK(rep["h0"] == 6);
    CHECK(rep["h1"] == 1);
    CHECK(rep["conormal_chi"] == -2);

    res = run("graph-chi --delta 8 --graph " + data + "/chain_with_center.json --seed 42");
    CHECK(res.exit_code == 0);
    rep = json::parse(res.output);
    CHECK(rep["tangent_chi"] == 6);
    CHECK(rep["h0"] == 7);
    CHECK(rep["h1"] == 1);
    CHECK(rep["cotangent_degrees"][0] == json::array({-3, 0}));
    CHECK(rep["cotangent_degrees"][1] == json::array({-2, 1}));
    CHECK(rep["cotangent_degrees"][2] == json::array({1, 1}));

    // Same seed, same bytes.
    RunResult again = run("graph-chi --delta 8 --graph " + data + "/chain_with_center.json --seed 42");
    CHECK(again.output == res.output);
}

TEST_CASE("cli cache: reload equals recompute and corruption is advisory") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "delpezzo_cache_test";
    fs::remove_all(dir);
    std::string env = "DELPEZZO_CACHE_DIR=" + dir.string() + " ";

    RunResult first = run("enumerate --delta 6 --conics", env);
    CHECK(first.exit_code == 0);
    bool cached = false;
    for (const auto& entry : fs::directory_iterator(dir)) cached |= entry.path().extension() == ".json";
    CHECK(cached);

    RunResult second = run("enumerate --delta 6 --conics", env);
    CHECK(second.exit_code == 0);
    CHECK(first.output == second.output);

    // A corrupted cache file is ignored and rebuilt.
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::ofstream f(entry.path());
        f << "{ not json";
    }
    RunResult third = run("enumerate --delta 6 --conics", env);
    CHECK(third.exit_code == 0);
    CHECK(third.output == first.output);
    fs::remove_all(dir);
}
