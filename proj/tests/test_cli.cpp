// End-to-end checks of the CLI binary: exit-code contract and output forms.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

const std::string kCli = TORBAR_CLI_PATH;
const std::string kDataDir = TORBAR_TEST_DATA_DIR;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = kCli + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST_CASE("check: exit 0 on a minimally rigid instance") {
    const auto r = run_cli("check " + kDataDir + "/example1.json");
    CHECK(r.exit_code == 0);
    const auto report = nlohmann::json::parse(r.out);
    CHECK(report.at("minimally_rigid") == true);
    CHECK(report.at("agreement") == true);
    CHECK(report.at("combinatorial").at("tight") == true);
    CHECK(report.at("combinatorial").at("sparse") == true);
    CHECK(report.at("linear").at("rank") == 51);
    CHECK(report.at("exit_code") == 0);
}

TEST_CASE("check: exit 1 with a witness on a definitive negative") {
    const auto r = run_cli("check " + kDataDir + "/example1_bad_gains.json");
    CHECK(r.exit_code == 1);
    const auto report = nlohmann::json::parse(r.out);
    CHECK(report.at("combinatorial").at("sparse") == false);
    CHECK(report.at("combinatorial").at("witness").size() == 9);
    CHECK(report.at("linear").at("minimally_rigid") == false);
}

TEST_CASE("check: exit 2 on malformed input") {
    CHECK(run_cli("check " + kDataDir + "/truncated.json").exit_code == 2);
    CHECK(run_cli("check " + kDataDir + "/bad_gain4.json").exit_code == 2);
    CHECK(run_cli("check " + kDataDir + "/does_not_exist.json").exit_code == 2);
}

TEST_CASE("check is deterministic given flags") {
    const std::string args = "check " + kDataDir + "/p3.json --seed 5 --trials 2";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    // timings differ; verdict fields must not
    auto ja = nlohmann::json::parse(a.out);
    auto jb = nlohmann::json::parse(b.out);
    ja.erase("timing");
    jb.erase("timing");
    CHECK(ja == jb);
    CHECK(a.exit_code == 0);
}

TEST_CASE("rank reports rank and dof") {
    const auto r = run_cli("rank " + kDataDir + "/p3_collinear.json --trials 2 --seed 3");
    CHECK(r.exit_code == 0);
    const auto report = nlohmann::json::parse(r.out);
    CHECK(report.at("linear").at("rank") == 14);
    CHECK(report.at("linear").at("dof") == 1);
}

TEST_CASE("rank with --exact agrees") {
    const auto r = run_cli("rank " + kDataDir + "/p3_collinear.json --exact --trials 1");
    CHECK(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.out).at("linear").at("rank") == 14);
}

TEST_CASE("induce emits the expanded bar-joint document") {
    const auto r = run_cli("induce " + kDataDir + "/example1.json");
    CHECK(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("bodies").size() == 18);
    CHECK(doc.at("edges").size() == 51);
}

TEST_CASE("matrix emits one CSV row per induced edge") {
    const auto r = run_cli("matrix " + kDataDir + "/p3.json --positions-seed 7");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("edge_id,v:", 0) == 0);
    const auto lines = std::count(r.out.begin(), r.out.end(), '\n');
    CHECK(lines == 16);  // header + 15 rows
}

TEST_CASE("generate emits a tight document; reduce emits a replayable trace") {
    const auto gen = run_cli("generate --bodies 2 --seed 1");
    CHECK(gen.exit_code == 0);
    const auto doc = nlohmann::json::parse(gen.out);
    CHECK(doc.at("edges").size() == 9);

    const std::string tmp = kDataDir + "/.generated_tmp.json";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << gen.out;
    }
    const auto red = run_cli("reduce " + tmp);
    CHECK(red.exit_code == 0);
    const auto trace = nlohmann::json::parse(red.out);
    CHECK(trace.at("steps").size() == 1);
    CHECK(trace.at("terminal").at("bodies").size() == 1);
    std::remove(tmp.c_str());
}

TEST_CASE("verify runs the harness end to end") {
    const auto r = run_cli("verify --corpus-size 6 --max-bodies 3 --seed 2");
    CHECK(r.exit_code == 0);
    const auto report = nlohmann::json::parse(r.out);
    CHECK(report.at("all_pass") == true);
    CHECK(report.at("exit3_count") == 0);
    CHECK(report.at("properties").size() >= 12);
}
