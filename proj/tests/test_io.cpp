#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "torbar/torbar.hpp"

using namespace torbar;

namespace {

const std::string kDataDir = TORBAR_TEST_DATA_DIR;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("fixture graphs parse to the expected shapes") {
    const auto g = load_graph_file(kDataDir + "/example1.json");
    CHECK(g.body_count() == 2);
    CHECK(g.edge_count() == 9);
    CHECK(gain_space_rank(g) == 2);

    const auto p3 = load_graph_file(kDataDir + "/p3.json");
    CHECK(p3.body_count() == 1);
    CHECK(p3.edge_count() == 3);
    CHECK(p3.loop_count(0) == 3);
}

TEST_CASE("serialization round trips byte-identically on canonical fixtures") {
    for (const char* name : {"example1.json", "example1_bad_gains.json", "p3.json",
                             "p3_collinear.json"}) {
        const std::string path = kDataDir + "/" + name;
        const std::string bytes = slurp(path);
        const auto g = parse_graph(parse_json_text(bytes, path));
        CHECK(serialize_graph(g).dump(2) + "\n" == bytes);
    }
}

TEST_CASE("parse is the left inverse of serialize") {
    SplitMix64 rng(55);
    for (int i = 0; i < 25; ++i) {
        const auto g = random_mixed_graph(rng, 5, 14);
        const auto g2 = parse_graph(serialize_graph(g));
        CHECK(g2.same_labeled_graph(g));
    }
}

TEST_CASE("malformed documents are rejected with a field diagnostic") {
    SECTION("four-component gain") {
        try {
            load_graph_file(kDataDir + "/bad_gain4.json");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("gain") != std::string::npos);
        }
    }
    SECTION("unknown top-level field") {
        try {
            load_graph_file(kDataDir + "/bad_unknown_field.json");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("color") != std::string::npos);
        }
    }
    SECTION("truncated file carries a line number") {
        try {
            load_graph_file(kDataDir + "/truncated.json");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("truncated.json:") != std::string::npos);
        }
    }
    SECTION("semantic rejects") {
        CHECK_THROWS_AS(parse_graph(json::parse(R"({"dim":2,"bodies":["A"],"edges":[]})")),
                        ParseError);
        CHECK_THROWS_AS(parse_graph(json::parse(R"({"dim":3,"bodies":[],"edges":[]})")), ParseError);
        CHECK_THROWS_AS(
            parse_graph(json::parse(
                R"({"dim":3,"bodies":["A"],"edges":[{"u":"A","v":"Z","gain":[0,0,0]}]})")),
            ParseError);
        CHECK_THROWS_AS(
            parse_graph(json::parse(
                R"({"dim":3,"bodies":["A"],"edges":[{"u":"A","v":"A","gain":[0,0,0.5]}]})")),
            ParseError);
        CHECK_THROWS_AS(
            parse_graph(json::parse(
                R"({"dim":3,"bodies":["A"],"edges":[{"u":"A","v":"A","gain":[0,0,0],"id":1},
                    {"u":"A","v":"A","gain":[1,0,0],"id":1}]})")),
            ParseError);
    }
}

TEST_CASE("ids are auto-assigned deterministically when absent") {
    const auto g = parse_graph(json::parse(R"({
        "dim": 3,
        "bodies": ["A", "B"],
        "edges": [
            {"u": "A", "v": "B", "gain": [0,0,0]},
            {"u": "A", "v": "B", "gain": [1,0,0], "id": 7},
            {"u": "A", "v": "B", "gain": [0,1,0]}
        ]})"));
    std::vector<EdgeId> ids;
    for (const auto& e : g.edges()) ids.push_back(e.id);
    CHECK(ids == std::vector<EdgeId>{7, 8, 9});
    CHECK(g.edge(8).gain == GainVector{0, 0, 0});
    CHECK(g.edge(9).gain == GainVector{0, 1, 0});
}

TEST_CASE("trace serialization round trips and replays") {
    const auto g = random_tight_graph(3, 99);
    const auto trace = reduce_to_seed(g);
    const json j = trace_to_json(trace);
    const auto trace2 = trace_from_json(j);
    CHECK(trace2.steps.size() == trace.steps.size());
    CHECK(replay_trace(trace2).same_labeled_graph(g));
    CHECK(trace_to_json(trace2) == j);

    json bad = j;
    bad["format"] = "other";
    CHECK_THROWS_AS(trace_from_json(bad), ParseError);
}

TEST_CASE("matrix CSV layout") {
    BodyBarOrbitGraph g;
    g.add_body("A");
    const auto f = induce_bar_joint(g);
    const PrimeField F(kMersenne61);
    const auto pos = sample_positions(f.graph, F, 1);
    const auto m = assemble_matrix(f.graph, pos, F);
    const std::string csv = matrix_csv(m, f.graph);
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "edge_id,v:A:0:x,v:A:0:y,v:A:0:z,v:A:1:x,v:A:1:y,v:A:1:z,v:A:2:x,v:A:2:y,v:A:2:z");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("digest is stable") {
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") != fnv1a64_hex("b"));
}
