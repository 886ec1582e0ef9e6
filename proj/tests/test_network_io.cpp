#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "helpers.hpp"
#include "vclab/error.hpp"
#include "vclab/network_io.hpp"
#include "vclab/shatter.hpp"

using nlohmann::json;
using vclab::Rational;
using vclab::ValidationError;

namespace {

json tiny_doc() {
    return json::parse(R"({
      "inputs": 1,
      "nodes": [{"id": "h", "bias": "-1/2", "activation": "relu"},
                {"id": "out", "bias": "0", "activation": "identity"}],
      "edges": [{"from": "x0", "to": "h", "weight": "2"},
                {"from": "h", "to": "out", "weight": "3/4"}],
      "output": "out"
    })");
}

ValidationError::Kind doc_error(const json& doc) {
    try {
        vclab::network_from_json(doc);
    } catch (const ValidationError& e) {
        return e.kind();
    }
    FAIL("document accepted");
    return ValidationError::Kind::malformed;
}

} // namespace

TEST_CASE("network documents parse into exact networks") {
    vclab::Network net = vclab::network_from_json(tiny_doc());
    CHECK(net.input_count() == 1);
    CHECK(net.unit_count() == 2);
    CHECK(vclab::forward_eval(net, std::vector<Rational>{Rational(1)}) == Rational(9, 8));
}

TEST_CASE("save then load reproduces the shattering network") {
    testing::TempDir dir("io");
    vclab::LabelMatrix f = vclab::LabelMatrix::from_index(2, 2, 0b1001);
    vclab::Network net = vclab::build_shatter_network(vclab::ShatterPlan::make(1, 2, 2), f);
    vclab::save_network(net, dir.file("net.json"));
    CHECK(vclab::load_network(dir.file("net.json")) == net);
}

TEST_CASE("pwl activations round-trip") {
    json doc = tiny_doc();
    doc["nodes"][0]["activation"] = json::parse(R"({"pwl": {"breakpoints": ["0", "1"], "pieces": [["0","0"],["1","0"],["0","1"]]}})");
    vclab::Network net = vclab::network_from_json(doc);
    CHECK(vclab::network_from_json(vclab::network_to_json(net)) == net);
    CHECK(net.unit(1).activation.pieces() == 3);
}

TEST_CASE("invalid documents raise distinct validation errors") {
    using Kind = ValidationError::Kind;
    json undeclared = tiny_doc();
    undeclared["edges"][1]["from"] = "ghost";
    CHECK(doc_error(undeclared) == Kind::unknown_id);

    json cyclic = tiny_doc();
    cyclic["nodes"].push_back({{"id", "g"}, {"bias", "0"}, {"activation", "relu"}});
    cyclic["edges"] = json::parse(R"([{"from":"x0","to":"h","weight":"1"},{"from":"h","to":"g","weight":"1"},
                                      {"from":"g","to":"h","weight":"1"},{"from":"g","to":"out","weight":"1"}])");
    CHECK(doc_error(cyclic) == Kind::cycle);

    json sinks = tiny_doc();
    sinks["nodes"].push_back({{"id", "dangling"}, {"bias", "0"}, {"activation", "relu"}});
    sinks["edges"].push_back({{"from", "x0"}, {"to", "dangling"}, {"weight", "1"}});
    CHECK(doc_error(sinks) == Kind::multiple_sinks);

    json activation = tiny_doc();
    activation["nodes"][0]["activation"] = "tanh";
    CHECK(doc_error(activation) == Kind::unknown_activation);

    json extra = tiny_doc();
    extra["comment"] = "hi";
    CHECK(doc_error(extra) == Kind::malformed);

    json bad_number = tiny_doc();
    bad_number["edges"][0]["weight"] = 2;
    CHECK(doc_error(bad_number) == Kind::malformed);

    json output = tiny_doc();
    output["nodes"][1]["activation"] = "relu";
    CHECK(doc_error(output) == Kind::bad_output);
}

TEST_CASE("unreadable or non-JSON files are parse errors") {
    testing::TempDir dir("io");
    CHECK_THROWS_AS(vclab::load_network(dir.file("missing.json")), vclab::ParseError);
    std::ofstream(dir.file("bad.json")) << "{not json";
    CHECK_THROWS_AS(vclab::load_network(dir.file("bad.json")), vclab::ParseError);
}

TEST_CASE("summaries are invariant under node reordering") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        vclab::Network net = testing::random_relu_net(rng);
        json doc = vclab::network_to_json(net);
        std::shuffle(doc["nodes"].begin(), doc["nodes"].end(), rng);
        std::shuffle(doc["edges"].begin(), doc["edges"].end(), rng);
        vclab::Network shuffled = vclab::network_from_json(doc);
        CHECK(vclab::summarize(shuffled) == vclab::summarize(net));
        Rational x = testing::random_rational(rng, 3);
        CHECK(vclab::forward_eval(shuffled, std::vector<Rational>{x}) == vclab::forward_eval(net, std::vector<Rational>{x}));
    }
}

TEST_CASE("architecture files may be summaries") {
    testing::TempDir dir("io");
    std::ofstream(dir.file("s.json")) << R"({"k": [3, 1], "Wi": [6, 4], "p": 2, "d": 1})";
    auto loaded = vclab::load_architecture(dir.file("s.json"));
    REQUIRE(std::holds_alternative<vclab::ArchSummary>(loaded));
    const auto& s = std::get<vclab::ArchSummary>(loaded);
    CHECK(s.W == vclab::Integer(10));
    CHECK(s.U == vclab::Integer(4));
    CHECK(s.Wi_cumulative == std::vector<vclab::Integer>{6, 10});

    vclab::save_network(testing::one_hidden_relu(), dir.file("n.json"));
    CHECK(std::holds_alternative<vclab::Network>(vclab::load_architecture(dir.file("n.json"))));
}

TEST_CASE("label files") {
    vclab::LabelMatrix f = vclab::parse_labels("101\n010\n\n");
    CHECK(f.n() == 2);
    CHECK(f.m() == 3);
    CHECK(f.bit(0, 2) == 1);
    CHECK(f.bit(1, 1) == 1);
    CHECK(vclab::format_labels(f) == "101\n010\n");
    CHECK_THROWS_AS(vclab::parse_labels("10\n1\n"), vclab::ParseError);
    CHECK_THROWS_AS(vclab::parse_labels("12\n"), vclab::ParseError);
    CHECK_THROWS_AS(vclab::parse_labels(""), vclab::ParseError);
}

TEST_CASE("points files") {
    auto pts = vclab::points_from_json(json::parse(R"([["1/2"], ["-3"]])"));
    REQUIRE(pts.size() == 2);
    CHECK(pts[0][0] == Rational(1, 2));
    CHECK_THROWS_AS(vclab::points_from_json(json::parse(R"({"a": 1})")), ValidationError);
}
