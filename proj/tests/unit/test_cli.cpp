#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli.hpp"
#include "rpfree/checker.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

using namespace rpfree;
using nlohmann::json;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args, const std::string& input = "")
{
    std::istringstream in(input);
    std::ostringstream out, err;
    Outcome o;
    o.code = cli::run(args, in, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

}  // namespace

TEST_CASE("bound")
{
    auto o = call({"bound", "--dims", "3"});
    CHECK(o.code == 0);
    CHECK(o.out == "2\n");
    o = call({"bound", "--dims", "5,3", "--json"});
    CHECK(json::parse(o.out)["bound"] == 3);
    CHECK(call({"bound", "--dims", "2,4,6"}).out == "0\n");
    CHECK(call({"bound", "--dims", "3,-1"}).code == cli::kMalformed);
    CHECK(call({"bound", "--dims", "x"}).code == cli::kMalformed);
    CHECK(call({"bound"}).code == cli::kMalformed);
}

TEST_CASE("emit and verify round trip")
{
    for (const char* name : {"jo_product 1 1", "jo_product 2 2", "q8_join 0", "q8_join 2", "z4 3", "d8 2"}) {
        std::vector<std::string> args{"examples", "emit"};
        std::istringstream words(name);
        for (std::string w; words >> w;)
            args.push_back(w);
        const auto emitted = call(args);
        REQUIRE(emitted.code == 0);
        const auto d = parse_descriptor(emitted.out);
        CHECK(d == parse_descriptor(call(args).out));
        const auto v = call({"verify", "-"}, emitted.out);
        const bool expect_pass = std::string(name).rfind("d8", 0) != 0;
        CHECK(v.code == (expect_pass ? cli::kPass : cli::kFail));
        const auto j = json::parse(call({"--json", "verify", "-", "--trace"}, emitted.out).out);
        CHECK(j["status"] == (expect_pass ? "pass" : "fail"));
    }
    const auto e = call({"examples", "emit", "product(z4(1),q8_join(0))"});
    REQUIRE(e.code == 0);
    CHECK(parse_descriptor(e.out) == product(catalog("z4", {1}), catalog("q8_join", {0})));
}

TEST_CASE("negative control through the command line")
{
    auto d = catalog("jo_product", {1, 1});
    d.integral_trivial = true;
    const auto o = call({"verify", "-"}, to_json(d).dump());
    CHECK(o.code == cli::kFail);
    CHECK(o.out.find("violates condition C2'") != std::string::npos);
    const auto j = json::parse(call({"verify", "-", "--json"}, to_json(d).dump()).out);
    REQUIRE(j["necessary"]["failures"].size() == 1);
    CHECK(j["necessary"]["failures"][0]["condition"] == "C2'");
}

TEST_CASE("malformed input names the field")
{
    auto o = call({"verify", "-"}, R"({"r":2,"dims":[5,"x"],"k_invariants":["x1*x2","x1^2"],"integral_trivial":false})");
    CHECK(o.code == cli::kMalformed);
    CHECK(o.err.find("dims[1]") != std::string::npos);
    o = call({"verify", "-"}, R"({"r":2,"dims":[5],"k_invariants":[{"diag":[3]}],"integral_trivial":false})");
    CHECK(o.code == cli::kMalformed);
    CHECK(o.err.find("k_invariants[0]") != std::string::npos);
    o = call({"verify", "-"}, "not json");
    CHECK(o.code == cli::kMalformed);
    CHECK(o.err.find("'$'") != std::string::npos);
    CHECK(call({"verify", "/nonexistent/file.json"}).code == cli::kMalformed);
    CHECK(call({"examples", "emit", "nope", "1"}).code == cli::kMalformed);
    CHECK(call({"examples", "emit", "z4", "-1"}).code == cli::kMalformed);
    CHECK(call({"examples", "emit", "product(z4(1)"}).code == cli::kMalformed);
    CHECK(call({"selftest", "nothing"}).code == cli::kMalformed);
    CHECK(call({"cohomology", "rp-product", "--dims", "2", "--coeff", "q"}).code == cli::kMalformed);
    CHECK(call({"sspage", "--action", "-", "--page", "4"}, to_json(catalog("z4", {1})).dump()).code ==
          cli::kMalformed);
}

TEST_CASE("spectral sequence pages")
{
    const auto z4 = to_json(catalog("z4", {1})).dump();
    auto o = call({"sspage", "--action", "-", "--window", "4", "--page", "3"}, z4);
    CHECK(o.code == 0);
    CHECK(o.out.find("total over valid slots: 4") != std::string::npos);
    CHECK(o.out.find("?") != std::string::npos);
    o = call({"sspage", "--action", "-", "--window", "4", "--page", "3", "--json"}, z4);
    const auto j = json::parse(o.out);
    CHECK(j["total_valid_dim"] == 4);
    bool saw_invalid = false;
    for (const auto& s : j["slots"])
        if (!s["valid"].get<bool>()) {
            saw_invalid = true;
            CHECK(s["dim"].is_null());
        }
    CHECK(saw_invalid);
    o = call({"sspage", "--action", "-", "--page", "2"}, z4);
    CHECK(o.out.find("window p+q <= 9") != std::string::npos);
}

TEST_CASE("cohomology tables")
{
    auto o = call({"cohomology", "rp-product", "--dims", "2,3", "--coeff", "z", "--max-degree", "5"});
    CHECK(o.code == 0);
    CHECK(o.out == "H^0 = Z\nH^1 = 0\nH^2 = (Z/2)^2\nH^3 = Z + Z/2\nH^4 = Z/2\nH^5 = Z/2\n");
    o = call({"cohomology", "rp-product", "--dims", "3", "--coeff", "f2", "--json"});
    const auto j = json::parse(o.out);
    CHECK(j["groups"].size() == 4);
    for (const auto& g : j["groups"])
        CHECK(g["torsion"] == json::array({2}));
}

TEST_CASE("self tests")
{
    for (const char* t : {"lemma33", "propD", "bc-relations", "presentation"}) {
        CAPTURE(t);
        const auto o = call({"selftest", t});
        CHECK(o.code == 0);
        CHECK(o.out.find("FAIL") == std::string::npos);
        const auto j = json::parse(call({"selftest", t, "--json"}).out);
        CHECK(j["pass"] == true);
    }
}

TEST_CASE("output is deterministic")
{
    const auto d = to_json(catalog("jo_product", {2, 1})).dump();
    CHECK(call({"verify", "-", "--trace", "--json"}, d).out == call({"verify", "-", "--trace", "--json"}, d).out);
    CHECK(call({"examples", "list"}).out == call({"examples", "list"}).out);
    CHECK(call({"--help"}).code == 0);
}
