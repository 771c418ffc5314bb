#pragma once

// Admissibility checks for candidate k-invariants: mu and the rank bound, the necessary
// conditions, the subgroup trace behind r <= b + 2c, small cases of the quadratic-form
// inequality, and a catalog of known actions.

#include "rpfree/action.hpp"
#include "rpfree/quadforms.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rpfree {

/// 0 for n even, 1 for n = 1 mod 4, 2 for n = 3 mod 4. Throws for n < 0.
int mu(int n);
/// Sum of mu(n_i). Throws for a negative entry.
int bound(const std::vector<int>& dims);

struct StripResult {
    std::vector<int> dims;          // entries >= 2, in order
    std::vector<int> kept;          // their original positions
    int l = 0;                      // number of entries equal to 1
    std::vector<int> ones;          // positions of the ones
    std::vector<int> zeros;         // positions of entries equal to 0 (points)
};

StripResult strip_dim_one(const std::vector<int>& dims);

enum class Status { pass, fail, inconclusive };
std::string to_string(Status s);

/// One evaluated condition on one factor (or on the whole family for C4).
struct ConditionCheck {
    std::string id;             // "C1", "C2", "C2'", "C3", "C4"
    std::optional<int> factor;  // 0-based position in the original dims
    bool ok = true;
    std::string detail;
    nlohmann::json witness;     // factorization, square root, ideal coefficients or a point
};

struct StripSummary {
    std::vector<int> dims;
    int l = 0;
    std::vector<int> zeros;
};

struct Verdict {
    Status status = Status::pass;
    std::vector<ConditionCheck> checks;    // every evaluated condition, in order
    std::vector<ConditionCheck> failures;  // the failing subset, in order
    StripSummary strip;
    std::string label;

    nlohmann::json to_json() const;
};

/// Evaluates C1 (n even => alpha = 0), C2 (n >= 2, n = 1 mod 4 => alpha factors), C2'
/// (additionally a square when integral_trivial), C3 (n = 1 mod 4 => Sq^1 alpha in the
/// ideal) and C4 (no common zero), reporting every failure.
Verdict necessary_conditions(const ActionDescriptor& desc);

struct CutChoice {
    int factor = 0;                 // original position
    std::string block;              // "b" or "l" (dimension one)
    std::optional<LinearForm> cut;  // nullopt when alpha = 0 needs no cut
};

struct TraceCertificate {
    int r = 0;
    int a = 0, b = 0, c = 0, l = 0;
    int bound = 0;
    std::vector<CutChoice> choices;
    Subspace h;
    int s = 0;
    std::vector<QuadraticForm> restricted_c;       // c-block forms pulled back to H
    std::optional<std::uint32_t> c_common_zero;    // ambient coordinates
    std::uint64_t combinations = 0;
    std::uint64_t passing = 0;
    std::string chain;
};

struct TraceResult {
    Status status = Status::pass;
    std::string detail;
    std::optional<TraceCertificate> certificate;

    nlohmann::json to_json() const;
};

/// Tries every combination of linear cuts for the b-block (and dimension-one factors),
/// keeps the first with the largest H on which the c-block has no common zero, and checks
/// r <= (r - s) + s <= b + l + 2c. Throws std::logic_error when `necessary` did not pass.
TraceResult rank_bound_trace(const ActionDescriptor& desc, const Verdict& necessary);

struct FullVerdict {
    Verdict necessary;
    std::optional<TraceResult> trace;
    Status status = Status::pass;
    std::string label;

    nlohmann::json to_json() const;
};

/// necessary_conditions followed by rank_bound_trace when it passes.
FullVerdict verify(const ActionDescriptor& desc);

std::string render_text(const FullVerdict& v, bool with_trace);

struct PropDReport {
    int s = 0;
    int c = 0;
    bool exhaustive = false;
    std::uint64_t tested = 0;
    std::uint64_t counterexamples = 0;
    std::vector<QuadraticForm> first_counterexample;
    std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kPropDSeed = 0x9e3779b97f4a7c15ULL;

/// Every c-tuple of quadratic forms on F2^s (s > 2c) should have a common nonzero zero.
/// Exhaustive when the tuple space has at most 2^24 elements, otherwise `samples` draws
/// from mt19937_64 seeded with `seed`. Throws std::invalid_argument outside s > 2c,
/// c >= 1, s <= 10.
PropDReport propD_smalltest(int s, int c, std::uint64_t samples, std::uint64_t seed = kPropDSeed);

/// q8_join(m), z4(m), d8(m) with one parameter, jo_product(m, l) with two.
ActionDescriptor catalog(const std::string& name, const std::vector<int>& params);
/// Block sum in disjoint variables; integral_trivial when both are.
ActionDescriptor product(const ActionDescriptor& a, const ActionDescriptor& b);
/// Pulls back along a surjection F2^{r'} -> F2^r given as an r x r' matrix: x_j maps to
/// sum_i m[j][i] y_i. Throws std::invalid_argument unless the matrix has rank r.
ActionDescriptor inflate(const ActionDescriptor& d, const std::vector<std::vector<int>>& matrix);

/// Parses "jo_product(1,1)", "product(z4(1),q8_join(0))" or "inflate(z4(1),[[1,1]])".
ActionDescriptor catalog_expression(const std::string& text);

struct CatalogEntry {
    std::string name;
    std::string signature;
    std::string description;
};
std::vector<CatalogEntry> catalog_entries();

}  // namespace rpfree
