#pragma once

// Candidate action data: the rank of G, the projective dimensions, one k-invariant per
// factor and whether G acts trivially on integral cohomology.

#include "rpfree/f2algebra.hpp"
#include "rpfree/quadforms.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace rpfree {

/// Malformed descriptor input; field() names the offending JSON path, e.g. "dims[1]".
class DescriptorError : public ParseError {
public:
    DescriptorError(std::string field, const std::string& why)
        : ParseError(field + ": " + why), field_(std::move(field))
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct ActionDescriptor {
    int r = 0;
    std::vector<int> dims;
    std::vector<QuadraticForm> k_invariants;
    bool integral_trivial = false;
    std::string name;  // optional label, not part of the mathematical data

    int k() const { return static_cast<int>(dims.size()); }
    /// Throws DescriptorError on r outside 0..16, negative dims, more than 16 factors,
    /// a length mismatch, or a form over the wrong number of variables.
    void validate() const;

    friend bool operator==(const ActionDescriptor&, const ActionDescriptor&) = default;
};

/// Forms are written as canonical polynomial strings.
nlohmann::json to_json(const ActionDescriptor& d);

/// Accepts forms as polynomial strings ("x1*x2 + x2^2") or as objects
/// {"diag": [j, ...], "cross": [[j, k], ...]} with 1-based indices. Unknown keys are errors.
ActionDescriptor descriptor_from_json(const nlohmann::json& j);
ActionDescriptor parse_descriptor(const std::string& text);

/// Form object with 1-based indices, the structured alternative to strings.
nlohmann::json form_to_json(const QuadraticForm& f);
QuadraticForm form_from_json(const nlohmann::json& j, int r, const std::string& field);

std::string dims_to_string(const std::vector<int>& dims);

}  // namespace rpfree
