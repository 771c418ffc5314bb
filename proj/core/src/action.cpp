#include "rpfree/action.hpp"

#include <set>
#include <sstream>

namespace rpfree {

using nlohmann::json;

void ActionDescriptor::validate() const
{
    if (r < 0 || r > kMaxFamilySize)
        throw DescriptorError("r", "must lie in 0.." + std::to_string(kMaxFamilySize));
    if (dims.size() > static_cast<std::size_t>(kMaxFamilySize))
        throw DescriptorError("dims", "at most " + std::to_string(kMaxFamilySize) + " factors");
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (dims[i] < 0)
            throw DescriptorError("dims[" + std::to_string(i) + "]", "must be non-negative");
    if (k_invariants.size() != dims.size())
        throw DescriptorError("k_invariants", "needs one form per entry of dims");
    for (std::size_t i = 0; i < k_invariants.size(); ++i)
        if (k_invariants[i].r() != r)
            throw DescriptorError("k_invariants[" + std::to_string(i) + "]",
                                  "form is not over r = " + std::to_string(r) + " variables");
}

json form_to_json(const QuadraticForm& f)
{
    json diag = json::array();
    json cross = json::array();
    for (int j = 0; j < f.r(); ++j)
        if (f.diag(j))
            diag.push_back(j + 1);
    for (int j = 0; j < f.r(); ++j)
        for (int k = j + 1; k < f.r(); ++k)
            if (f.cross(j, k))
                cross.push_back({j + 1, k + 1});
    return {{"diag", diag}, {"cross", cross}};
}

namespace {

int index_in(const json& v, int r, const std::string& field)
{
    if (!v.is_number_integer())
        throw DescriptorError(field, "expected an integer index");
    const auto i = v.get<std::int64_t>();
    if (i < 1 || i > r)
        throw DescriptorError(field, "index must lie in 1.." + std::to_string(r));
    return static_cast<int>(i - 1);
}

}  // namespace

QuadraticForm form_from_json(const json& j, int r, const std::string& field)
{
    if (j.is_string()) {
        try {
            return QuadraticForm::from_poly(parse_poly(j.get<std::string>(), RingDescriptor::free_x(r)));
        } catch (const std::invalid_argument& e) {
            throw DescriptorError(field, e.what());
        }
    }
    if (!j.is_object())
        throw DescriptorError(field, "expected a polynomial string or a {diag, cross} object");
    QuadraticForm f(r);
    for (const auto& [key, value] : j.items()) {
        if (key != "diag" && key != "cross")
            throw DescriptorError(field + "." + key, "unknown key");
        if (!value.is_array())
            throw DescriptorError(field + "." + key, "expected an array");
    }
    if (j.contains("diag")) {
        const auto& d = j["diag"];
        for (std::size_t i = 0; i < d.size(); ++i) {
            const int v = index_in(d[i], r, field + ".diag[" + std::to_string(i) + "]");
            f.set_diag(v, !f.diag(v));
        }
    }
    if (j.contains("cross")) {
        const auto& c = j["cross"];
        for (std::size_t i = 0; i < c.size(); ++i) {
            const std::string at = field + ".cross[" + std::to_string(i) + "]";
            if (!c[i].is_array() || c[i].size() != 2)
                throw DescriptorError(at, "expected a pair [j, k]");
            const int a = index_in(c[i][0], r, at + "[0]");
            const int b = index_in(c[i][1], r, at + "[1]");
            if (a == b) {
                // x_j * x_j is the square term
                f.set_diag(a, !f.diag(a));
                continue;
            }
            f.set_cross(a, b, !f.cross(a, b));
        }
    }
    return f;
}

json to_json(const ActionDescriptor& d)
{
    json forms = json::array();
    for (const auto& f : d.k_invariants)
        forms.push_back(f.to_string());
    json out = {{"r", d.r}, {"dims", d.dims}, {"k_invariants", forms}, {"integral_trivial", d.integral_trivial}};
    if (!d.name.empty())
        out["name"] = d.name;
    return out;
}

ActionDescriptor descriptor_from_json(const json& j)
{
    if (!j.is_object())
        throw DescriptorError("$", "expected a JSON object");
    static const std::set<std::string> known{"r", "dims", "k_invariants", "integral_trivial", "name"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key))
            throw DescriptorError(key, "unknown field");
    for (const char* key : {"r", "dims", "k_invariants", "integral_trivial"})
        if (!j.contains(key))
            throw DescriptorError(key, "missing field");

    ActionDescriptor d;
    if (!j["r"].is_number_integer())
        throw DescriptorError("r", "expected an integer");
    const auto r = j["r"].get<std::int64_t>();
    if (r < 0 || r > kMaxFamilySize)
        throw DescriptorError("r", "must lie in 0.." + std::to_string(kMaxFamilySize));
    d.r = static_cast<int>(r);

    const auto& dims = j["dims"];
    if (!dims.is_array())
        throw DescriptorError("dims", "expected an array of integers");
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const std::string at = "dims[" + std::to_string(i) + "]";
        if (!dims[i].is_number_integer())
            throw DescriptorError(at, "expected an integer");
        const auto n = dims[i].get<std::int64_t>();
        if (n < 0 || n > 255)
            throw DescriptorError(at, "must lie in 0..255");
        d.dims.push_back(static_cast<int>(n));
    }

    const auto& forms = j["k_invariants"];
    if (!forms.is_array())
        throw DescriptorError("k_invariants", "expected an array");
    if (forms.size() != d.dims.size())
        throw DescriptorError("k_invariants", "has " + std::to_string(forms.size()) + " entries but dims has " +
                                                  std::to_string(d.dims.size()));
    for (std::size_t i = 0; i < forms.size(); ++i)
        d.k_invariants.push_back(form_from_json(forms[i], d.r, "k_invariants[" + std::to_string(i) + "]"));

    if (!j["integral_trivial"].is_boolean())
        throw DescriptorError("integral_trivial", "expected true or false");
    d.integral_trivial = j["integral_trivial"].get<bool>();

    if (j.contains("name")) {
        if (!j["name"].is_string())
            throw DescriptorError("name", "expected a string");
        d.name = j["name"].get<std::string>();
    }
    d.validate();
    return d;
}

ActionDescriptor parse_descriptor(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DescriptorError("$", std::string("invalid JSON: ") + e.what());
    }
    return descriptor_from_json(j);
}

std::string dims_to_string(const std::vector<int>& dims)
{
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < dims.size(); ++i)
        out << (i ? "," : "") << dims[i];
    out << "]";
    return out.str();
}

}  // namespace rpfree
