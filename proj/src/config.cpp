#include "drorder/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace drorder {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Ptr = Json::json_pointer;

// Records the starting line of every value, keyed by JSON pointer string.
// Only run on text that nlohmann already accepted.
class LineIndex {
public:
    explicit LineIndex(const std::string& text) : s_(text) { value(""); }
    std::size_t find(const std::string& pointer) const {
        auto it = lines_.find(pointer);
        return it == lines_.end() ? 0 : it->second;
    }

private:
    void ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
            if (s_[i_] == '\n')
                ++line_;
            ++i_;
        }
    }
    std::string string() {
        std::string out;
        ++i_;
        while (i_ < s_.size() && s_[i_] != '"') {
            if (s_[i_] == '\\' && i_ + 1 < s_.size())
                out += s_[i_++];
            out += s_[i_++];
        }
        ++i_;
        return out;
    }
    static std::string escape(const std::string& key) {
        std::string out;
        for (char c : key) {
            if (c == '~')
                out += "~0";
            else if (c == '/')
                out += "~1";
            else
                out += c;
        }
        return out;
    }
    void value(const std::string& path) {
        ws();
        if (i_ >= s_.size())
            return;
        lines_.emplace(path, line_);
        const char c = s_[i_];
        if (c == '{') {
            ++i_;
            for (;;) {
                ws();
                if (i_ >= s_.size() || s_[i_] == '}') {
                    ++i_;
                    return;
                }
                if (s_[i_] == ',') {
                    ++i_;
                    continue;
                }
                const std::string key = string();
                ws();
                ++i_;   // ':'
                value(path + "/" + escape(key));
            }
        } else if (c == '[') {
            ++i_;
            std::size_t index = 0;
            for (;;) {
                ws();
                if (i_ >= s_.size() || s_[i_] == ']') {
                    ++i_;
                    return;
                }
                if (s_[i_] == ',') {
                    ++i_;
                    continue;
                }
                value(path + "/" + std::to_string(index++));
            }
        } else if (c == '"') {
            string();
        } else {
            while (i_ < s_.size() && s_[i_] != ',' && s_[i_] != ']' && s_[i_] != '}' &&
                   !std::isspace(static_cast<unsigned char>(s_[i_])))
                ++i_;
        }
    }

    const std::string& s_;
    std::size_t i_ = 0;
    std::size_t line_ = 1;
    std::map<std::string, std::size_t> lines_;
};

class Reader {
public:
    explicit Reader(const std::string& source) {
        if (!source.empty())
            index_.emplace(source);
    }

    [[noreturn]] void fail(const Ptr& at, const std::string& what) const {
        const std::string where = at.empty() ? std::string("<root>") : at.to_string();
        throw ConfigError(where + ": " + what, index_ ? index_->find(at.to_string()) : 0);
    }

    const Json& field(const Json& obj, const Ptr& at, const char* key) const {
        if (!obj.contains(key))
            fail(at, std::string("missing required field \"") + key + "\"");
        return obj.at(key);
    }

    void only_fields(const Json& obj, const Ptr& at, std::initializer_list<const char*> allowed) const {
        if (!obj.is_object())
            fail(at, "expected an object");
        const std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& item : obj.items())
            if (!ok.count(item.key()))
                fail(at / item.key(), "unknown field \"" + item.key() + "\"");
    }

    double number(const Json& j, const Ptr& at) const {
        if (!j.is_number())
            fail(at, "expected a number");
        const double v = j.get<double>();
        if (!std::isfinite(v))
            fail(at, "number must be finite");
        return v;
    }

    // Box bounds additionally accept "inf", "+inf", "-inf".
    double extended(const Json& j, const Ptr& at) const {
        if (j.is_string()) {
            const auto s = j.get<std::string>();
            if (s == "inf" || s == "+inf")
                return std::numeric_limits<double>::infinity();
            if (s == "-inf")
                return -std::numeric_limits<double>::infinity();
            fail(at, "expected a number, \"inf\" or \"-inf\"");
        }
        return number(j, at);
    }

    std::size_t count(const Json& j, const Ptr& at) const {
        if (!j.is_number_integer() || j.get<long long>() < 0)
            fail(at, "expected a non-negative integer");
        return j.get<std::size_t>();
    }

    Vector vector(const Json& j, const Ptr& at, bool allow_infinite = false) const {
        if (!j.is_array())
            fail(at, "expected an array of numbers");
        Vector v(static_cast<Index>(j.size()));
        for (std::size_t i = 0; i < j.size(); ++i)
            v[static_cast<Index>(i)] =
                allow_infinite ? extended(j[i], at / i) : number(j[i], at / i);
        return v;
    }

    Matrix matrix(const Json& j, const Ptr& at) const {
        if (!j.is_array() || j.empty())
            fail(at, "expected a non-empty array of rows");
        const std::size_t rows = j.size();
        const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
        Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
        for (std::size_t r = 0; r < rows; ++r) {
            const Vector row = vector(j[r], at / r);
            if (static_cast<std::size_t>(row.size()) != cols)
                fail(at / r, "ragged matrix row");
            m.row(static_cast<Index>(r)) = row.transpose();
        }
        return m;
    }

    OperatorSpec op(const Json& j, const Ptr& at, const Tolerances& tol) const {
        if (!j.is_object())
            fail(at, "operator must be an object");
        const Json& kind_j = field(j, at, "kind");
        if (!kind_j.is_string())
            fail(at / "kind", "kind must be a string");
        const std::string kind = kind_j.get<std::string>();
        try {
            if (kind == "linear_monotone") {
                only_fields(j, at, {"kind", "matrix"});
                return OperatorSpec::linear_monotone(matrix(field(j, at, "matrix"), at / "matrix"),
                                                     tol);
            }
            if (kind == "affine_relation") {
                only_fields(j, at, {"kind", "matrix", "offset"});
                return OperatorSpec::affine_relation(
                    matrix(field(j, at, "matrix"), at / "matrix"),
                    vector(field(j, at, "offset"), at / "offset"), tol);
            }
            if (kind == "normal_cone_affine_subspace") {
                only_fields(j, at, {"kind", "offset", "directions"});
                const Vector offset = vector(field(j, at, "offset"), at / "offset");
                const Json& dirs = field(j, at, "directions");
                if (!dirs.is_array())
                    fail(at / "directions", "expected an array of vectors");
                Matrix spanning(offset.size(), static_cast<Index>(dirs.size()));
                for (std::size_t c = 0; c < dirs.size(); ++c) {
                    const Vector v = vector(dirs[c], at / "directions" / c);
                    if (v.size() != offset.size())
                        fail(at / "directions" / c, "direction length differs from offset");
                    spanning.col(static_cast<Index>(c)) = v;
                }
                return OperatorSpec::affine_subspace(offset, spanning, tol);
            }
            if (kind == "normal_cone_halfspace") {
                only_fields(j, at, {"kind", "normal", "rhs"});
                return OperatorSpec::halfspace(vector(field(j, at, "normal"), at / "normal"),
                                               number(field(j, at, "rhs"), at / "rhs"), tol);
            }
            if (kind == "normal_cone_ball") {
                only_fields(j, at, {"kind", "center", "radius"});
                return OperatorSpec::ball(vector(field(j, at, "center"), at / "center"),
                                          number(field(j, at, "radius"), at / "radius"));
            }
            if (kind == "normal_cone_ray") {
                only_fields(j, at, {"kind", "direction"});
                return OperatorSpec::ray(vector(field(j, at, "direction"), at / "direction"), tol);
            }
            if (kind == "normal_cone_box") {
                only_fields(j, at, {"kind", "lower", "upper"});
                return OperatorSpec::box(vector(field(j, at, "lower"), at / "lower", true),
                                         vector(field(j, at, "upper"), at / "upper", true));
            }
            if (kind == "sphere_selection") {
                only_fields(j, at, {"kind", "center", "radius", "tie_direction"});
                return OperatorSpec::sphere_selection(
                    vector(field(j, at, "center"), at / "center"),
                    number(field(j, at, "radius"), at / "radius"),
                    vector(field(j, at, "tie_direction"), at / "tie_direction"), tol);
            }
            if (kind == "inverse" || kind == "rotation") {
                only_fields(j, at, {"kind", "inner"});
                OperatorSpec inner = op(field(j, at, "inner"), at / "inner", tol);
                return kind == "inverse" ? OperatorSpec::inverse(std::move(inner))
                                         : OperatorSpec::rotation(std::move(inner));
            }
            if (kind == "product") {
                only_fields(j, at, {"kind", "blocks"});
                const Json& blocks = field(j, at, "blocks");
                if (!blocks.is_array() || blocks.empty())
                    fail(at / "blocks", "expected a non-empty array of operators");
                std::vector<OperatorSpec> out;
                for (std::size_t i = 0; i < blocks.size(); ++i)
                    out.push_back(op(blocks[i], at / "blocks" / i, tol));
                return OperatorSpec::product(std::move(out));
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            fail(at, e.what());
        }
        fail(at / "kind", "unknown operator kind \"" + kind + "\"");
    }

private:
    std::optional<LineIndex> index_;
};

Json vector_json(const Vector& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) {
        if (std::isinf(v[i]))
            out.push_back(v[i] > 0 ? "inf" : "-inf");
        else
            out.push_back(v[i]);
    }
    return out;
}

Json matrix_json(const Matrix& m) {
    Json out = Json::array();
    for (Index r = 0; r < m.rows(); ++r)
        out.push_back(vector_json(m.row(r).transpose()));
    return out;
}

} // namespace

std::size_t locate_line(const std::string& text, const Json::json_pointer& pointer) {
    return LineIndex(text).find(pointer.to_string());
}

Json operator_to_json(const OperatorSpec& op) {
    Json j;
    j["kind"] = std::string(kind_name(op.kind()));
    std::visit(overloaded{
                   [&](const variants::LinearMonotone& v) { j["matrix"] = matrix_json(v.matrix); },
                   [&](const variants::AffineRelation& v) {
                       j["matrix"] = matrix_json(v.matrix);
                       j["offset"] = vector_json(v.offset);
                   },
                   [&](const variants::NormalConeAffineSubspace& v) {
                       j["offset"] = vector_json(v.offset);
                       Json dirs = Json::array();
                       for (Index c = 0; c < v.basis.cols(); ++c)
                           dirs.push_back(vector_json(v.basis.col(c)));
                       j["directions"] = dirs;
                   },
                   [&](const variants::NormalConeHalfspace& v) {
                       j["normal"] = vector_json(v.normal);
                       j["rhs"] = v.rhs;
                   },
                   [&](const variants::NormalConeBall& v) {
                       j["center"] = vector_json(v.center);
                       j["radius"] = v.radius;
                   },
                   [&](const variants::NormalConeRay& v) {
                       j["direction"] = vector_json(v.direction);
                   },
                   [&](const variants::NormalConeBox& v) {
                       j["lower"] = vector_json(v.lower);
                       j["upper"] = vector_json(v.upper);
                   },
                   [&](const variants::SphereSelection& v) {
                       j["center"] = vector_json(v.center);
                       j["radius"] = v.radius;
                       j["tie_direction"] = vector_json(v.tie_direction);
                   },
                   [&](const variants::Inverse& v) { j["inner"] = operator_to_json(*v.inner); },
                   [&](const variants::Rotation& v) { j["inner"] = operator_to_json(*v.inner); },
                   [&](const variants::Product& v) {
                       Json blocks = Json::array();
                       for (const auto& b : *v.blocks)
                           blocks.push_back(operator_to_json(b));
                       j["blocks"] = blocks;
                   },
               },
               op.repr());
    return j;
}

OperatorSpec operator_from_json(const Json& j, const Tolerances& tol) {
    return Reader({}).op(j, Ptr{}, tol);
}

Json config_to_json(const ProblemConfig& c) {
    Json j;
    j["version"] = c.version;
    if (!c.name.empty())
        j["name"] = c.name;
    j["dimension"] = c.dimension;
    j["operator_a"] = operator_to_json(c.operator_a);
    j["operator_b"] = operator_to_json(c.operator_b);
    Json starts = Json::array();
    for (const auto& p : c.start_points)
        starts.push_back(vector_json(p));
    j["start_points"] = starts;
    j["max_iter"] = c.max_iter;
    j["stop_tol"] = c.stop_tol;
    j["tolerances"] = {{"tau_num", c.tolerances.tau_num},
                       {"tau_graph", c.tolerances.tau_graph},
                       {"tau_psd", c.tolerances.tau_psd},
                       {"tau_ortho", c.tolerances.tau_ortho}};
    j["mode"] = c.mode == SplitMode::Standard ? "standard" : "generalized";
    return j;
}

ProblemConfig config_from_json(const Json& j, const std::string& source) {
    const Reader rd(source);
    const Ptr root;
    rd.only_fields(j, root,
                   {"version", "name", "dimension", "operator_a", "operator_b", "start_points",
                    "max_iter", "stop_tol", "tolerances", "mode"});
    ProblemConfig c;
    const Json& version = rd.field(j, root, "version");
    if (!version.is_number_integer() || version.get<int>() != 1)
        rd.fail(root / "version", "unsupported version (expected 1)");
    if (j.contains("name")) {
        if (!j["name"].is_string())
            rd.fail(root / "name", "expected a string");
        c.name = j["name"].get<std::string>();
    }
    c.dimension = static_cast<Index>(rd.count(rd.field(j, root, "dimension"), root / "dimension"));
    if (c.dimension < 1)
        rd.fail(root / "dimension", "dimension must be at least 1");

    if (j.contains("tolerances")) {
        const Json& t = j["tolerances"];
        const Ptr at = root / "tolerances";
        rd.only_fields(t, at, {"tau_num", "tau_graph", "tau_psd", "tau_ortho"});
        auto read = [&](const char* key, double& out) {
            if (t.contains(key)) {
                out = rd.number(t[key], at / key);
                if (out < 0.0)
                    rd.fail(at / key, "tolerance must be non-negative");
            }
        };
        read("tau_num", c.tolerances.tau_num);
        read("tau_graph", c.tolerances.tau_graph);
        read("tau_psd", c.tolerances.tau_psd);
        read("tau_ortho", c.tolerances.tau_ortho);
    }
    if (j.contains("mode")) {
        const Json& m = j["mode"];
        if (m == "standard")
            c.mode = SplitMode::Standard;
        else if (m == "generalized")
            c.mode = SplitMode::Generalized;
        else
            rd.fail(root / "mode", "mode must be \"standard\" or \"generalized\"");
    }
    if (j.contains("max_iter")) {
        c.max_iter = rd.count(j["max_iter"], root / "max_iter");
        if (c.max_iter < 1)
            rd.fail(root / "max_iter", "max_iter must be at least 1");
    }
    if (j.contains("stop_tol")) {
        c.stop_tol = rd.number(j["stop_tol"], root / "stop_tol");
        if (c.stop_tol < 0.0)
            rd.fail(root / "stop_tol", "stop_tol must be non-negative");
    }

    c.operator_a = rd.op(rd.field(j, root, "operator_a"), root / "operator_a", c.tolerances);
    c.operator_b = rd.op(rd.field(j, root, "operator_b"), root / "operator_b", c.tolerances);
    auto check_dim = [&](const OperatorSpec& op, const char* key) {
        if (op.dimension() != c.dimension)
            rd.fail(root / key, "operator acts on R^" + std::to_string(op.dimension()) +
                                    " but dimension is " + std::to_string(c.dimension));
    };
    check_dim(c.operator_a, "operator_a");
    check_dim(c.operator_b, "operator_b");
    if (c.mode == SplitMode::Generalized) {
        if (!c.operator_a.affine_subspace_cone())
            rd.fail(root / "operator_a",
                    "generalized mode requires operator_a to be an affine-subspace normal cone");
    } else {
        if (!c.operator_a.monotone())
            rd.fail(root / "operator_a", "operator is not monotone (use generalized mode only "
                                         "for a selection in operator_b)");
        if (!c.operator_b.monotone())
            rd.fail(root / "operator_b",
                    "non-monotone operator requires \"mode\": \"generalized\"");
    }

    const Json& starts = rd.field(j, root, "start_points");
    if (!starts.is_array() || starts.empty())
        rd.fail(root / "start_points", "expected a non-empty array of points");
    for (std::size_t i = 0; i < starts.size(); ++i) {
        Vector p = rd.vector(starts[i], root / "start_points" / i);
        if (p.size() != c.dimension)
            rd.fail(root / "start_points" / i, "start point length differs from dimension");
        c.start_points.push_back(std::move(p));
    }
    return c;
}

ProblemConfig parse_config(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i)
            if (text[i] == '\n')
                ++line;
        throw ConfigError(e.what(), line);
    }
    return config_from_json(j, text);
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path, 0);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

Json report_to_json(const IdentityReport& r) {
    Json j;
    j["identity_name"] = r.identity_name;
    j["max_violation"] = r.max_violation;
    j["sample_count"] = r.sample_count;
    j["tolerance"] = r.tolerance;
    j["passed"] = r.passed();
    j["expectation"] = r.expectation == Expectation::Vanishes ? "vanishes" : "exceeds";
    return j;
}

Json reports_to_json(const std::vector<IdentityReport>& reports) {
    Json out = Json::array();
    for (const auto& r : reports)
        out.push_back(report_to_json(r));
    return out;
}

} // namespace drorder
