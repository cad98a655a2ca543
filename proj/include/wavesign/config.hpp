#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesign/model.hpp"
#include "wavesign/simulate.hpp"

namespace wavesign {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace cfg {

/// Parsed value: number, quoted string, inline table { k = v, ... } or array
/// [ v, ... ]. Tables keep insertion order for canonical re-emission.
struct Value {
    enum class Kind { Number, String, Table, Array } kind = Kind::Number;
    double num = 0.0;
    std::string str;
    std::vector<std::pair<std::string, Value>> table;
    std::vector<Value> array;
    int line = 0;

    const Value* find(const std::string& key) const {
        for (const auto& [k, v] : table)
            if (k == key) return &v;
        return nullptr;
    }
};

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    Value parse() {
        Value root;
        root.kind = Value::Kind::Table;
        std::istringstream in(text_);
        std::string line;
        std::vector<std::string> section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string s = strip(line);
            if (s.empty() || s[0] == '#') continue;
            if (s.front() == '[') {
                if (s.back() != ']')
                    throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
                section = split_path(strip(s.substr(1, s.size() - 2)), lineno);
                table_at(root, section, lineno); // create it even if empty
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = strip(s.substr(0, eq));
            if (key.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key");
            pos_ = 0;
            src_ = strip(s.substr(eq + 1));
            cur_line_ = lineno;
            Value v = parse_value();
            skip_ws();
            if (pos_ != src_.size())
                throw ConfigError("line " + std::to_string(lineno) + ": trailing characters after value");
            Value& sect = table_at(root, section, lineno);
            if (sect.find(key))
                throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            sect.table.emplace_back(key, std::move(v));
        }
        return root;
    }

private:
    static std::string strip(const std::string& s) {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }

    static std::vector<std::string> split_path(const std::string& s, int lineno) {
        std::vector<std::string> parts;
        std::string cur;
        for (char c : s) {
            if (c == '.') {
                if (cur.empty())
                    throw ConfigError("line " + std::to_string(lineno) + ": empty section component");
                parts.push_back(cur);
                cur.clear();
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                cur += c;
            }
        }
        if (cur.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
        parts.push_back(cur);
        return parts;
    }

    static Value& table_at(Value& root, const std::vector<std::string>& path, int lineno) {
        Value* cur = &root;
        for (const auto& part : path) {
            Value* next = nullptr;
            for (auto& [k, v] : cur->table)
                if (k == part) next = &v;
            if (!next) {
                Value t;
                t.kind = Value::Kind::Table;
                t.line = lineno;
                cur->table.emplace_back(part, std::move(t));
                next = &cur->table.back().second;
            }
            if (next->kind != Value::Kind::Table)
                throw ConfigError("line " + std::to_string(lineno) + ": '" + part +
                                  "' is not a section");
            cur = next;
        }
        return *cur;
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

    Value parse_value() {
        skip_ws();
        Value v;
        v.line = cur_line_;
        const char c = peek();
        if (c == '"') {
            ++pos_;
            v.kind = Value::Kind::String;
            while (pos_ < src_.size() && src_[pos_] != '"') v.str += src_[pos_++];
            if (pos_ == src_.size())
                throw ConfigError("line " + std::to_string(cur_line_) + ": unterminated string");
            ++pos_;
        } else if (c == '{') {
            ++pos_;
            v.kind = Value::Kind::Table;
            skip_ws();
            while (peek() != '}') {
                std::string key;
                while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                                              peek() == '_'))
                    key += src_[pos_++];
                skip_ws();
                if (key.empty() || peek() != '=')
                    throw ConfigError("line " + std::to_string(cur_line_) +
                                      ": expected key = value inside { }");
                ++pos_;
                Value inner = parse_value();
                v.table.emplace_back(key, std::move(inner));
                skip_ws();
                if (peek() == ',') { ++pos_; skip_ws(); }
            }
            ++pos_;
        } else if (c == '[') {
            ++pos_;
            v.kind = Value::Kind::Array;
            skip_ws();
            while (peek() != ']') {
                v.array.push_back(parse_value());
                skip_ws();
                if (peek() == ',') { ++pos_; skip_ws(); }
            }
            ++pos_;
        } else {
            std::string tok;
            while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(peek())) &&
                   peek() != ',' && peek() != '}' && peek() != ']')
                tok += src_[pos_++];
            if (tok.empty())
                throw ConfigError("line " + std::to_string(cur_line_) + ": missing value");
            try {
                std::size_t used = 0;
                v.num = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ConfigError("line " + std::to_string(cur_line_) + ": '" + tok +
                                  "' is not a number");
            }
        }
        return v;
    }

    std::string text_;
    std::string src_;
    std::size_t pos_ = 0;
    int cur_line_ = 0;
};

} // namespace cfg

struct RunConfig {
    ModelParams model;
    std::optional<SimConfig> sim;
    std::string out_dir;
    std::string raw_text; // for provenance hashing
};

namespace detail {

class SchemaReader {
public:
    explicit SchemaReader(const cfg::Value& root) : root_(&root) {}

    std::vector<std::string> missing;
    std::vector<std::string> unknown;

    double number(const cfg::Value& table, const std::string& path, const std::string& key,
                  bool required = true, double fallback = 0.0) {
        const cfg::Value* v = table.find(key);
        consume(path + key);
        if (!v) {
            if (required) missing.push_back(path + key);
            return fallback;
        }
        if (v->kind != cfg::Value::Kind::Number)
            throw ConfigError("line " + std::to_string(v->line) + ": '" + path + key +
                              "' must be a number");
        return v->num;
    }

    std::string string(const cfg::Value& table, const std::string& path, const std::string& key,
                       bool required = true, const std::string& fallback = "") {
        const cfg::Value* v = table.find(key);
        consume(path + key);
        if (!v) {
            if (required) missing.push_back(path + key);
            return fallback;
        }
        if (v->kind != cfg::Value::Kind::String)
            throw ConfigError("line " + std::to_string(v->line) + ": '" + path + key +
                              "' must be a quoted string");
        return v->str;
    }

    const cfg::Value* table(const cfg::Value& parent, const std::string& path,
                            const std::string& key, bool required = true) {
        const cfg::Value* v = parent.find(key);
        consume(path + key);
        if (!v) {
            if (required) missing.push_back(path + key);
            return nullptr;
        }
        if (v->kind != cfg::Value::Kind::Table)
            throw ConfigError("line " + std::to_string(v->line) + ": '" + path + key +
                              "' must be a table or section");
        return v;
    }

    void consume(const std::string& full_key) { consumed_.push_back(full_key); }

    /// Tables whose children are validated by a dedicated reader (kernels)
    /// are consumed as opaque units.
    void consume_unit(const std::string& full_key) { units_.push_back(full_key); }

    /// Every key present in the document must have been consumed, except
    /// inside unit-consumed tables.
    void check_unknown(const cfg::Value& node, const std::string& path) {
        for (const auto& [k, v] : node.table) {
            const std::string full = path + k;
            bool unit = false;
            for (const auto& c : units_)
                if (c == full) { unit = true; break; }
            if (unit) continue;
            bool used = false;
            for (const auto& c : consumed_)
                if (c == full) { used = true; break; }
            if (v.kind == cfg::Value::Kind::Table && !v.table.empty()) {
                check_unknown(v, full + ".");
                continue;
            }
            if (!used) unknown.push_back(full + " (line " + std::to_string(v.line) + ")");
        }
    }

private:
    const cfg::Value* root_;
    std::vector<std::string> consumed_;
    std::vector<std::string> units_;
};

inline TrigPoly read_coefficient(SchemaReader& r, const cfg::Value& tbl, const std::string& path,
                                 double period) {
    const double mean = r.number(tbl, path + ".", "mean");
    std::vector<Harmonic> hs;
    const cfg::Value* arr = tbl.find("harmonics");
    r.consume(path + ".harmonics");
    if (arr) {
        if (arr->kind != cfg::Value::Kind::Array)
            throw ConfigError("line " + std::to_string(arr->line) + ": '" + path +
                              ".harmonics' must be an array of tables");
        for (const cfg::Value& h : arr->array) {
            if (h.kind != cfg::Value::Kind::Table)
                throw ConfigError("line " + std::to_string(h.line) + ": harmonic entries must be tables");
            Harmonic hh;
            const cfg::Value* kk = h.find("k");
            hh.k = kk && kk->kind == cfg::Value::Kind::Number ? static_cast<int>(kk->num) : 0;
            const cfg::Value* sv = h.find("sin");
            const cfg::Value* cv = h.find("cos");
            hh.sin_coeff = sv ? sv->num : 0.0;
            hh.cos_coeff = cv ? cv->num : 0.0;
            if (hh.k < 1)
                throw ConfigError("line " + std::to_string(h.line) +
                                  ": harmonic needs an integer k >= 1");
            for (const auto& [key, val] : h.table)
                if (key != "k" && key != "sin" && key != "cos")
                    throw ConfigError("line " + std::to_string(val.line) + ": unknown harmonic key '" +
                                      key + "'");
            hs.push_back(hh);
        }
    }
    return TrigPoly(period, mean, std::move(hs));
}

inline Kernel read_kernel(SchemaReader& r, const cfg::Value& tbl, const std::string& path) {
    std::string type;
    const cfg::Value* tv = tbl.find("type");
    if (tv && tv->kind == cfg::Value::Kind::String) type = tv->str;
    const cfg::Value* rv = tbl.find("truncation_radius");
    const double radius = rv ? rv->num : 0.0;
    auto extra = [&](const char* allowed) {
        for (const auto& [key, val] : tbl.table)
            if (key != "type" && key != "truncation_radius" && key != allowed)
                throw ConfigError("line " + std::to_string(val.line) + ": unknown kernel key '" +
                                  key + "' in " + path);
    };
    if (type == "gaussian") {
        extra("sigma");
        const cfg::Value* s = tbl.find("sigma");
        if (!s) throw ConfigError(path + ": gaussian kernel needs 'sigma'");
        return Kernel::gaussian(s->num, radius);
    }
    if (type == "laplace") {
        extra("scale");
        const cfg::Value* s = tbl.find("scale");
        if (!s) throw ConfigError(path + ": laplace kernel needs 'scale'");
        return Kernel::laplace(s->num, radius);
    }
    if (type == "uniform") {
        extra("halfwidth");
        const cfg::Value* s = tbl.find("halfwidth");
        if (!s) throw ConfigError(path + ": uniform kernel needs 'halfwidth'");
        return Kernel::uniform(s->num, radius);
    }
    throw ConfigError(path + ": kernel type must be \"gaussian\", \"laplace\" or \"uniform\"");
}

} // namespace detail

/// Parse and validate a config document. Every model key must be present,
/// unknown keys are rejected, and coefficient positivity is enforced.
inline RunConfig parse_config(const std::string& text) {
    cfg::Parser parser(text);
    const cfg::Value root = parser.parse();
    detail::SchemaReader r(root);

    RunConfig rc;
    rc.raw_text = text;
    const bool period_present = root.find("period") != nullptr;
    double period = r.number(root, "", "period");
    if (period_present && !(period > 0.0)) throw ConfigError("'period' must be positive");
    if (!period_present) period = 1.0; // placeholder while missing keys are aggregated
    const cfg::Value* model = r.table(root, "", "model");

    if (!model) {
        for (const char* name : {"d1", "r1", "a1", "b1", "d2", "r2", "a2", "b2", "kernel1",
                                 "kernel2"})
            r.missing.push_back(std::string("model.") + name);
    }
    if (model) {
        auto coeff = [&](const char* name) -> TrigPoly {
            const cfg::Value* t = r.table(*model, "model.", name);
            if (!t) return TrigPoly(period, 1.0);
            return detail::read_coefficient(r, *t, std::string("model.") + name, period);
        };
        rc.model.period = period;
        rc.model.d1 = coeff("d1");
        rc.model.r1 = coeff("r1");
        rc.model.a1 = coeff("a1");
        rc.model.b1 = coeff("b1");
        rc.model.d2 = coeff("d2");
        rc.model.r2 = coeff("r2");
        rc.model.a2 = coeff("a2");
        rc.model.b2 = coeff("b2");
        const cfg::Value* k1 = r.table(*model, "model.", "kernel1");
        const cfg::Value* k2 = r.table(*model, "model.", "kernel2");
        r.consume_unit("model.kernel1");
        r.consume_unit("model.kernel2");
        if (k1) rc.model.kernel1 = detail::read_kernel(r, *k1, "model.kernel1");
        if (k2) rc.model.kernel2 = detail::read_kernel(r, *k2, "model.kernel2");
    }

    const cfg::Value* sim = root.find("sim");
    r.consume("sim");
    if (sim) {
        SimConfig sc;
        const double x_min = r.number(*sim, "sim.", "x_min");
        const double x_max = r.number(*sim, "sim.", "x_max");
        const double dx = r.number(*sim, "sim.", "dx");
        sc.dt = r.number(*sim, "sim.", "dt");
        sc.t_end = r.number(*sim, "sim.", "t_end");
        sc.record_every = static_cast<int>(r.number(*sim, "sim.", "record_every", false, 0.0));
        sc.front_level = r.number(*sim, "sim.", "front_level", false, 0.5);
        const std::string boundary =
            r.string(*sim, "sim.", "boundary", false, "equilibrium_pad");
        if (boundary != "equilibrium_pad")
            throw ConfigError("sim.boundary: only \"equilibrium_pad\" is supported");
        if (r.missing.empty()) {
            sc.grid = Grid::make(x_min, x_max, dx);
            if (!(sc.dt > 0.0) || !(sc.t_end > 0.0))
                throw ConfigError("sim.dt and sim.t_end must be positive");
            if (!(sc.front_level > 0.0 && sc.front_level < 1.0))
                throw ConfigError("sim.front_level must lie in (0,1)");
            rc.sim = sc;
        }
    }

    const cfg::Value* output = root.find("output");
    r.consume("output");
    if (output) rc.out_dir = r.string(*output, "output.", "dir", false, "");

    if (!r.missing.empty()) {
        std::string msg = "missing required config keys:";
        for (const auto& k : r.missing) msg += " " + k;
        throw ConfigError(msg);
    }
    r.check_unknown(root, "");
    if (!r.unknown.empty()) {
        std::string msg = "unknown config keys:";
        for (const auto& k : r.unknown) msg += " " + k;
        throw ConfigError(msg);
    }
    try {
        rc.model.validate(); // positivity and period coherence
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return rc;
}

inline RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Canonical re-emission; parse(dump(parse(text))) == parse(text).
inline std::string dump_config(const RunConfig& rc) {
    std::ostringstream out;
    out.precision(17);
    auto poly = [&](const char* name, const TrigPoly& p) {
        out << name << " = { mean = " << p.mean();
        if (!p.harmonics().empty()) {
            out << ", harmonics = [ ";
            bool first = true;
            for (const auto& h : p.harmonics()) {
                if (!first) out << ", ";
                first = false;
                out << "{ k = " << h.k << ", sin = " << h.sin_coeff << ", cos = " << h.cos_coeff
                    << " }";
            }
            out << " ]";
        }
        out << " }\n";
    };
    auto kern = [&](const char* name, const Kernel& k) {
        out << name << " = { type = ";
        switch (k.shape()) {
        case Kernel::Shape::Gaussian: out << "\"gaussian\", sigma = " << k.scale(); break;
        case Kernel::Shape::Laplace: out << "\"laplace\", scale = " << k.scale(); break;
        case Kernel::Shape::Uniform: out << "\"uniform\", halfwidth = " << k.scale(); break;
        }
        out << ", truncation_radius = " << k.truncation_radius() << " }\n";
    };
    out << "period = " << rc.model.period << "\n\n[model]\n";
    kern("kernel1", rc.model.kernel1);
    kern("kernel2", rc.model.kernel2);
    poly("d1", rc.model.d1);
    poly("r1", rc.model.r1);
    poly("a1", rc.model.a1);
    poly("b1", rc.model.b1);
    poly("d2", rc.model.d2);
    poly("r2", rc.model.r2);
    poly("a2", rc.model.a2);
    poly("b2", rc.model.b2);
    if (rc.sim) {
        out << "\n[sim]\n";
        out << "x_min = " << rc.sim->grid.x_min << "\n";
        out << "x_max = " << rc.sim->grid.x_max << "\n";
        out << "dx = " << rc.sim->grid.dx << "\n";
        out << "dt = " << rc.sim->dt << "\n";
        out << "t_end = " << rc.sim->t_end << "\n";
        out << "record_every = " << rc.sim->record_every << "\n";
        out << "front_level = " << rc.sim->front_level << "\n";
    }
    if (!rc.out_dir.empty()) out << "\n[output]\ndir = \"" << rc.out_dir << "\"\n";
    return out.str();
}

} // namespace wavesign
