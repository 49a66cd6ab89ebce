#include "habitsim/config.hpp"

#include <fstream>
#include <sstream>

#include "habitsim/errors.hpp"
#include "habitsim/params.hpp"

namespace habitsim {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
    // '#' or ';' starts a comment.
    const auto pos = line.find_first_of("#;");
    return pos == std::string::npos ? line : line.substr(0, pos);
}

double parse_double(const std::string& section, const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("[" + section + "] " + key + ": cannot parse number from '" + v + "'");
    }
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("[" + section + "] " + key + ": expected a boolean, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& section, const std::string& key,
                               const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        std::istringstream ws(item);
        std::string tok;
        while (ws >> tok) out.push_back(parse_double(section, key, tok));
    }
    if (out.empty()) throw ConfigError("[" + section + "] " + key + ": empty list");
    return out;
}

class SectionReader {
  public:
    SectionReader(const ConfigSections& all, std::string name) : name_(std::move(name)) {
        auto it = all.find(name_);
        if (it != all.end()) kv_ = &it->second;
    }
    bool present() const { return kv_ != nullptr; }
    bool has(const std::string& key) const { return kv_ && kv_->count(key) > 0; }
    double number(const std::string& key) const {
        return parse_double(name_, key, raw(key));
    }
    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }
    bool flag_or(const std::string& key, bool fallback) const {
        return has(key) ? parse_bool(name_, key, raw(key)) : fallback;
    }
    std::vector<double> list(const std::string& key) const {
        return parse_list(name_, key, raw(key));
    }
    std::string text_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? raw(key) : fallback;
    }

  private:
    const std::string& raw(const std::string& key) const {
        if (!kv_ || !kv_->count(key))
            throw ConfigError("[" + name_ + "] missing mandatory key '" + key + "'");
        return kv_->at(key);
    }
    std::string name_;
    const std::map<std::string, std::string>* kv_ = nullptr;
};

}  // namespace

ConfigSections parse_ini(const std::string& text) {
    ConfigSections out;
    std::string section;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            out[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        out[section][key] = val;
    }
    return out;
}

ParsedConfig load_config_text(const std::string& text, const std::string& origin) {
    const ConfigSections sections = parse_ini(text);
    for (const char* required : {"utility", "technology", "household", "initial"})
        if (!sections.count(required))
            throw ConfigError(origin + ": missing mandatory section [" + std::string(required) + "]");

    ParsedConfig pc;
    pc.manifest.config_path = origin;

    const SectionReader u(sections, "utility");
    auto& up = pc.model.utility;
    up.a_c1 = u.number("a_c1");
    up.a_c2 = u.number("a_c2");
    up.a_h = u.number("a_h");
    up.a_c1c1 = u.number("a_c1c1");
    up.a_c2c2 = u.number("a_c2c2");
    up.a_hh = u.number("a_hh");
    up.a_c1c2 = u.number("a_c1c2");
    up.a_c1h = u.number("a_c1h");
    up.a_c2h = u.number("a_c2h");

    const SectionReader t(sections, "technology");
    pc.model.tech.alpha = t.number("alpha");
    pc.model.tech.tau = t.number("tau");
    pc.model.tech.xi = t.number("xi");
    pc.model.tech.lbar = t.number("lbar");
    pc.model.tech.a_realloc = t.number("a_realloc");

    const SectionReader hh(sections, "household");
    pc.model.household.rho = hh.number("rho");
    pc.model.household.r = hh.number("r");
    pc.model.household.phi = hh.number("phi");

    const SectionReader ini(sections, "initial");
    pc.model.initial.b0 = ini.number("b0");
    pc.model.initial.h0 = ini.number("h0");

    validate_config(pc.model);

    const SectionReader grid(sections, "grid");
    if (grid.present()) {
        pc.manifest.dt = grid.number_or("dt", pc.manifest.dt);
        if (grid.has("horizon")) pc.manifest.horizon = grid.number("horizon");
    }
    if (!(pc.manifest.dt > 0.0)) throw ConfigError("[grid] dt must be positive");
    if (pc.manifest.horizon && !(*pc.manifest.horizon > 0.0))
        throw ConfigError("[grid] horizon must be positive");

    const SectionReader sc(sections, "scenarios");
    pc.manifest.no_lockdown = sc.present() && sc.flag_or("no_lockdown", false);
    pc.manifest.no_habits = sc.present() && sc.flag_or("no_habits", false);

    const SectionReader ld(sections, "lockdown");
    if (ld.present()) {
        pc.manifest.unanticipated_durations = ld.list("durations");
        for (double d : pc.manifest.unanticipated_durations)
            if (!(d > 0.0)) throw ConfigError("[lockdown] durations must be positive");
        const std::string mode = ld.text_or("mode", "unanticipated_end");
        if (mode != "unanticipated_end")
            throw ConfigError("[lockdown] mode: only 'unanticipated_end' is supported");
    }

    const SectionReader ant(sections, "anticipated");
    if (ant.present()) {
        if (ant.has("T")) {
            pc.manifest.anticipated_T = ant.list("T");
            for (double T : pc.manifest.anticipated_T)
                if (!(T > 0.0)) throw ConfigError("[anticipated] T must be positive");
        }
        if (ant.has("delta")) {
            pc.manifest.random_delta = ant.list("delta");
            for (double del : pc.manifest.random_delta)
                if (!(del > 0.0)) throw ConfigError("[anticipated] delta must be positive");
        }
        if (!ant.has("T") && !ant.has("delta"))
            throw ConfigError("[anticipated] needs T or delta");
    }

    const SectionReader ls(sections, "labor_shift");
    if (ls.present()) {
        pc.manifest.labor_shift = true;
        const bool permanent = ls.flag_or("permanent", false);
        if (ls.has("xi_new")) {
            const double xn = ls.number("xi_new");
            if (!(xn > 0.0 && xn < 1.0)) throw ConfigError("[labor_shift] xi_new must lie in (0,1)");
            pc.manifest.labor_shift_xi_new = xn;
        } else if (!permanent) {
            throw ConfigError("[labor_shift] needs xi_new or permanent = true");
        }
    }

    const bool any = pc.manifest.no_lockdown || pc.manifest.no_habits ||
                     !pc.manifest.unanticipated_durations.empty() ||
                     !pc.manifest.anticipated_T.empty() || !pc.manifest.random_delta.empty() ||
                     pc.manifest.labor_shift;
    if (!any)
        throw ConfigError(origin + ": the scenario list is empty; enable at least one of "
                          "[scenarios], [lockdown], [anticipated], [labor_shift]");
    return pc;
}

ParsedConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return load_config_text(os.str(), path);
}

namespace {
std::string duration_tag(double v) {
    std::ostringstream os;
    os << v;
    std::string s = os.str();
    for (auto& ch : s)
        if (ch == '.') ch = 'p';
    return s;
}
}  // namespace

std::vector<std::string> RunManifest::scenario_names() const {
    std::vector<std::string> names;
    if (no_lockdown) names.push_back("no_lockdown");
    if (no_habits) names.push_back("no_habits");
    for (double d : unanticipated_durations) names.push_back("unanticipated_t" + duration_tag(d));
    for (double T : anticipated_T) names.push_back("anticipated_T" + duration_tag(T));
    for (double del : random_delta) names.push_back("random_delta" + duration_tag(del));
    if (labor_shift)
        for (double d : unanticipated_durations) names.push_back("labor_shift_t" + duration_tag(d));
    return names;
}

}  // namespace habitsim
