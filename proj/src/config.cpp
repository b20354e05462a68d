#include "geodrev/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace geodrev {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool quoted = false;
};

using Table = std::map<std::pair<std::string, std::string>, Entry>;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"metric", {"nu", "x1_min", "x1_max", "x2_min", "x2_max"}},
      {"form", {"b1", "b2"}},
      {"phi", {"kind", "expr", "b0"}},
      {"sampling", {"n_x1", "n_x2", "n_t", "n_s", "eps_zero"}},
      {"geodesics", {"T", "h", "seeds"}},
  };
  return keys;
}

Table tokenize(std::string_view text) {
  Table table;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    // Strip a trailing comment unless the '#' sits inside quotes.
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_quotes = !in_quotes;
      if (line[i] == '#' && !in_quotes) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!schema().contains(section)) throw ConfigError("unknown section [" + section + "]", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value", line_no);
    if (section.empty()) throw ConfigError("key outside of any section", line_no);
    const std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (!schema().at(section).contains(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line_no);

    Entry entry{std::string(value), line_no, false};
    if (!value.empty() && value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') throw ConfigError("unterminated string", line_no);
      entry.value = std::string(value.substr(1, value.size() - 2));
      entry.quoted = true;
    }
    if (entry.value.empty()) throw ConfigError("empty value for '" + key + "'", line_no);
    if (!table.emplace(std::pair{section, key}, entry).second) {
      throw ConfigError("duplicate key '" + key + "' in [" + section + "]", line_no);
    }
  }
  return table;
}

class Reader {
 public:
  explicit Reader(Table table) : table_(std::move(table)) {}

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto it = table_.find({section, key});
    return it == table_.end() ? nullptr : &it->second;
  }

  const Entry& require(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (e == nullptr) throw ConfigError("missing key '" + key + "' in [" + section + "]", 0);
    return *e;
  }

  double number(const std::string& section, const std::string& key, double fallback) const {
    const Entry* e = find(section, key);
    if (e == nullptr) return fallback;
    double v = 0.0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (e->quoted || ec != std::errc() || ptr != last) throw ConfigError("'" + key + "' is not a number", e->line);
    return v;
  }

  int count(const std::string& section, const std::string& key, int fallback) const {
    const Entry* e = find(section, key);
    if (e == nullptr) return fallback;
    int v = 0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (e->quoted || ec != std::errc() || ptr != last) throw ConfigError("'" + key + "' is not an integer", e->line);
    return v;
  }

  ScalarField field(const Entry& e, std::vector<Var> vars) const {
    try {
      return ScalarField::parse(e.value, std::move(vars));
    } catch (const std::exception& ex) {
      throw ConfigError(std::string("bad expression: ") + ex.what(), e.line);
    }
  }

 private:
  Table table_;
};

}  // namespace

ConfigError::ConfigError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

ExperimentConfig parse_config(std::string_view text) {
  const Reader in(tokenize(text));
  const std::vector<Var> xy{Var::x1, Var::x2};
  ExperimentConfig cfg;

  if (const Entry* nu = in.find("metric", "nu")) {
    cfg.nu = in.field(*nu, xy);
  } else {
    cfg.nu = ScalarField(Expression::constant(0.0), xy);
  }
  cfg.domain = Rect{in.number("metric", "x1_min", -1.0), in.number("metric", "x1_max", 1.0),
                    in.number("metric", "x2_min", -1.0), in.number("metric", "x2_max", 1.0)};
  if (!(cfg.domain.x1_min < cfg.domain.x1_max) || !(cfg.domain.x2_min < cfg.domain.x2_max)) {
    throw ConfigError("empty domain rectangle", 0);
  }

  cfg.b1 = in.field(in.require("form", "b1"), xy);
  cfg.b2 = in.field(in.require("form", "b2"), xy);

  const Entry& kind = in.require("phi", "kind");
  cfg.phi_kind = kind.value;
  const Entry* expr = in.find("phi", "expr");
  double b0_default = 0.0;
  if (cfg.phi_kind == "randers") {
    cfg.phi_expr = PhiFunction::randers().field().expr();
    b0_default = 0.9;
  } else if (cfg.phi_kind == "matsumoto") {
    cfg.phi_expr = PhiFunction::matsumoto().field().expr();
    b0_default = 0.45;
  } else if (cfg.phi_kind == "expr") {
    if (expr == nullptr) throw ConfigError("kind = expr needs an 'expr' key in [phi]", kind.line);
    cfg.phi_expr = in.field(*expr, {Var::s}).expr();
    in.require("phi", "b0");
  } else {
    throw ConfigError("phi kind must be randers, matsumoto or expr", kind.line);
  }
  if (expr != nullptr && cfg.phi_kind != "expr") throw ConfigError("'expr' is only allowed with kind = expr", expr->line);
  cfg.b0 = in.number("phi", "b0", b0_default);
  if (!(cfg.b0 > 0.0 && cfg.b0 <= 1.0)) {
    const Entry* e = in.find("phi", "b0");
    throw ConfigError("b0 must lie in (0, 1]", e != nullptr ? e->line : 0);
  }

  const Sampling d;
  cfg.sampling = Sampling{in.count("sampling", "n_x1", d.n_x1), in.count("sampling", "n_x2", d.n_x2),
                          in.count("sampling", "n_t", d.n_t), in.count("sampling", "n_s", d.n_s),
                          in.number("sampling", "eps_zero", d.eps_zero)};
  for (const char* key : {"n_x1", "n_x2", "n_t", "n_s"}) {
    if (in.count("sampling", key, 8) < 8) throw ConfigError(std::string(key) + " must be at least 8", in.find("sampling", key)->line);
  }
  if (!(cfg.sampling.eps_zero > 0.0)) throw ConfigError("eps_zero must be positive", 0);

  cfg.T = in.number("geodesics", "T", 1.0);
  cfg.h = in.number("geodesics", "h", 1e-3);
  cfg.seeds = in.count("geodesics", "seeds", 8);
  if (!(cfg.T > 0.0) || !(cfg.h > 0.0)) throw ConfigError("T and h must be positive", 0);
  if (cfg.seeds < 1) throw ConfigError("seeds must be positive", 0);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string(), 0);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace geodrev
