#include "levycop/spec_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "levycop/errors.hpp"

namespace levycop {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
           c == '.' || c == '-' || c == '_';
  });
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf") return kInf;
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ParseError("spec: '" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

// Key lookup with a prefix; remembers which keys were read.
class Reader {
 public:
  explicit Reader(const SpecEntries& entries) : entries_(entries) {}

  std::optional<std::string> optional(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  std::string required(const std::string& key) {
    auto v = optional(key);
    if (!v) throw ParseError("spec: missing key '" + key + "'");
    return *v;
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    auto v = optional(key);
    if (!v) {
      if (fallback) return *fallback;
      throw ParseError("spec: missing key '" + key + "'");
    }
    return parse_double(key, *v);
  }

  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
    auto v = optional(key);
    if (!v) {
      if (fallback) return *fallback;
      throw ParseError("spec: missing key '" + key + "'");
    }
    int out = 0;
    const std::string t = trim(*v);
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
      throw ParseError("spec: '" + key + "' expects an integer, got '" + *v + "'");
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, value] : entries_) {
      if (!used_.count(key)) throw ParseError("spec: unknown key '" + key + "'");
    }
  }

 private:
  const SpecEntries& entries_;
  std::set<std::string> used_;
};

std::vector<std::pair<double, double>> parse_table(const std::string& key, const std::string& text) {
  std::vector<std::pair<double, double>> nodes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ParseError("spec: table entry '" + trim(item) + "' is not x:y");
    nodes.emplace_back(parse_double(key, item.substr(0, colon)), parse_double(key, item.substr(colon + 1)));
  }
  if (nodes.empty()) throw ParseError("spec: empty table");
  return nodes;
}

ProperGenerator read_proper_generator(Reader& r, const std::string& p, int d);
LevyGenerator read_levy_generator(Reader& r, const std::string& p, int d);

ProperGenerator read_proper_generator(Reader& r, const std::string& p, int default_d) {
  const int d = r.integer(p + "d", default_d);
  const std::string family = r.required(p + "family");
  if (family == "clayton") return clayton_generator(d);
  if (family == "exponential") return exponential_generator(d);
  if (family == "dirac-radial") return dirac_radial_generator(d, r.number(p + "r0", 1.0));
  if (family == "custom-table") return table_generator(d, parse_table(p + "table", r.required(p + "table")));
  if (family == "converted") {
    const std::string transform = r.required(p + "transform");
    if (transform != "phi-to-psi") throw ParseError("spec: proper generator cannot come from '" + transform + "'");
    if (r.required(p + "base.side") != "levy") throw ParseError("spec: phi-to-psi needs a levy base generator");
    return phi_to_psi(read_levy_generator(r, p + "base.", d));
  }
  throw ParseError("spec: unknown proper generator family '" + family + "'");
}

LevyGenerator read_levy_generator(Reader& r, const std::string& p, int default_d) {
  const int d = r.integer(p + "d", default_d);
  const std::string family = r.required(p + "family");
  if (family == "clayton") return reciprocal_levy_generator(d);
  if (family == "custom-table") return table_levy_generator(d, parse_table(p + "table", r.required(p + "table")));
  if (family == "converted") {
    const std::string transform = r.required(p + "transform");
    if (transform != "psi-to-phi") throw ParseError("spec: levy generator cannot come from '" + transform + "'");
    if (r.required(p + "base.side") != "proper") throw ParseError("spec: psi-to-phi needs a proper base generator");
    return psi_to_phi(read_proper_generator(r, p + "base.", d));
  }
  throw ParseError("spec: unknown levy generator family '" + family + "'");
}

SpecObject read_generator(Reader& r, const std::string& p, int default_d) {
  const std::string side = r.required(p + "side");
  if (side == "proper") return read_proper_generator(r, p, default_d);
  if (side == "levy") return read_levy_generator(r, p, default_d);
  throw ParseError("spec: generator side must be proper or levy, got '" + side + "'");
}

LevyCopulaSpec read_levy_copula(Reader& r, const std::string& p, std::optional<int> default_d);

CopulaSpec read_copula(Reader& r, const std::string& p, std::optional<int> default_d) {
  const int d = r.integer(p + "d", default_d);
  const std::string family = r.required(p + "family");
  if (family == "independence") return CopulaSpec::independence(d);
  if (family == "comonotone") return CopulaSpec::comonotone(d);
  if (family == "frechet-lower") return CopulaSpec::frechet_lower(d);
  if (family == "clayton") return CopulaSpec::clayton(d);
  if (family == "archimedean") {
    if (r.required(p + "generator.side") != "proper") throw ParseError("spec: archimedean copula needs a proper generator");
    return CopulaSpec::archimedean(read_proper_generator(r, p + "generator.", d), d);
  }
  if (family == "from-levy") {
    const auto image = proper_image(read_levy_copula(r, p + "levy.", d));
    if (std::holds_alternative<DegenerateMapping>(image)) {
      throw ParseError("spec: " + std::get<DegenerateMapping>(image).reason);
    }
    return std::get<CopulaSpec>(image);
  }
  throw ParseError("spec: unknown copula family '" + family + "'");
}

LevyCopulaSpec read_levy_copula(Reader& r, const std::string& p, std::optional<int> default_d) {
  const int d = r.integer(p + "d", default_d);
  const std::string family = r.required(p + "family");
  if (family == "complete-dependence") return LevyCopulaSpec::complete_dependence(d);
  if (family == "independence") return LevyCopulaSpec::independence(d);
  if (family == "archimedean-levy") {
    if (r.required(p + "generator.side") != "levy") throw ParseError("spec: archimedean-levy needs a levy generator");
    return LevyCopulaSpec::archimedean(read_levy_generator(r, p + "generator.", d), d);
  }
  if (family == "from-proper") return LevyCopulaSpec::from_proper(read_copula(r, p + "copula.", d));
  throw ParseError("spec: unknown levy copula family '" + family + "'");
}

RadialMeasure read_radial(Reader& r, const std::string& p, double default_scale, int d) {
  const std::string family = r.required(p + "family");
  if (family == "power-tail") return RadialMeasure::power_tail(r.number(p + "scale", default_scale), r.number(p + "index", 1.0));
  if (family == "uniform") return RadialMeasure::uniform(r.number(p + "a", 0.0), r.number(p + "b"));
  if (family == "erlang") return RadialMeasure::erlang(r.integer(p + "d", d));
  if (family == "dirac") return RadialMeasure::dirac(r.number(p + "r0", 1.0));
  throw ParseError("spec: unknown radial family '" + family + "'");
}

std::vector<int> parse_signs(const std::string& text) {
  std::vector<int> signs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t == "+" || t == "1" || t == "+1") {
      signs.push_back(1);
    } else if (t == "-" || t == "-1") {
      signs.push_back(-1);
    } else {
      throw ParseError("spec: sign must be + or -, got '" + t + "'");
    }
  }
  return signs;
}

TailIntegralSpec read_levy_measure(Reader& r) {
  const int d = r.integer("d");
  const std::string form = r.required("form");
  std::vector<int> signs;
  if (auto s = r.optional("signs")) signs = parse_signs(*s);
  const double eps = r.number("truncation", 0.0);
  if (form == "radial-simplex") {
    return TailIntegralSpec::radial_simplex(read_radial(r, "radial.", d, d), d, signs, eps);
  }
  if (form == "axis") {
    if (d < 1) throw ParseError("spec: axis measure needs d >= 1");
    const RadialMeasure margin = read_radial(r, "radial.", 1.0, d);
    return TailIntegralSpec::axis(std::vector<RadialMeasure>(static_cast<std::size_t>(d), margin), signs, eps);
  }
  throw ParseError("spec: unknown levy measure form '" + form + "'");
}

void emit(std::ostringstream& out, const std::string& key, const std::string& value) {
  out << key << ": " << value << '\n';
}

void emit_descriptor(std::ostringstream& out, const std::string& p, const GeneratorDescriptor& g) {
  if (g.family == "williamson") throw ArgumentError("to_spec_text: Williamson generators have no text form");
  emit(out, p + "side", g.side);
  emit(out, p + "family", g.family);
  emit(out, p + "d", std::to_string(g.d));
  for (const auto& [k, v] : g.params) emit(out, p + k, format_double(v));
  if (!g.table.empty()) {
    std::string t;
    for (std::size_t i = 0; i < g.table.size(); ++i) {
      if (i) t += ", ";
      t += format_double(g.table[i].first) + ":" + format_double(g.table[i].second);
    }
    emit(out, p + "table", t);
  }
  if (!g.transform.empty()) emit(out, p + "transform", g.transform);
  if (g.base) emit_descriptor(out, p + "base.", *g.base);
}

void emit_levy_copula(std::ostringstream& out, const std::string& p, const LevyCopulaSpec& f);

void emit_copula(std::ostringstream& out, const std::string& p, const CopulaSpec& c) {
  if (c.family() == CopulaFamily::custom) {
    if (!c.levy_origin()) throw ArgumentError("to_spec_text: custom copula '" + c.name() + "' has no text form");
    emit(out, p + "family", "from-levy");
    emit(out, p + "d", std::to_string(c.dimension()));
    emit_levy_copula(out, p + "levy.", *c.levy_origin());
    return;
  }
  emit(out, p + "family", c.name());
  emit(out, p + "d", std::to_string(c.dimension()));
  if (c.family() == CopulaFamily::archimedean) emit_descriptor(out, p + "generator.", c.generator()->descriptor());
}

void emit_levy_copula(std::ostringstream& out, const std::string& p, const LevyCopulaSpec& f) {
  emit(out, p + "family", f.name());
  emit(out, p + "d", std::to_string(f.dimension()));
  if (f.family() == LevyFamily::archimedean_levy) emit_descriptor(out, p + "generator.", f.generator()->descriptor());
  if (f.family() == LevyFamily::from_proper) emit_copula(out, p + "copula.", *f.proper());
}

}  // namespace

SpecEntries parse_spec_entries(const std::string& text) {
  SpecEntries entries;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw ParseError("spec line " + std::to_string(number) + ": expected 'key: value'");
    }
    const std::string key = trim(line.substr(0, colon));
    const std::string value = trim(line.substr(colon + 1));
    if (!valid_key(key)) throw ParseError("spec line " + std::to_string(number) + ": invalid key '" + key + "'");
    if (value.empty()) throw ParseError("spec line " + std::to_string(number) + ": empty value for '" + key + "'");
    if (!entries.emplace(key, value).second) {
      throw ParseError("spec line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
  }
  return entries;
}

SpecObject parse_spec(const std::string& text) {
  const SpecEntries entries = parse_spec_entries(text);
  Reader r(entries);
  const std::string object = r.required("object");
  auto build = [&]() -> SpecObject {
    if (object == "generator") return read_generator(r, "", 2);
    if (object == "copula") return read_copula(r, "", std::nullopt);
    if (object == "levy-copula") return read_levy_copula(r, "", std::nullopt);
    if (object == "levy-measure") return read_levy_measure(r);
    throw ParseError("spec: unknown object '" + object + "'");
  };
  SpecObject out = build();
  r.finish();
  return out;
}

SpecObject load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spec file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string to_spec_text(const ProperGenerator& g) {
  std::ostringstream out;
  emit(out, "object", "generator");
  emit_descriptor(out, "", g.descriptor());
  return out.str();
}

std::string to_spec_text(const LevyGenerator& g) {
  std::ostringstream out;
  emit(out, "object", "generator");
  emit_descriptor(out, "", g.descriptor());
  return out.str();
}

std::string to_spec_text(const CopulaSpec& c) {
  std::ostringstream out;
  emit(out, "object", "copula");
  emit_copula(out, "", c);
  return out.str();
}

std::string to_spec_text(const LevyCopulaSpec& f) {
  std::ostringstream out;
  emit(out, "object", "levy-copula");
  emit_levy_copula(out, "", f);
  return out.str();
}

std::string to_spec_text(const SpecObject& o) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TailIntegralSpec>) {
          throw ArgumentError("to_spec_text: levy measures are input only");
        } else {
          return to_spec_text(v);
        }
      },
      o);
}

int spec_dimension(const SpecObject& o) {
  return std::visit([](const auto& v) { return v.dimension(); }, o);
}

std::string spec_object_name(const SpecObject& o) {
  switch (o.index()) {
    case 0:
    case 1: return "generator";
    case 2: return "copula";
    case 3: return "levy-copula";
    default: return "levy-measure";
  }
}

}  // namespace levycop
