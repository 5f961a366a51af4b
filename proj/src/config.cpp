#include "clansim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "clansim/continuous_models.hpp"
#include "clansim/contours.hpp"
#include "clansim/error.hpp"
#include "clansim/random_cluster.hpp"
#include "clansim/toy.hpp"

namespace clansim {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
  throw Error(ErrorKind::Config, "config error at " + path + ": " + reason);
}

class LineParser {
public:
  LineParser(std::string_view text, int line) : text_(text), line_(line) {}

  Value value() {
    skip();
    if (pos_ >= text_.size()) {
      error("missing value");
    }
    const char c = text_[pos_];
    if (c == '"') {
      return Value::of(string());
    }
    if (c == '[') {
      ++pos_;
      Value v;
      v.kind = Value::Kind::Array;
      skip();
      if (peek(']')) {
        ++pos_;
        return v;
      }
      while (true) {
        v.items.push_back(value());
        skip();
        if (peek(',')) {
          ++pos_;
          continue;
        }
        expect(']');
        return v;
      }
    }
    if (c == '{') {
      ++pos_;
      Value v;
      v.kind = Value::Kind::Table;
      skip();
      if (peek('}')) {
        ++pos_;
        return v;
      }
      while (true) {
        skip();
        std::string k = key();
        skip();
        expect('=');
        Value item = value();
        if (std::any_of(v.fields.begin(), v.fields.end(),
                        [&](const auto& f) { return f.first == k; })) {
          error("duplicate key '" + k + "' in inline table");
        }
        v.fields.emplace_back(std::move(k), std::move(item));
        skip();
        if (peek(',')) {
          ++pos_;
          continue;
        }
        expect('}');
        return v;
      }
    }
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ',' && text_[end] != ']' && text_[end] != '}' &&
           !std::isspace(static_cast<unsigned char>(text_[end]))) {
      ++end;
    }
    const std::string token(text_.substr(pos_, end - pos_));
    pos_ = end;
    if (token == "true" || token == "false") {
      return Value::of(token == "true");
    }
    return number(token);
  }

  std::string key() {
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
      ++end;
    }
    if (end == pos_) {
      error("expected a key");
    }
    std::string k(text_.substr(pos_, end - pos_));
    pos_ = end;
    return k;
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool done() {
    skip();
    return pos_ >= text_.size();
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  void expect(char c) {
    skip();
    if (!peek(c)) {
      error(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  [[noreturn]] void error(const std::string& what) const {
    throw Error(ErrorKind::Config,
                "config error at line " + std::to_string(line_) + ": " + what);
  }

private:
  std::string string() {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
        ++pos_;
      }
      out += text_[pos_++];
    }
    if (pos_ >= text_.size()) {
      error("unterminated string");
    }
    ++pos_;
    return out;
  }

  Value number(const std::string& token) const {
    const bool looks_integral = !token.empty() &&
                                token.find_first_of(".eEinfa") == std::string::npos;
    if (looks_integral) {
      std::int64_t i = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), i);
      if (ec == std::errc() && ptr == token.data() + token.size()) {
        return Value::of_int(i);
      }
    }
    char* end = nullptr;
    const double d = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size()) {
      error("cannot read value '" + token + "'");
    }
    return Value::of(d);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
};

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

/// Typed access with key-path diagnostics.
class Reader {
public:
  Reader(std::string section, const Table& table) : section_(std::move(section)), table_(table) {}

  const Value* find(const std::string& key) const {
    for (const auto& [k, v] : table_) {
      if (k == key) {
        return &v;
      }
    }
    return nullptr;
  }

  const Value& need(const std::string& key) const {
    const Value* v = find(key);
    if (v == nullptr) {
      fail(path(key), "missing required key");
    }
    return *v;
  }

  double number(const std::string& key) const { return as_number(need(key), path(key)); }

  std::int64_t integer(const std::string& key) const { return as_integer(need(key), path(key)); }

  std::string string(const std::string& key) const {
    const Value& v = need(key);
    if (v.kind != Value::Kind::String) {
      fail(path(key), "expected a string");
    }
    return v.text;
  }

  bool boolean(const std::string& key) const {
    const Value& v = need(key);
    if (v.kind != Value::Kind::Bool) {
      fail(path(key), "expected true or false");
    }
    return v.boolean;
  }

  void only(std::initializer_list<const char*> allowed) const {
    for (const auto& [k, v] : table_) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
        fail(path(k), "unknown key");
      }
    }
  }

  std::string path(const std::string& key) const { return section_ + "." + key; }

  static double as_number(const Value& v, const std::string& path) {
    if (v.kind != Value::Kind::Number) {
      fail(path, "expected a number");
    }
    return v.number;
  }

  static std::int64_t as_integer(const Value& v, const std::string& path) {
    if (v.kind != Value::Kind::Number || !v.integral) {
      fail(path, "expected an integer");
    }
    return v.integer;
  }

private:
  std::string section_;
  const Table& table_;
};

void positive(double v, const std::string& path) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(path, "must be finite and positive");
  }
}

std::vector<std::pair<std::string, double>> toy_weights(const Reader& r) {
  const Value& w = r.need("weights");
  if (w.kind != Value::Kind::Table || w.fields.empty()) {
    fail(r.path("weights"), "expected a nonempty inline table {label = weight, ...}");
  }
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [label, v] : w.fields) {
    const double x = Reader::as_number(v, r.path("weights." + label));
    positive(x, r.path("weights." + label));
    out.emplace_back(label, x);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> toy_pairs(const Reader& r) {
  std::vector<std::pair<std::string, std::string>> out;
  const Value* p = r.find("pairs");
  if (p == nullptr) {
    return out;
  }
  if (p->kind != Value::Kind::Array) {
    fail(r.path("pairs"), "expected an array of [label, label] pairs");
  }
  for (const auto& item : p->items) {
    if (item.kind != Value::Kind::Array || item.items.size() != 2 ||
        item.items[0].kind != Value::Kind::String || item.items[1].kind != Value::Kind::String) {
      fail(r.path("pairs"), "expected an array of [label, label] pairs");
    }
    out.emplace_back(item.items[0].text, item.items[1].text);
  }
  return out;
}

LengthLaw length_law(const Reader& r) {
  const Value& v = r.need("pi");
  if (v.kind != Value::Kind::Table) {
    fail(r.path("pi"), "expected an inline table {kind = ..., ...}");
  }
  Reader pi(r.path("pi"), v.fields);
  const std::string kind = pi.string("kind");
  if (kind == "fixed") {
    pi.only({"kind", "length"});
    positive(pi.number("length"), pi.path("length"));
    return LengthLaw::fixed(pi.number("length"));
  }
  if (kind == "uniform") {
    pi.only({"kind", "max"});
    positive(pi.number("max"), pi.path("max"));
    return LengthLaw::uniform(pi.number("max"));
  }
  if (kind == "truncexp") {
    pi.only({"kind", "mean", "max"});
    positive(pi.number("mean"), pi.path("mean"));
    if (pi.find("max") == nullptr) {
      fail(pi.path("max"), "unbounded length law; a cutoff 'max' is required");
    }
    positive(pi.number("max"), pi.path("max"));
    return LengthLaw::truncated_exponential(pi.number("mean"), pi.number("max"));
  }
  fail(pi.path("kind"), "unknown length law '" + kind + "' (fixed, uniform, truncexp)");
}

GrainGeometry grain(const Reader& r) {
  const Value& v = r.need("grain");
  if (v.kind != Value::Kind::Table) {
    fail(r.path("grain"), "expected an inline table {shape = ..., size = ...}");
  }
  Reader g(r.path("grain"), v.fields);
  g.only({"shape", "size"});
  const std::string shape = g.string("shape");
  const double size = g.number("size");
  positive(size, g.path("size"));
  if (shape == "disc") {
    return GrainGeometry::disc(size);
  }
  if (shape == "square") {
    return GrainGeometry::square(size);
  }
  fail(g.path("shape"), "unknown grain shape '" + shape + "' (disc, square)");
}

void fill_default(Table& t, const std::string& key, Value v) {
  if (std::none_of(t.begin(), t.end(), [&](const auto& f) { return f.first == key; })) {
    t.emplace_back(key, std::move(v));
  }
}

/// Checks the [model] keys of `spec` and fills model defaults.
void validate_model(RunSpec& spec) {
  Reader r("model", spec.model);
  const std::string& id = spec.model_id;
  if (id == "toy_hardcore") {
    r.only({"weights", "pairs"});
    toy_weights(r);
    toy_pairs(r);
  } else if (id == "toy_free") {
    r.only({"weights"});
    toy_weights(r);
  } else if (id == "ising_contours") {
    r.only({"beta"});
    positive(r.number("beta"), r.path("beta"));
  } else if (id == "random_cluster") {
    r.only({"nx", "ny", "p", "q"});
    r.integer("nx");
    r.integer("ny");
    const double p = r.number("p");
    if (!(p > 0.0 && p < 1.0)) {
      fail(r.path("p"), "must lie in (0, 1)");
    }
    positive(r.number("q"), r.path("q"));
  } else if (id == "area") {
    r.only({"kappa", "phi", "grain"});
    positive(r.number("kappa"), r.path("kappa"));
    positive(r.number("phi"), r.path("phi"));
    grain(r);
  } else if (id == "strauss") {
    r.only({"exp_beta1", "beta2", "hardcore", "radius", "base_rate"});
    positive(r.number("exp_beta1"), r.path("exp_beta1"));
    positive(r.number("radius"), r.path("radius"));
    fill_default(spec.model, "base_rate", Value::of(1.0));
    fill_default(spec.model, "hardcore", Value::of(false));
    Reader again("model", spec.model);
    positive(again.number("base_rate"), again.path("base_rate"));
    if (!again.boolean("hardcore")) {
      const double b2 = again.number("beta2");
      if (b2 > 0.0) {
        fail(again.path("beta2"), "beta2 > 0 is not integrable (attractive Strauss)");
      }
    } else if (again.find("beta2") != nullptr) {
      fail(again.path("beta2"), "give either beta2 or hardcore = true, not both");
    }
  } else if (id == "loss_network") {
    r.only({"kappa", "capacity", "pi"});
    positive(r.number("kappa"), r.path("kappa"));
    if (r.integer("capacity") < 1) {
      fail(r.path("capacity"), "must be at least 1");
    }
    length_law(r);
  } else {
    fail("model.id", "unknown model '" + id +
                         "' (toy_hardcore, toy_free, ising_contours, random_cluster, area, "
                         "strauss, loss_network)");
  }
}

WindowSpec parse_window(const Table& t) {
  for (const auto& [key, v] : t) {
    if (key != "box" && key != "interval" && key != "sites" && key != "whole") {
      fail("window." + key, "unknown key");
    }
  }
  if (t.size() != 1) {
    fail("window", "expected exactly one of box, interval, sites, whole");
  }
  const auto& [key, v] = t.front();
  WindowSpec w;
  auto numbers = [&](std::size_t count) {
    if (v.kind != Value::Kind::Array || v.items.size() != count) {
      fail("window." + key, "expected an array of " + std::to_string(count) + " numbers");
    }
    for (const auto& item : v.items) {
      w.bounds.push_back(Reader::as_number(item, "window." + key));
      if (!std::isfinite(w.bounds.back())) {
        fail("window." + key, "bounds must be finite");
      }
    }
  };
  if (key == "box") {
    w.kind = WindowKind::Box;
    numbers(4);
    if (w.bounds[0] > w.bounds[2] || w.bounds[1] > w.bounds[3]) {
      fail("window.box", "expected [x0, y0, x1, y1] with x0 <= x1 and y0 <= y1");
    }
  } else if (key == "interval") {
    w.kind = WindowKind::Interval;
    numbers(2);
    if (w.bounds[0] > w.bounds[1]) {
      fail("window.interval", "expected [lo, hi] with lo <= hi");
    }
  } else if (key == "sites") {
    w.kind = WindowKind::Sites;
    if (v.kind != Value::Kind::Array || v.items.empty()) {
      fail("window.sites", "expected a nonempty array of labels");
    }
    for (const auto& item : v.items) {
      if (item.kind != Value::Kind::String) {
        fail("window.sites", "expected labels as strings");
      }
      w.sites.push_back(item.text);
    }
  } else if (key == "whole") {
    w.kind = WindowKind::Whole;
    if (v.kind != Value::Kind::Bool || !v.boolean) {
      fail("window.whole", "expected true");
    }
  } else {
    fail("window." + key, "unknown key");
  }
  return w;
}

std::string render_number(double d) {
  if (std::isinf(d)) {
    return d > 0 ? "inf" : "-inf";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  std::string s = buf;
  if (s.find_first_of(".en") == std::string::npos) {
    s += ".0";
  }
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

Value Value::of(bool b) {
  Value v;
  v.kind = Kind::Bool;
  v.boolean = b;
  return v;
}

Value Value::of(double d) {
  Value v;
  v.kind = Kind::Number;
  v.number = d;
  return v;
}

Value Value::of_int(std::int64_t i) {
  Value v;
  v.kind = Kind::Number;
  v.number = static_cast<double>(i);
  v.integral = true;
  v.integer = i;
  return v;
}

Value Value::of(std::string s) {
  Value v;
  v.kind = Kind::String;
  v.text = std::move(s);
  return v;
}

std::string Value::render() const {
  switch (kind) {
    case Kind::Bool:
      return boolean ? "true" : "false";
    case Kind::Number:
      return integral ? std::to_string(integer) : render_number(number);
    case Kind::String:
      return quote(text);
    case Kind::Array: {
      std::string out = "[";
      for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? ", " : "") + items[i].render();
      }
      return out + "]";
    }
    case Kind::Table: {
      std::string out = "{";
      for (std::size_t i = 0; i < fields.size(); ++i) {
        out += (i ? ", " : "") + fields[i].first + " = " + fields[i].second.render();
      }
      return out + "}";
    }
  }
  return "";
}

std::vector<std::pair<std::string, Table>> parse_document(const std::string& text) {
  std::vector<std::pair<std::string, Table>> sections;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = strip_comment(raw);
    LineParser p(body, line);
    if (p.done()) {
      continue;
    }
    p.skip();
    if (p.peek('[')) {
      p.expect('[');
      p.skip();
      std::string name = p.key();
      p.expect(']');
      if (!p.done()) {
        p.error("unexpected text after section header");
      }
      for (const auto& s : sections) {
        if (s.first == name) {
          fail(name, "duplicate section");
        }
      }
      sections.emplace_back(std::move(name), Table{});
      continue;
    }
    std::string key = p.key();
    p.expect('=');
    Value v = p.value();
    if (!p.done()) {
      p.error("unexpected text after value");
    }
    if (sections.empty()) {
      fail(key, "key outside of any section");
    }
    auto& [section, table] = sections.back();
    for (const auto& f : table) {
      if (f.first == key) {
        fail(section + "." + key, "duplicate key");
      }
    }
    table.emplace_back(std::move(key), std::move(v));
  }
  return sections;
}

bool RunSpec::operator==(const RunSpec& o) const {
  return model_id == o.model_id && model == o.model && window == o.window &&
         limits.max_depth == o.limits.max_depth && limits.max_size == o.limits.max_size &&
         limits.size_cutoff == o.limits.size_cutoff && multiplicity_cap == o.multiplicity_cap &&
         seed == o.seed && n == o.n && threads == o.threads && force == o.force &&
         margin == o.margin && level == o.level && oracle == o.oracle &&
         plot_index == o.plot_index;
}

RunSpec parse_config(const std::string& text) {
  RunSpec spec;
  bool have_model = false;
  bool have_window = false;
  for (auto& [section, table] : parse_document(text)) {
    if (section == "model") {
      have_model = true;
      Reader r("model", table);
      spec.model_id = r.string("id");
      for (auto& f : table) {
        if (f.first != "id") {
          spec.model.push_back(f);
        }
      }
    } else if (section == "window") {
      have_window = true;
      spec.window = parse_window(table);
    } else if (section == "limits") {
      Reader r("limits", table);
      r.only({"max_depth", "max_size", "size_cutoff", "multiplicity_cap"});
      if (r.find("max_depth")) {
        spec.limits.max_depth = r.number("max_depth");
        positive(spec.limits.max_depth, r.path("max_depth"));
      }
      if (r.find("max_size")) {
        const auto v = r.integer("max_size");
        if (v < 1) {
          fail(r.path("max_size"), "must be at least 1");
        }
        spec.limits.max_size = static_cast<std::size_t>(v);
      }
      if (r.find("size_cutoff")) {
        spec.limits.size_cutoff = r.number("size_cutoff");
        positive(spec.limits.size_cutoff, r.path("size_cutoff"));
      }
      if (r.find("multiplicity_cap")) {
        const auto v = r.integer("multiplicity_cap");
        if (v < 1 || v > 64) {
          fail(r.path("multiplicity_cap"), "must lie in [1, 64]");
        }
        spec.multiplicity_cap = static_cast<int>(v);
      }
    } else if (section == "run") {
      Reader r("run", table);
      r.only({"seed", "n", "threads", "force", "margin", "level", "oracle", "plot_index"});
      if (r.find("seed")) {
        const auto v = r.integer("seed");
        if (v < 0) {
          fail(r.path("seed"), "must be nonnegative");
        }
        spec.seed = static_cast<std::uint64_t>(v);
      }
      if (r.find("n")) {
        const auto v = r.integer("n");
        if (v < 0) {
          fail(r.path("n"), "must be nonnegative");
        }
        spec.n = static_cast<std::uint64_t>(v);
      }
      if (r.find("threads")) {
        const auto v = r.integer("threads");
        if (v < 1 || v > 256) {
          fail(r.path("threads"), "must lie in [1, 256]");
        }
        spec.threads = static_cast<int>(v);
      }
      if (r.find("force")) {
        spec.force = r.boolean("force");
      }
      if (r.find("margin")) {
        spec.margin = r.number("margin");
        if (!(spec.margin >= 0.0) || !std::isfinite(spec.margin)) {
          fail(r.path("margin"), "must be finite and nonnegative");
        }
      }
      if (r.find("level")) {
        spec.level = r.number("level");
        if (!(spec.level > 0.0 && spec.level < 1.0)) {
          fail(r.path("level"), "must lie in (0, 1)");
        }
      }
      if (r.find("oracle")) {
        spec.oracle = r.string("oracle");
        if (spec.oracle != "exact" && spec.oracle != "stationary") {
          fail(r.path("oracle"), "expected \"exact\" or \"stationary\"");
        }
      }
      if (r.find("plot_index")) {
        const auto v = r.integer("plot_index");
        if (v < 0) {
          fail(r.path("plot_index"), "must be nonnegative");
        }
        spec.plot_index = static_cast<int>(v);
      }
    } else {
      fail(section, "unknown section (model, window, limits, run)");
    }
  }
  if (!have_model) {
    fail("model", "missing section");
  }
  validate_model(spec);
  if (!have_window) {
    spec.window = WindowSpec{};
  }
  // Constructing the model surfaces the remaining constraint violations.
  std::unique_ptr<Model> model;
  try {
    model = make_model(spec);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) {
      throw;
    }
    fail("model", e.what());
  }
  try {
    make_window(spec, *model);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) {
      throw;
    }
    fail("window", e.what());
  }
  return spec;
}

std::string serialize_config(const RunSpec& spec) {
  std::ostringstream out;
  out << "[model]\nid = " << quote(spec.model_id) << '\n';
  for (const auto& [k, v] : spec.model) {
    out << k << " = " << v.render() << '\n';
  }
  out << "\n[window]\n";
  auto bounds = [&] {
    std::string s = "[";
    for (std::size_t i = 0; i < spec.window.bounds.size(); ++i) {
      s += (i ? ", " : "") + render_number(spec.window.bounds[i]);
    }
    return s + "]";
  };
  switch (spec.window.kind) {
    case WindowKind::Box:
      out << "box = " << bounds() << '\n';
      break;
    case WindowKind::Interval:
      out << "interval = " << bounds() << '\n';
      break;
    case WindowKind::Sites: {
      out << "sites = [";
      for (std::size_t i = 0; i < spec.window.sites.size(); ++i) {
        out << (i ? ", " : "") << quote(spec.window.sites[i]);
      }
      out << "]\n";
      break;
    }
    case WindowKind::Whole:
      out << "whole = true\n";
      break;
  }
  out << "\n[limits]\nmax_depth = " << render_number(spec.limits.max_depth)
      << "\nmax_size = " << spec.limits.max_size
      << "\nsize_cutoff = " << render_number(spec.limits.size_cutoff)
      << "\nmultiplicity_cap = " << spec.multiplicity_cap << '\n';
  out << "\n[run]\nseed = " << spec.seed << "\nn = " << spec.n << "\nthreads = " << spec.threads
      << "\nforce = " << (spec.force ? "true" : "false");
  if (spec.margin >= 0.0) {
    out << "\nmargin = " << render_number(spec.margin);
  }
  out << "\nlevel = " << render_number(spec.level) << "\noracle = " << quote(spec.oracle)
      << "\nplot_index = " << spec.plot_index << '\n';
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open " + path);
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::unique_ptr<Model> make_model(const RunSpec& spec) {
  Reader r("model", spec.model);
  const std::string& id = spec.model_id;
  if (id == "toy_hardcore") {
    return std::make_unique<ToyModel>(toy_hardcore(toy_weights(r), toy_pairs(r)));
  }
  if (id == "toy_free") {
    return std::make_unique<ToyModel>(toy_free(toy_weights(r)));
  }
  if (id == "ising_contours") {
    const double k = spec.limits.size_cutoff;
    if (k != std::floor(k) || k > 12.0) {
      fail("limits.size_cutoff", "contour cutoff must be an integer of at most 12");
    }
    return std::make_unique<ContourModel>(r.number("beta"), static_cast<int>(k));
  }
  if (id == "random_cluster") {
    return std::make_unique<RandomClusterModel>(static_cast<int>(r.integer("nx")),
                                                static_cast<int>(r.integer("ny")), r.number("p"),
                                                r.number("q"));
  }
  if (id == "area") {
    return std::make_unique<AreaModel>(r.number("kappa"), r.number("phi"), grain(r));
  }
  if (id == "strauss") {
    const bool hard = r.boolean("hardcore");
    return std::make_unique<StraussModel>(r.number("exp_beta1"), hard ? 0.0 : r.number("beta2"),
                                          hard, r.number("radius"), r.number("base_rate"));
  }
  if (id == "loss_network") {
    return std::make_unique<LossNetworkModel>(r.number("kappa"), length_law(r),
                                              static_cast<int>(r.integer("capacity")));
  }
  fail("model.id", "unknown model '" + id + "'");
}

Window make_window(const RunSpec& spec, const Model& model) {
  const auto& w = spec.window;
  const bool toy = dynamic_cast<const ToyModel*>(&model) != nullptr;
  const bool loss = dynamic_cast<const LossNetworkModel*>(&model) != nullptr;
  const bool rc = dynamic_cast<const RandomClusterModel*>(&model) != nullptr;
  switch (w.kind) {
    case WindowKind::Box:
      if (toy || loss) {
        fail("window.box", "model " + model.id() + " does not take a box window");
      }
      return BoxWindow{Eigen::AlignedBox2d(Eigen::Vector2d(w.bounds[0], w.bounds[1]),
                                           Eigen::Vector2d(w.bounds[2], w.bounds[3]))};
    case WindowKind::Interval:
      if (!loss) {
        fail("window.interval", "only the loss network takes an interval window");
      }
      return IntervalWindow{w.bounds[0], w.bounds[1]};
    case WindowKind::Sites: {
      const auto* t = dynamic_cast<const ToyModel*>(&model);
      if (t == nullptr) {
        fail("window.sites", "only toy models take a site window");
      }
      SiteWindow out;
      for (const auto& label : w.sites) {
        try {
          out.sites.push_back(t->site(label).id);
        } catch (const Error&) {
          fail("window.sites", "unknown label '" + label + "'");
        }
      }
      return out;
    }
    case WindowKind::Whole:
      if (!toy && !rc) {
        fail("window", "model " + model.id() + " needs a bounded window");
      }
      return WholeWindow{};
  }
  return WholeWindow{};
}

double effective_margin(const RunSpec& spec, const Model& model) {
  return spec.margin >= 0.0 ? spec.margin : model.interaction_horizon();
}

}  // namespace clansim
