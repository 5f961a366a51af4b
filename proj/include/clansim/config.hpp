#ifndef CLANSIM_CONFIG_HPP
#define CLANSIM_CONFIG_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "clansim/clan.hpp"

namespace clansim {

/// Value of the configuration grammar: bool, number, string, array or inline
/// table. Integers are numbers with `integral` set.
struct Value {
  enum class Kind { Bool, Number, String, Array, Table };

  Kind kind = Kind::Number;
  bool boolean = false;
  double number = 0.0;
  bool integral = false;
  std::int64_t integer = 0;  // exact value when integral
  std::string text;
  std::vector<Value> items;
  std::vector<std::pair<std::string, Value>> fields;

  static Value of(bool b);
  static Value of(double d);
  static Value of_int(std::int64_t i);
  static Value of(std::string s);

  bool operator==(const Value&) const = default;
  std::string render() const;
};

using Table = std::vector<std::pair<std::string, Value>>;

/// Sectioned key-value document: `[section]` headers, `key = value` lines,
/// `#` comments. Throws Error(Config) naming the line on syntax errors and
/// the key path on duplicate keys or sections.
std::vector<std::pair<std::string, Table>> parse_document(const std::string& text);

enum class WindowKind { Box, Interval, Sites, Whole };

struct WindowSpec {
  WindowKind kind = WindowKind::Whole;
  std::vector<double> bounds;        // box: x0 y0 x1 y1; interval: lo hi
  std::vector<std::string> sites;

  bool operator==(const WindowSpec&) const = default;
};

struct RunSpec {
  std::string model_id;
  Table model;  // validated model parameters, without `id`
  WindowSpec window;
  Limits limits;
  int multiplicity_cap = 6;
  std::uint64_t seed = 1;
  std::uint64_t n = 1000;
  int threads = 1;
  bool force = false;
  double margin = -1.0;  // finite-volume dilation; negative means the interaction horizon
  double level = 0.01;
  std::string oracle = "exact";  // exact | stationary
  int plot_index = 0;

  bool operator==(const RunSpec& o) const;
};

/// Parses and validates a run specification. Every diagnostic is a single
/// line of the form "config error at <section>.<key>: <reason>".
RunSpec parse_config(const std::string& text);

/// Canonical document; parse_config(serialize_config(s)) == s.
std::string serialize_config(const RunSpec& spec);

std::string read_file(const std::string& path);

/// Builds the model described by the spec.
std::unique_ptr<Model> make_model(const RunSpec& spec);

/// Builds the window, resolving site labels against the model.
Window make_window(const RunSpec& spec, const Model& model);

/// The finite-volume margin: spec.margin, or the model's interaction horizon.
double effective_margin(const RunSpec& spec, const Model& model);

}  // namespace clansim

#endif  // CLANSIM_CONFIG_HPP
