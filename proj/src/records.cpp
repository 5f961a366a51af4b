#include "clansim/records.hpp"

#include <sstream>

#include <json.hpp>

#include "clansim/error.hpp"
#include "clansim/random_cluster.hpp"
#include "clansim/toy.hpp"

namespace clansim {
namespace {

using json = nlohmann::ordered_json;

json to_json(const Individual& g, const Model& m) {
  json j;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Germ>) {
          j["kind"] = "germ";
          j["x"] = v.x.x();
          j["y"] = v.x.y();
        } else if constexpr (std::is_same_v<T, Call>) {
          j["kind"] = "call";
          j["x"] = v.x;
          j["length"] = v.length;
        } else if constexpr (std::is_same_v<T, Contour>) {
          j["kind"] = "contour";
          j["anchor"] = {v.anchor.x(), v.anchor.y()};
          j["shape"] = v.shape;
        } else if constexpr (std::is_same_v<T, Site>) {
          j["kind"] = "site";
          j["id"] = v.id;
          if (const auto* t = dynamic_cast<const ToyModel*>(&m)) {
            j["label"] = t->label(v.id);
          }
        } else {
          j["kind"] = "animal";
          j["id"] = v.id;
          if (const auto* rc = dynamic_cast<const RandomClusterModel*>(&m)) {
            j["bonds"] = rc->animal(v).bonds;
          }
        }
      },
      g);
  return j;
}

Individual from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "germ") {
    return Germ{Eigen::Vector2d(j.at("x").get<double>(), j.at("y").get<double>())};
  }
  if (kind == "call") {
    return Call{j.at("x").get<double>(), j.at("length").get<double>()};
  }
  if (kind == "contour") {
    const auto& a = j.at("anchor");
    return Contour{Eigen::Vector2i(a.at(0).get<int>(), a.at(1).get<int>()),
                   j.at("shape").get<std::uint32_t>()};
  }
  if (kind == "site") {
    return Site{j.at("id").get<std::uint32_t>()};
  }
  if (kind == "animal") {
    return Animal{j.at("id").get<std::uint32_t>()};
  }
  throw Error(ErrorKind::Io, "unknown individual kind '" + kind + "'");
}

json window_json(const WindowSpec& w) {
  json j;
  switch (w.kind) {
    case WindowKind::Box:
      j["box"] = w.bounds;
      break;
    case WindowKind::Interval:
      j["interval"] = w.bounds;
      break;
    case WindowKind::Sites:
      j["sites"] = w.sites;
      break;
    case WindowKind::Whole:
      j["whole"] = true;
      break;
  }
  return j;
}

std::string canonical_config(RunSpec spec) {
  spec.threads = 1;
  return serialize_config(spec);
}

}  // namespace

std::string sample_header(const RunSpec& spec, const std::string& kind) {
  json j;
  j["format"] = "clansim-samples";
  j["version"] = 1;
  j["kind"] = kind;
  j["model"] = spec.model_id;
  j["window"] = window_json(spec.window);
  j["seed"] = spec.seed;
  j["n"] = spec.n;
  j["config"] = canonical_config(spec);
  return j.dump();
}

std::string sample_record(const WindowSample& s, const RunSpec& spec, const Model& m) {
  json j;
  j["index"] = s.index;
  j["model"] = spec.model_id;
  j["window"] = window_json(spec.window);
  json individuals = json::array();
  for (const auto& g : s.configuration.items) {
    individuals.push_back(to_json(g, m));
  }
  j["individuals"] = std::move(individuals);
  j["clan_depth"] = s.stats.depth;
  j["clan_size"] = s.stats.cylinders;
  j["truncated"] = s.truncated;
  return j.dump();
}

std::string ledger_header(const RunSpec& spec) {
  json j;
  j["format"] = "clansim-ledger";
  j["version"] = 1;
  j["model"] = spec.model_id;
  j["seed"] = spec.seed;
  j["n"] = spec.n;
  j["max_depth"] = spec.limits.max_depth;
  j["max_size"] = spec.limits.max_size;
  j["size_cutoff"] = spec.limits.size_cutoff;
  return j.dump();
}

std::string ledger_record(const LedgerEntry& e) {
  json j;
  j["index"] = e.index;
  j["depth"] = e.depth;
  j["generations"] = e.generations;
  j["uniforms"] = e.uniforms;
  j["max_basis_size"] = e.max_basis_size;
  j["cylinders"] = e.cylinders;
  j["truncation"] = truncation_name(e.truncation);
  return j.dump();
}

std::string ledger_summary_record(const LedgerSummary& s) {
  json j;
  j["runs"] = s.runs;
  j["truncated"] = s.truncated;
  j["p_depth"] = s.p_depth;
  j["p_size"] = s.p_size;
  j["p_cutoff"] = s.p_cutoff;
  j["p_exceed"] = s.p_exceed;
  j["bias_bound"] = s.bias;
  j["mean_depth"] = s.mean_depth;
  j["max_depth"] = s.max_depth;
  j["mean_uniforms"] = s.mean_uniforms;
  j["max_basis_size"] = s.max_basis_size;
  if (s.generation_tail.available) {
    j["generation_tail_slope"] = s.generation_tail.slope;
    j["generation_tail_se"] = s.generation_tail.se;
    j["generation_tail_points"] = s.generation_tail.points;
  }
  j["alpha"] = s.alpha;
  j["tail_consistent"] = s.tail_consistent;
  json out;
  out["summary"] = std::move(j);
  return out.dump();
}

std::string law_records(const ExactLaw& law, const RunSpec& spec, const Model& m) {
  std::ostringstream out;
  json header;
  header["format"] = "clansim-law";
  header["version"] = 1;
  header["model"] = spec.model_id;
  header["window"] = window_json(spec.window);
  header["normalization"] = law.normalization;
  header["truncated_mass"] = law.truncated_mass;
  header["config"] = canonical_config(spec);
  out << header.dump() << '\n';
  for (std::size_t i = 0; i < law.size(); ++i) {
    json j;
    j["key"] = law.keys[i];
    j["probability"] = law.probabilities[i];
    json individuals = json::array();
    for (const auto& g : law.configurations[i].items) {
      individuals.push_back(to_json(g, m));
    }
    j["individuals"] = std::move(individuals);
    out << j.dump() << '\n';
  }
  return out.str();
}

SampleFile parse_sample_file(const std::string& text) {
  SampleFile file;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  try {
    while (std::getline(in, line)) {
      ++number;
      if (line.empty()) {
        continue;
      }
      const json j = json::parse(line);
      if (number == 1) {
        if (j.value("format", "") != "clansim-samples") {
          throw Error(ErrorKind::Io, "not a sample file (missing header)");
        }
        file.kind = j.at("kind").get<std::string>();
        file.model = j.at("model").get<std::string>();
        file.config = j.at("config").get<std::string>();
        continue;
      }
      SampleRecord r;
      r.index = j.at("index").get<std::uint64_t>();
      for (const auto& g : j.at("individuals")) {
        r.configuration.items.push_back(from_json(g));
      }
      r.clan_depth = j.at("clan_depth").get<double>();
      r.clan_size = j.at("clan_size").get<std::uint64_t>();
      r.truncated = j.at("truncated").get<bool>();
      file.records.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, "sample file line " + std::to_string(number) + ": " + e.what());
  }
  if (number == 0) {
    throw Error(ErrorKind::Io, "empty sample file (no header)");
  }
  return file;
}

std::string individual_json(const Individual& g, const Model& m) { return to_json(g, m).dump(); }

Individual individual_from_json(const std::string& text) {
  try {
    return from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("bad individual record: ") + e.what());
  }
}

}  // namespace clansim
