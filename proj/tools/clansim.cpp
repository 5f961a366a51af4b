#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "clansim/config.hpp"
#include "clansim/diagnostics.hpp"
#include "clansim/error.hpp"
#include "clansim/finite_volume.hpp"
#include "clansim/oracle.hpp"
#include "clansim/plot.hpp"
#include "clansim/records.hpp"
#include "clansim/sampler.hpp"

namespace {

using namespace clansim;

enum Exit { kOk = 0, kNotCertified = 1, kUsage = 2, kRuntime = 3 };

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> n;
  std::optional<int> threads;
  std::optional<std::uint64_t> index;
  bool force = false;
  std::string out;
  std::vector<std::string> files;
};

RunSpec load(const Options& o, const std::string& fallback_text = {}) {
  RunSpec spec;
  if (!o.config.empty()) {
    spec = parse_config(read_file(o.config));
  } else if (!fallback_text.empty()) {
    spec = parse_config(fallback_text);
  } else {
    throw Error(ErrorKind::Config, "config error at --config: a configuration file is required");
  }
  if (o.seed) {
    spec.seed = *o.seed;
  }
  if (o.n) {
    spec.n = *o.n;
  }
  if (o.threads) {
    spec.threads = std::max(*o.threads, 1);
  }
  spec.force = spec.force || o.force;
  return spec;
}

void write(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::Io, "cannot write " + path);
  }
  out << text;
  if (!out) {
    throw Error(ErrorKind::Io, "write failed for " + path);
  }
}

std::string ledger_path(const std::string& out) {
  const std::string suffix = ".jsonl";
  if (out.size() > suffix.size() && out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return out.substr(0, out.size() - suffix.size()) + ".ledger.jsonl";
  }
  return out + ".ledger.jsonl";
}

int cmd_check(const Options& o) {
  const RunSpec spec = load(o);
  const auto model = make_model(spec);
  const SubcriticalityReport report = alpha(*model);
  std::cout << report.text();
  return report.subcritical ? kOk : kNotCertified;
}

int cmd_sample(const Options& o) {
  const RunSpec spec = load(o);
  const auto model = make_model(spec);
  const Window window = make_window(spec, *model);
  const SubcriticalityReport report = alpha(*model);
  if (!report.subcritical && !spec.force) {
    std::cerr << "model is not certified subcritical (alpha = " << report.alpha
              << "); rerun with --force to sample anyway\n";
    return kNotCertified;
  }
  const auto samples =
      sample_many(*model, window, spec.seed, spec.n, spec.limits, spec.force, spec.threads);

  std::ostringstream body;
  body << sample_header(spec, "perfect") << '\n';
  BiasLedger ledger;
  std::ostringstream ledger_text;
  ledger_text << ledger_header(spec) << '\n';
  std::size_t truncated = 0;
  for (const auto& s : samples) {
    body << sample_record(s, spec, *model) << '\n';
    ledger_text << ledger_record(ledger.record(s.index, s.stats)) << '\n';
    truncated += s.truncated ? 1 : 0;
  }
  if (ledger.size() > 0) {
    const auto summary = bias_ledger_summary(ledger, spec.limits.size_cutoff, report.alpha);
    ledger_text << ledger_summary_record(summary) << '\n';
    std::cerr << summary.text();
  }
  const std::string out = o.out.empty() ? "samples.jsonl" : o.out;
  write(out, body.str());
  write(ledger_path(out), ledger_text.str());
  std::cerr << "wrote " << samples.size() << " samples to " << out << " (" << truncated
            << " truncated)\n";
  return kOk;
}

int cmd_oracle(const Options& o) {
  const RunSpec spec = load(o);
  const auto model = make_model(spec);
  const Window window = make_window(spec, *model);
  if (spec.oracle == "exact") {
    const auto* d = dynamic_cast<const DiscreteModel*>(model.get());
    if (d == nullptr) {
      throw Error(ErrorKind::InvalidParameter,
                  "exact oracle needs a discrete model; use oracle = \"stationary\"");
    }
    const ExactLaw law = enumerate_exact(*d, window, spec.multiplicity_cap);
    write(o.out, law_records(law, spec, *model));
    std::cerr << "support " << law.size() << ", Z = " << law.normalization
              << ", truncated mass " << law.truncated_mass << '\n';
    return kOk;
  }
  const auto family = model->finite_family(model->dilate(window, effective_margin(spec, *model)));
  const RandomStream root(spec.seed);
  const auto runs = run_indexed<WindowSample>(spec.n, spec.threads, [&](std::uint64_t i) {
    RandomStream stream = root.derive(i);
    const StationaryRun run = stationary_window(*model, window, *family, stream, spec.limits.max_depth);
    WindowSample s;
    s.index = i;
    s.configuration = run.configuration;
    s.stats.depth = run.depth;
    s.stats.cylinders = run.cylinders;
    return s;
  });
  std::ostringstream body;
  body << sample_header(spec, "stationary") << '\n';
  for (const auto& s : runs) {
    body << sample_record(s, spec, *model) << '\n';
  }
  write(o.out, body.str());
  return kOk;
}

bool uses_configuration_keys(const std::string& model) {
  return model == "toy_hardcore" || model == "toy_free" || model == "random_cluster";
}

Histogram histogram(const SampleFile& f, bool keys) {
  Histogram h;
  for (const auto& r : f.records) {
    if (r.truncated) {
      continue;
    }
    ++h[keys ? configuration_key(r.configuration) : std::to_string(r.configuration.size())];
  }
  return h;
}

int cmd_compare(const Options& o) {
  if (o.files.empty() || o.files.size() > 2) {
    throw Error(ErrorKind::Config, "config error at compare: expected one or two sample files");
  }
  const SampleFile a = parse_sample_file(read_file(o.files[0]));
  std::ostringstream report;
  bool pass = false;
  if (o.files.size() == 2) {
    const SampleFile b = parse_sample_file(read_file(o.files[1]));
    if (a.model != b.model) {
      throw Error(ErrorKind::SupportMismatch,
                  "sample files come from different models: " + a.model + " vs " + b.model);
    }
    const RunSpec spec = load(o, a.config);
    const bool keys = uses_configuration_keys(a.model);
    const Histogram ha = histogram(a, keys);
    const Histogram hb = histogram(b, keys);
    const ChiSquare chi = chisq_two_sample(ha, hb);
    double na = 0.0;
    double nb = 0.0;
    for (const auto& [k, c] : ha) {
      na += static_cast<double>(c);
    }
    for (const auto& [k, c] : hb) {
      nb += static_cast<double>(c);
    }
    std::map<std::string, std::pair<double, double>> joint;
    for (const auto& [k, c] : ha) {
      joint[k].first = static_cast<double>(c) / na;
    }
    for (const auto& [k, c] : hb) {
      joint[k].second = static_cast<double>(c) / nb;
    }
    double tv = 0.0;
    for (const auto& [k, p] : joint) {
      tv += std::abs(p.first - p.second);
    }
    tv *= 0.5;
    pass = chi.p_value > spec.level;
    report.precision(8);
    report << "two-sample comparison of " << (keys ? "configurations" : "window counts") << ": "
           << "n = " << na << " vs " << nb << ", TV = " << tv << ", chi-square = " << chi.statistic
           << " on " << chi.dof << " dof, p = " << chi.p_value << " -> "
           << (pass ? "pass" : "fail") << " at level " << spec.level << '\n';
  } else {
    const RunSpec spec = load(o, a.config);
    if (spec.model_id != a.model) {
      throw Error(ErrorKind::SupportMismatch,
                  "sample file model " + a.model + " does not match config model " + spec.model_id);
    }
    const auto model = make_model(spec);
    const auto* d = dynamic_cast<const DiscreteModel*>(model.get());
    if (d == nullptr) {
      throw Error(ErrorKind::SupportMismatch,
                  "no exact law for continuous model " + spec.model_id + "; compare two sample files");
    }
    const ExactLaw law = enumerate_exact(*d, make_window(spec, *model), spec.multiplicity_cap);
    const CompareReport r = compare_histogram(histogram(a, true), law, spec.level);
    if (r.outside_support == r.n) {
      throw Error(ErrorKind::SupportMismatch, "no sample lies in the support of the exact law");
    }
    pass = r.pass;
    report << r.text();
  }
  std::cout << report.str();
  if (!o.out.empty()) {
    write(o.out, report.str());
  }
  return pass ? kOk : kNotCertified;
}

int cmd_plot(const Options& o) {
  if (o.files.size() != 1) {
    throw Error(ErrorKind::Config, "config error at plot: expected one sample file");
  }
  const SampleFile f = parse_sample_file(read_file(o.files[0]));
  const RunSpec spec = load(o, f.config);
  const auto model = make_model(spec);
  const std::uint64_t index = o.index ? *o.index : static_cast<std::uint64_t>(spec.plot_index);
  write(o.out, render_svg(f, spec, *model, index));
  return kOk;
}

void common(CLI::App* cmd, Options& o, bool sampling) {
  cmd->add_option("--config", o.config, "Configuration file ([model], [window], [limits], [run])");
  cmd->add_option("--out", o.out, "Output path (stdout when omitted, samples.jsonl for sample)");
  if (sampling) {
    cmd->add_option("--seed", o.seed, "Root seed");
    cmd->add_option("--n", o.n, "Number of samples");
    cmd->add_option("--threads", o.threads, "Worker threads; output does not depend on it");
    cmd->add_flag("--force", o.force, "Sample even when not certified; clean truncated clans");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perfect sampling of birth-and-death processes by clans of ancestors"};
  app.require_subcommand(1);
  Options o;
  auto* check = app.add_subcommand("check", "Report the subcriticality bound; exit 0 iff certified");
  common(check, o, false);
  auto* sample = app.add_subcommand("sample", "Write n perfect window samples and a bias ledger");
  common(sample, o, true);
  auto* oracle = app.add_subcommand("oracle", "Exact law (discrete) or finite-volume stationary samples");
  common(oracle, o, true);
  auto* cmp = app.add_subcommand("compare", "Compare a sample file with the exact law or another file");
  common(cmp, o, false);
  cmp->add_option("files", o.files, "One or two sample files")->required();
  auto* plot = app.add_subcommand("plot", "Render one sample as SVG");
  common(plot, o, false);
  plot->add_option("file", o.files, "Sample file")->required();
  plot->add_option("--index", o.index, "Sample index to draw (default [run] plot_index)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    if (check->parsed()) {
      return cmd_check(o);
    }
    if (sample->parsed()) {
      return cmd_sample(o);
    }
    if (oracle->parsed()) {
      return cmd_oracle(o);
    }
    if (cmp->parsed()) {
      return cmd_compare(o);
    }
    return cmd_plot(o);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return e.kind() == ErrorKind::Config ? kUsage : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
