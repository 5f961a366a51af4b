// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path to clansim CLI> <scratch directory>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "clansim/clan.hpp"
#include "clansim/cleaner.hpp"
#include "clansim/config.hpp"
#include "clansim/continuous_models.hpp"
#include "clansim/contours.hpp"
#include "clansim/diagnostics.hpp"
#include "clansim/error.hpp"
#include "clansim/finite_volume.hpp"
#include "clansim/oracle.hpp"
#include "clansim/random_cluster.hpp"
#include "clansim/sampler.hpp"
#include "clansim/toy.hpp"

namespace fs = std::filesystem;
using namespace clansim;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
  double s = 0.0;
  double s2 = 0.0;
  for (double x : v) {
    s += x;
    s2 += x * x;
  }
  const auto n = static_cast<double>(v.size());
  MeanSe out;
  out.mean = s / n;
  out.se = std::sqrt(std::max(0.0, s2 / n - out.mean * out.mean) / n);
  return out;
}

// 1. Free process: window counts are Poisson with the dominating mass.
Outcome free_marginal() {
  const auto t0 = std::chrono::steady_clock::now();
  const AreaModel m(0.05, 1.0, GrainGeometry::disc(1.0));
  const Window w = BoxWindow{Eigen::AlignedBox2d(Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 2))};
  const double mean = m.dominating_mass(w);
  const int cells = 7;
  const auto samples = sample_many(m, w, 101, 100000, Limits{}, false, 1);
  std::vector<double> observed(cells, 0.0);
  for (const auto& s : samples) {
    observed[std::min<std::size_t>(s.configuration.size(), cells - 1)] += 1.0;
  }
  const ChiSquare chi = chisq_gof(observed, poisson_cells(mean, cells));
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = chi.p_value > 0.01 && elapsed < 60.0;
  o.detail = "area phi=1, mean " + fmt("%.4f", mean) + ", chi-square p = " + fmt("%.4f", chi.p_value) +
             ", n = 1e5, " + fmt("%.1f", elapsed) + " s";
  return o;
}

// 2. Toy hard-core pair against enumeration, with the free sampler as negative control.
Outcome toy_pair() {
  const ToyModel m = toy_hardcore({{"a", 0.5}, {"b", 0.5}}, {{"a", "b"}});
  const ToyModel free = toy_free({{"a", 0.5}, {"b", 0.5}});
  const Window w = SiteWindow{{0, 1}};
  const ExactLaw law = enumerate_exact(m, w);
  auto histogram = [&](const Model& model) {
    Histogram h;
    for (const auto& s : sample_many(model, w, 202, 100000, Limits{}, false, 1)) {
      ++h[configuration_key(s.configuration)];
    }
    return h;
  };
  const Histogram good = histogram(m);
  const double tv = tv_distance(good, law);
  const CompareReport control = compare_histogram(histogram(free), law, 0.01);
  Outcome o;
  o.pass = tv < 0.01 && !control.pass;
  o.detail = "TV = " + fmt("%.5f", tv) + " (P{} = " + fmt("%.4f", static_cast<double>(good.at("{}")) / 1e5) +
             "), free-sampler control " + (control.pass ? "passed (wrong)" : "rejected") +
             " with TV " + fmt("%.3f", control.tv);
  return o;
}

// 3. Single-site hard core, w = 0.5.
Outcome single_site() {
  const ToyModel m = toy_hardcore({{"a", 0.5}}, {});
  double occupied = 0.0;
  for (const auto& s : sample_many(m, SiteWindow{{0}}, 303, 100000, Limits{}, false, 1)) {
    occupied += static_cast<double>(s.configuration.size());
  }
  const double p = 1.0 / 3.0;
  const double se = std::sqrt(p * (1.0 - p) / 1e5);
  const double hat = occupied / 1e5;
  Outcome o;
  o.pass = std::abs(hat - p) <= 3.0 * se;
  o.detail = "occupation " + fmt("%.5f", hat) + " vs 1/3, |diff|/se = " + fmt("%.2f", std::abs(hat - p) / se);
  return o;
}

// 4. Random-cluster 2x2: perfect-sampler bond law vs enumeration; pushforward identity.
Outcome random_cluster() {
  const RandomClusterModel m(2, 2, 0.5, 2.0);
  const BondGrid& grid = m.grid();
  const ExactLaw law = enumerate_exact(m, WholeWindow{});
  std::vector<double> fk(1u << grid.bond_count());
  double z = 0.0;
  for (std::uint32_t open = 0; open < fk.size(); ++open) {
    fk[open] = rc_config_weight(BondConfig{open}, grid, 0.5, 2.0);
    z += fk[open];
  }
  double identity = 0.0;
  std::map<std::string, std::uint32_t> bonds_of_key;
  for (std::uint32_t open = 0; open < fk.size(); ++open) {
    Configuration c;
    for (const auto& a : rc_project(BondConfig{open}, grid)) {
      c.items.push_back(m.animal_of(a.bonds));
    }
    const std::string key = configuration_key(c);
    bonds_of_key[key] = open;
    identity = std::max(identity, std::abs(law.probability(key) - fk[open] / z));
  }
  std::vector<double> counts(fk.size(), 0.0);
  bool disjoint = true;
  const auto samples = sample_many(m, WholeWindow{}, 404, 100000, Limits{}, false, 1);
  for (const auto& s : samples) {
    std::vector<BondAnimal> animals;
    for (const auto& g : s.configuration.items) {
      animals.push_back(m.animal(std::get<Animal>(g)));
    }
    try {
      counts[rc_reassemble(animals).open] += 1.0;
    } catch (const Error&) {
      disjoint = false;
    }
  }
  double tv = 0.0;
  for (std::uint32_t open = 0; open < fk.size(); ++open) {
    tv += std::abs(counts[open] / 1e5 - fk[open] / z);
  }
  tv *= 0.5;
  Outcome o;
  o.pass = tv < 0.02 && identity <= 1e-12 && disjoint;
  o.detail = "bond-configuration TV = " + fmt("%.5f", tv) + ", max |enumeration - FK| = " +
             fmt("%.2e", identity) + (disjoint ? "" : ", overlapping animals sampled");
  return o;
}

// 5. Loss network: closed-form bounds and mean calls covering the origin.
Outcome loss_network() {
  const LossNetworkModel m(0.2, LengthLaw::fixed(1.0), 1);
  const SubcriticalityReport r = alpha(m);
  // 0.2 * 3 rounds one ulp above the double nearest 0.6; the report prints 0.6.
  auto near = [](double x, double want) { return std::abs(x - want) <= 2e-16 * want; };
  const std::string text = r.text();
  const bool bounds = r.bounds.size() == 2 && near(r.bounds[0].value, 0.6) && near(r.bounds[1].value, 0.4) &&
                      near(r.alpha, 0.4) && r.subcritical &&
                      text.find("= 0.6\n") != std::string::npos && text.find("= 0.4\n") != std::string::npos;
  const Window origin = IntervalWindow{0.0, 0.0};
  std::vector<double> clan;
  for (const auto& s : sample_many(m, origin, 505, 10000, Limits{}, false, 1)) {
    clan.push_back(static_cast<double>(s.configuration.size()));
  }
  const auto family = m.finite_family(m.dilate(origin, 10.0));
  const RandomStream root(506);
  std::vector<double> oracle;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    RandomStream s = root.derive(i);
    oracle.push_back(static_cast<double>(stationary_window(m, origin, *family, s).configuration.size()));
  }
  const MeanSe a = mean_se(clan);
  const MeanSe b = mean_se(oracle);
  const double z = std::abs(a.mean - b.mean) / std::hypot(a.se, b.se);
  Outcome o;
  o.pass = bounds && z <= 3.0;
  o.detail = "check bounds " + fmt("%g", r.bounds[0].value) + " and " + fmt("%g", r.bounds[1].value) +
             "; mean calls at 0: clan " + fmt("%.4f", a.mean) + " vs oracle " + fmt("%.4f", b.mean) +
             " (" + fmt("%.2f", z) + " sigma)";
  return o;
}

// 6. Contours: unit-square density, clan sampler vs finite-volume oracle.
Outcome contours() {
  const double beta = 2.0;
  const ContourModel m(beta, 10);
  const Eigen::AlignedBox2d box(Eigen::Vector2d(0, 0), Eigen::Vector2d(20, 20));
  const Window w = BoxWindow{box};
  const double cells = 400.0;
  auto density = [&](const Configuration& c) {
    double squares = 0.0;
    for (const auto& g : c.items) {
      const auto& k = std::get<Contour>(g);
      if (k.shape == 0 && box.contains(k.anchor.cast<double>()) &&
          box.contains((k.anchor + Eigen::Vector2i(1, 1)).cast<double>())) {
        squares += 1.0;
      }
    }
    return squares / cells;
  };
  std::vector<double> clan;
  for (const auto& s : sample_many(m, w, 606, 10000, Limits{}, false, 1)) {
    clan.push_back(density(s.configuration));
  }
  const auto family = m.finite_family(m.dilate(w, 4.0));
  const RandomStream root(607);
  std::vector<double> oracle;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    RandomStream s = root.derive(i);
    oracle.push_back(density(stationary_window(m, w, *family, s).configuration));
  }
  const MeanSe a = mean_se(clan);
  const MeanSe b = mean_se(oracle);
  const double z = std::abs(a.mean - b.mean) / std::hypot(a.se, b.se);
  const double lead = std::exp(-4.0 * beta);
  auto in_band = [&](double d) { return d >= lead / 2.0 && d <= 2.0 * lead; };
  Outcome o;
  o.pass = z <= 3.0 && in_band(a.mean) && in_band(b.mean);
  o.detail = "density clan " + fmt("%.4e", a.mean) + " vs oracle " + fmt("%.4e", b.mean) + " (" +
             fmt("%.2f", z) + " sigma), e^-8 = " + fmt("%.4e", lead);
  return o;
}

// 7. Generation sizes against q alpha^n on the toy model.
Outcome branching() {
  const ToyModel m = toy_hardcore({{"a", 0.4}, {"b", 0.4}}, {{"a", "b"}});
  const Window w = SiteWindow{{0, 1}};
  const double a = alpha(m).alpha;
  const double q_root = m.dominating_mass(w);
  const WindowFamily family = window_family(m, w);
  const RandomStream root(707);
  std::vector<std::vector<double>> mass;
  mass.reserve(100000);
  for (std::uint64_t i = 0; i < 100000; ++i) {
    RandomStream s = root.derive(i);
    const auto r = build_clan(m, w, s, Limits{}, {}, &family);
    std::vector<double> per;
    for (const auto& g : clan_generations(r.clan, m, w)) {
      per.push_back(static_cast<double>(g.size()));
    }
    mass.push_back(std::move(per));
  }
  const DecayReport d = generation_decay_check(mass, a, q_root, 7);
  std::string rows;
  for (const auto& row : d.rows) {
    rows += (rows.empty() ? "" : " ") + fmt("%.4f", row.mean) + "/" + fmt("%.4f", row.bound);
  }
  Outcome o;
  o.pass = d.ok && a == 0.8;
  o.detail = "alpha " + fmt("%.2f", a) + ", E|A_n| / bound for n = 0..6: " + rows;
  return o;
}

// 8. Two-sweep vs sequential dynamics on shared streams.
Outcome two_sweep_equivalence() {
  const RandomStream root(808);
  int identical = 0;
  int total = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    RandomStream draw = root.derive(i).derive(0);
    std::unique_ptr<DiscreteModel> m;
    Window box;
    switch (i % 3) {
      case 0: {
        const double wa = 0.2 + 1.5 * draw.next_uniform();
        const double wb = 0.2 + 1.5 * draw.next_uniform();
        const double wc = 0.2 + 1.5 * draw.next_uniform();
        m = std::make_unique<ToyModel>(toy_hardcore({{"a", wa}, {"b", wb}, {"c", wc}}, {{"a", "b"}, {"b", "c"}}));
        box = SiteWindow{{0, 1, 2}};
        break;
      }
      case 1: {
        m = std::make_unique<ContourModel>(0.8 + draw.next_uniform(), 8);
        const double side = 2.0 + std::floor(4.0 * draw.next_uniform());
        box = BoxWindow{Eigen::AlignedBox2d(Eigen::Vector2d(0, 0), Eigen::Vector2d(side, side))};
        break;
      }
      default: {
        m = std::make_unique<RandomClusterModel>(2, 2, 0.2 + 0.6 * draw.next_uniform(), 0.5 + 2.5 * draw.next_uniform());
        box = WholeWindow{};
        break;
      }
    }
    const double warm = 5.0 * draw.next_uniform();
    const double span = 1.0 + 20.0 * draw.next_uniform();
    RandomStream init_stream = root.derive(i).derive(1);
    const Configuration initial = simulate_forward(*m, box, Configuration{}, 0.0, warm, init_stream).final_configuration();
    RandomStream a = root.derive(i).derive(2);
    RandomStream b = root.derive(i).derive(2);
    const Trajectory f = simulate_forward(*m, box, initial, 0.0, span, a);
    const Trajectory g = two_sweep(*m, box, initial, 0.0, span, b);
    ++total;
    if (configuration_key(f.final_configuration()) == configuration_key(g.final_configuration()) &&
        f.event_text() == g.event_text() && a.counter() == b.counter()) {
      ++identical;
    }
  }
  Outcome o;
  o.pass = identical == total;
  o.detail = std::to_string(identical) + "/" + std::to_string(total) +
             " instances bit-identical (toy, contours, random cluster)";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::string& command) {
  const int status = std::system((command + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 9. Byte-identical CLI outputs across reruns and thread counts.
Outcome determinism(const std::string& cli, const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path config = dir / "contours.toml";
  std::ofstream(config) << "[model]\nid = \"ising_contours\"\nbeta = 1.5\n\n[window]\nbox = [0, 0, 6, 6]\n\n"
                           "[limits]\nsize_cutoff = 8\n\n[run]\nseed = 2024\nn = 400\n";
  const std::string q = "\"" + cli + "\" ";
  std::vector<std::string> tags{"serial", "again", "parallel"};
  int failures = 0;
  for (const auto& tag : tags) {
    const std::string threads = tag == "parallel" ? " --threads 4" : " --threads 1";
    const fs::path out = dir / (tag + ".jsonl");
    failures += run(q + "sample --config \"" + config.string() + "\"" + threads + " --out \"" + out.string() + "\"") != 0;
    failures += run(q + "plot \"" + out.string() + "\" --index 3 --out \"" + (dir / (tag + ".svg")).string() + "\"") != 0;
  }
  bool same = failures == 0;
  for (const char* suffix : {".jsonl", ".ledger.jsonl", ".svg"}) {
    const std::string ref = slurp(dir / (std::string("serial") + suffix));
    same = same && !ref.empty();
    for (const auto& tag : tags) {
      same = same && slurp(dir / (tag + suffix)) == ref;
    }
  }
  Outcome o;
  o.pass = same;
  o.detail = same ? "sample, ledger and SVG identical for rerun and --threads 4"
                  : "outputs differ or commands failed (" + std::to_string(failures) + " failures)";
  return o;
}

// 10. Bias arithmetic and the generation-depth tail on the toy model.
Outcome bias() {
  const double b = bias_bound(0.01);
  const ToyModel m = toy_hardcore({{"a", 0.4}, {"b", 0.4}}, {{"a", "b"}});
  const Window w = SiteWindow{{0, 1}};
  BiasLedger ledger;
  for (const auto& s : sample_many(m, w, 1010, 100000, Limits{}, false, 1)) {
    ledger.record(s.index, s.stats);
  }
  const LedgerSummary sum = bias_ledger_summary(ledger, 10.0, alpha(m).alpha);
  const TailFit& f = sum.generation_tail;
  Outcome o;
  o.pass = std::abs(b - 1.0 / 99.0) <= 1e-9 && f.available && f.slope <= std::log(0.8) + 3.0 * f.se;
  o.detail = "bias_bound(0.01) = " + fmt("%.12f", b) + "; generation-depth tail slope " +
             fmt("%.4f", f.slope) + " +- " + fmt("%.4f", f.se) + " on " + std::to_string(f.points) +
             " points vs log 0.8 = " + fmt("%.4f", std::log(0.8));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <clansim CLI> <scratch dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path dir = argv[2];
  struct Criterion {
    int id;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, free_marginal},
      {2, toy_pair},
      {3, single_site},
      {4, random_cluster},
      {5, loss_network},
      {6, contours},
      {7, branching},
      {8, two_sweep_equivalence},
      {9, [&] { return determinism(cli, dir); }},
      {10, bias},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << o.detail << " ["
              << fmt("%.1f", seconds_since(t0)) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
