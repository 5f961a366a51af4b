#include "clansim/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "clansim/continuous_models.hpp"
#include "clansim/random_cluster.hpp"
#include "clansim/toy.hpp"

namespace clansim {
namespace {

constexpr int kCanvas = 480;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  return s == "-0.0000" ? "0.0000" : s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

/// World box shown on the canvas, with y pointing up.
struct View {
  double x0 = -1.0;
  double y0 = -1.0;
  double x1 = 1.0;
  double y1 = 1.0;
};

std::string open_svg(const View& v) {
  std::ostringstream out;
  const double w = v.x1 - v.x0;
  const double h = v.y1 - v.y0;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\""
      << kCanvas << "\" viewBox=\"" << fmt(v.x0) << ' ' << fmt(-v.y1) << ' ' << fmt(w) << ' '
      << fmt(h) << "\" preserveAspectRatio=\"xMidYMid meet\">\n";
  out << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke=\"black\">\n";
  return out.str();
}

std::string legend(const View& v, const std::string& text) {
  const double size = (v.y1 - v.y0) / 30.0;
  std::ostringstream out;
  out << "</g>\n<text x=\"" << fmt(v.x0 + size * 0.5) << "\" y=\"" << fmt(-v.y1 + size * 1.2)
      << "\" font-size=\"" << fmt(size) << "\" font-family=\"monospace\">" << escape(text)
      << "</text>\n";
  return out.str();
}

View padded(double x0, double y0, double x1, double y1) {
  const double pad = 0.08 * std::max({x1 - x0, y1 - y0, 1.0});
  return View{x0 - pad, y0 - pad, x1 + pad, y1 + pad};
}

const char* kStroke = " vector-effect=\"non-scaling-stroke\"";

}  // namespace

std::vector<int> stack_levels(const std::vector<Call>& calls) {
  std::vector<int> levels;
  std::vector<double> ends;  // right end of the last call on each level
  for (const auto& c : calls) {
    std::size_t level = 0;
    while (level < ends.size() && !(ends[level] < c.x)) {
      ++level;
    }
    if (level == ends.size()) {
      ends.push_back(c.x + c.length);
    } else {
      ends[level] = c.x + c.length;
    }
    levels.push_back(static_cast<int>(level));
  }
  return levels;
}

std::vector<std::vector<Eigen::Vector2i>> contour_walks(const std::vector<Link>& links) {
  std::vector<Link> sorted = links;
  std::sort(sorted.begin(), sorted.end());
  std::vector<bool> used(sorted.size(), false);
  std::vector<std::vector<Eigen::Vector2i>> walks;
  for (std::size_t start = 0; start < sorted.size(); ++start) {
    if (used[start]) {
      continue;
    }
    used[start] = true;
    std::vector<Eigen::Vector2i> walk{sorted[start].from(), sorted[start].to()};
    const Eigen::Vector2i origin = walk.front();
    while (walk.back() != origin) {
      bool moved = false;
      for (std::size_t j = 0; j < sorted.size(); ++j) {
        if (used[j]) {
          continue;
        }
        if (sorted[j].from() == walk.back()) {
          walk.push_back(sorted[j].to());
        } else if (sorted[j].to() == walk.back()) {
          walk.push_back(sorted[j].from());
        } else {
          continue;
        }
        used[j] = true;
        moved = true;
        break;
      }
      if (!moved) {
        break;
      }
    }
    walks.push_back(std::move(walk));
  }
  return walks;
}

std::string render_svg(const SampleFile& file, const RunSpec& spec, const Model& m,
                       std::uint64_t index) {
  const SampleRecord* record = nullptr;
  for (const auto& r : file.records) {
    if (r.index == index) {
      record = &r;
      break;
    }
  }
  const Window window = make_window(spec, m);
  std::ostringstream out;
  std::string caption = spec.model_id;
  if (record == nullptr) {
    caption += file.records.empty() ? ", no samples" : ", no sample " + std::to_string(index);
  } else {
    caption += ", sample " + std::to_string(index) + ", " +
               std::to_string(record->configuration.size()) + " individuals";
  }
  const std::vector<Individual> none;
  const auto& items = record ? record->configuration.items : none;

  if (const auto* box = std::get_if<BoxWindow>(&window)) {
    const auto& b = box->box;
    double reach = 0.0;
    if (const auto* am = dynamic_cast<const AreaModel*>(&m)) {
      reach = am->grain().reach();
    } else if (const auto* sm = dynamic_cast<const StraussModel*>(&m)) {
      reach = 0.5 * sm->radius();
    }
    const View v = padded(b.min().x() - reach, b.min().y() - reach, b.max().x() + reach,
                          b.max().y() + reach);
    out << open_svg(v);
    out << "<rect x=\"" << fmt(b.min().x()) << "\" y=\"" << fmt(b.min().y()) << "\" width=\""
        << fmt(b.sizes().x()) << "\" height=\"" << fmt(b.sizes().y())
        << "\" stroke=\"gray\" stroke-dasharray=\"4 2\"" << kStroke << "/>\n";
    const auto* cm = dynamic_cast<const ContourModel*>(&m);
    const auto* am = dynamic_cast<const AreaModel*>(&m);
    const auto* sm = dynamic_cast<const StraussModel*>(&m);
    const auto* rc = dynamic_cast<const RandomClusterModel*>(&m);
    for (const auto& g : items) {
      if (const auto* germ = std::get_if<Germ>(&g)) {
        const double x = germ->x.x();
        const double y = germ->x.y();
        if (am != nullptr && am->grain().shape == GrainShape::Square) {
          const double s = am->grain().size;
          out << "<rect x=\"" << fmt(x - 0.5 * s) << "\" y=\"" << fmt(y - 0.5 * s)
              << "\" width=\"" << fmt(s) << "\" height=\"" << fmt(s) << "\" stroke=\"steelblue\""
              << kStroke << "/>\n";
        } else {
          const double r = am ? am->grain().size : (sm ? 0.5 * sm->radius() : 0.0);
          out << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << fmt(r)
              << "\" stroke=\"steelblue\"" << kStroke << "/>\n";
        }
        out << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\""
            << fmt((v.x1 - v.x0) / 200.0) << "\" fill=\"black\" stroke=\"none\"/>\n";
      } else if (const auto* c = std::get_if<Contour>(&g); c != nullptr && cm != nullptr) {
        for (const auto& walk : contour_walks(cm->links(*c))) {
          out << "<polyline points=\"";
          for (std::size_t i = 0; i < walk.size(); ++i) {
            out << (i ? " " : "") << walk[i].x() << ',' << walk[i].y();
          }
          out << "\" stroke=\"firebrick\"" << kStroke << "/>\n";
        }
      } else if (const auto* a = std::get_if<Animal>(&g); a != nullptr && rc != nullptr) {
        const auto& grid = rc->grid();
        for (int bond = 0; bond < grid.bond_count(); ++bond) {
          if ((rc->animal(*a).bonds >> bond) & 1u) {
            const auto [s, t] = grid.ends(bond);
            const auto p = grid.site_position(s);
            const auto q = grid.site_position(t);
            out << "<line x1=\"" << p.x() << "\" y1=\"" << p.y() << "\" x2=\"" << q.x()
                << "\" y2=\"" << q.y() << "\" stroke=\"darkgreen\"" << kStroke << "/>\n";
          }
        }
      }
    }
    out << legend(v, caption);
  } else if (const auto* iv = std::get_if<IntervalWindow>(&window)) {
    const auto* ln = dynamic_cast<const LossNetworkModel*>(&m);
    const double lmax = ln ? ln->law().upper() : 0.0;
    std::vector<Call> calls;
    for (const auto& g : items) {
      if (const auto* c = std::get_if<Call>(&g)) {
        calls.push_back(*c);
      }
    }
    std::sort(calls.begin(), calls.end(),
              [](const Call& a, const Call& b) { return a.x < b.x || (a.x == b.x && a.length < b.length); });
    const auto levels = stack_levels(calls);
    const int top = levels.empty() ? 1 : *std::max_element(levels.begin(), levels.end()) + 1;
    const double x0 = iv->lo - lmax;
    const double x1 = iv->hi + lmax;
    const double unit = std::max(x1 - x0, 1.0) / 10.0;
    const View v = padded(x0, -unit, x1, unit * std::max(top, 4));
    out << open_svg(v);
    out << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(-0.5 * unit) << "\" x2=\"" << fmt(x1)
        << "\" y2=\"" << fmt(-0.5 * unit) << "\" stroke=\"gray\"" << kStroke << "/>\n";
    out << "<rect x=\"" << fmt(iv->lo) << "\" y=\"" << fmt(-unit) << "\" width=\""
        << fmt(iv->hi - iv->lo) << "\" height=\"" << fmt(unit * (top + 1))
        << "\" stroke=\"gray\" stroke-dasharray=\"4 2\"" << kStroke << "/>\n";
    for (std::size_t i = 0; i < calls.size(); ++i) {
      const double y = unit * levels[i];
      out << "<line x1=\"" << fmt(calls[i].x) << "\" y1=\"" << fmt(y) << "\" x2=\""
          << fmt(calls[i].x + calls[i].length) << "\" y2=\"" << fmt(y)
          << "\" stroke=\"darkorange\" stroke-width=\"3\"" << kStroke << "/>\n";
    }
    out << legend(v, caption);
  } else if (const auto* toy = dynamic_cast<const ToyModel*>(&m)) {
    const auto n = static_cast<double>(toy->site_count());
    const View v = padded(0.0, -1.0, std::max(n, 1.0), 1.0);
    out << open_svg(v);
    std::map<std::uint32_t, int> count;
    for (const auto& g : items) {
      if (const auto* s = std::get_if<Site>(&g)) {
        ++count[s->id];
      }
    }
    for (std::uint32_t i = 0; i < toy->site_count(); ++i) {
      const int c = count.count(i) ? count[i] : 0;
      out << "<circle cx=\"" << fmt(i + 0.5) << "\" cy=\"0.0000\" r=\"0.3000\" fill=\""
          << (c > 0 ? "steelblue" : "none") << "\"" << kStroke << "/>\n";
    }
    out << "</g>\n";
    for (std::uint32_t i = 0; i < toy->site_count(); ++i) {
      const int c = count.count(i) ? count[i] : 0;
      out << "<text x=\"" << fmt(i + 0.5) << "\" y=\"0.7000\" font-size=\"0.2500\" "
          << "text-anchor=\"middle\" font-family=\"monospace\">" << escape(toy->label(i))
          << (c > 1 ? " x" + std::to_string(c) : "") << "</text>\n";
    }
    out << "<g>\n" << legend(v, caption);
  } else if (const auto* rc = dynamic_cast<const RandomClusterModel*>(&m)) {
    const auto& grid = rc->grid();
    const View v = padded(0.0, 0.0, grid.nx() - 1.0, grid.ny() - 1.0);
    out << open_svg(v);
    for (int s = 0; s < grid.site_count(); ++s) {
      const auto p = grid.site_position(s);
      out << "<circle cx=\"" << p.x() << "\" cy=\"" << p.y() << "\" r=\"0.0500\" fill=\"black\"/>\n";
    }
    for (const auto& g : items) {
      if (const auto* a = std::get_if<Animal>(&g)) {
        for (int bond = 0; bond < grid.bond_count(); ++bond) {
          if ((rc->animal(*a).bonds >> bond) & 1u) {
            const auto [s, t] = grid.ends(bond);
            const auto p = grid.site_position(s);
            const auto q = grid.site_position(t);
            out << "<line x1=\"" << p.x() << "\" y1=\"" << p.y() << "\" x2=\"" << q.x()
                << "\" y2=\"" << q.y() << "\" stroke=\"darkgreen\"" << kStroke << "/>\n";
          }
        }
      }
    }
    out << legend(v, caption);
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace clansim
