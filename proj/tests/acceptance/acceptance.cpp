// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: tbent_acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "properties.hpp"
#include "tbent/io.hpp"

using namespace tbent;

namespace {

const std::filesystem::path kConfigDir = TBENT_CONFIG_DIR;
const std::filesystem::path kOutDir = "acceptance_out";

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "" : "[x] ") + what);
  }
};

std::string num(double x, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << x;
  return os.str();
}

std::string opt(const std::optional<double>& x) { return x ? num(*x) : std::string("none"); }

EnsembleSpec ensemble_of(const std::string& text) { return parse_config(text).ensemble; }

double mean_over(const BinnedCurve& c, double lo, double hi) {
  double s = 0.0;
  int k = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.populated(i) && c.bin_centers[i] > lo && c.bin_centers[i] < hi) {
      s += c.mean_scaled_concurrence[i];
      ++k;
    }
  return k ? s / k : std::nan("");
}

// Figure sweeps run once and are shared by criteria 3-6 and 8.
struct FigureRun {
  RunConfig config;
  RunOutput output;
  std::string text;
  std::filesystem::path path;
  double seconds = 0.0;
};

std::map<int, FigureRun> g_figures;

const FigureRun& figure(int k) {
  if (auto it = g_figures.find(k); it != g_figures.end()) return it->second;
  const auto cfg = kConfigDir / ("fig" + std::to_string(k) + "d.cfg");
  FigureRun run;
  const auto t0 = std::chrono::steady_clock::now();
  run.config = parse_config(read_text_file(cfg));
  run.output = execute(run.config);
  run.text = render(run.config, run.output);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  run.path = kOutDir / ("fig" + std::to_string(k) + "d.csv");
  write_text_file(run.path, run.text);
  emit_plot_data(kOutDir / ("fig" + std::to_string(k) + "d_plot"), run.config, run.output);
  return g_figures.emplace(k, std::move(run)).first->second;
}

std::vector<double> sweep_values(const SweepResult& r, int n) {
  std::vector<double> v;
  for (const auto& p : r.per_n.at(n)) v.push_back(p.mean);
  return v;
}

Outcome plateau() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_ensemble(ensemble_of("command = ensemble\nfamily = slowly_varying\nN = 800\nlambda = 0.4\n"));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double m = mean_over(r.curve, -1.2, 1.2);
  o.require(std::abs(m - 1.6) <= 0.15, "mean N<C^b> over |E|<1.2 = " + num(m) + " (1.6 +- 0.15)");
  o.require(secs < 30.0, "runtime " + num(secs, 3) + " s (< 30 s)");
  return o;
}

Outcome mobility_edges() {
  Outcome o;
  for (double lambda : {0.4, 1.0, 2.0}) {
    const auto r = run_ensemble(
        ensemble_of("command = edges\nfamily = slowly_varying\nN = 800\nlambda = " + num(lambda, 17) + "\n"));
    const auto e = detect_mobility_edges(r.curve, 0.8, 800);
    const std::string got = "lambda=" + num(lambda) + ": edges (" + opt(e.lower_edge) + ", " + opt(e.upper_edge) + ")";
    if (lambda < 2.0) {
      const double ec = 2.0 - lambda;
      const bool ok = e.lower_edge && e.upper_edge && std::abs(*e.lower_edge + ec) <= 0.15 &&
                      std::abs(*e.upper_edge - ec) <= 0.15;
      o.require(ok, got + " vs +-" + num(ec) + " +- 0.15");
    } else {
      // a closed window has no crossing at all
      const bool closed = !e.lower_edge && !e.upper_edge;
      const bool narrow = e.lower_edge && e.upper_edge && std::abs(*e.lower_edge) <= 0.2 && std::abs(*e.upper_edge) <= 0.2;
      o.require(closed || narrow, got + (closed ? ", no extended window" : "") + " (within +-0.2 of 0)");
    }
  }
  return o;
}

Outcome harper_transition() {
  Outcome o;
  const auto& f = figure(1);
  double previous_slope = 0.0;
  for (const auto& [n, t] : f.output.sweep->transitions) {
    const double loc = t.headline ? t.headline->location : std::nan("");
    o.require(std::abs(loc - 2.0) <= 0.1 + 1e-9, "N=" + std::to_string(n) + ": " +
                                                     (t.headline ? std::string(to_string(t.headline->method)) : "none") +
                                                     " at " + num(loc) + " (2.0 +- 0.1)");
    const double slope = t.max_slope ? t.max_slope->strength : 0.0;
    o.require(slope > previous_slope, "N=" + std::to_string(n) + ": max |slope| " + num(slope) + " at " +
                                          opt(t.max_slope ? std::optional(t.max_slope->location) : std::nullopt));
    previous_slope = slope;
  }
  o.notes.push_back("sweep " + num(f.seconds, 3) + " s");
  return o;
}

Outcome dimer_jump() {
  Outcome o;
  const auto& f = figure(2);
  const auto& t = f.output.sweep->transitions.at(400);
  o.require(t.jump && std::abs(t.jump->location - 2.0) <= 0.1 + 1e-9,
            "jump at " + opt(t.jump ? std::optional(t.jump->location) : std::nullopt) + " (2.0 +- 0.1)");

  const auto r = run_ensemble(ensemble_of(
      "command = ensemble\nfamily = random_dimer\nN = 400\nVa = 2\nVb = 1\nq = 0.5\nsamples = 200\nbins = 50\nseed = 2\n"));
  const auto smooth = moving_average(r.curve.mean_scaled_concurrence, 3);
  const auto peaks = local_maxima(smooth);
  std::string where;
  for (auto i : peaks) where += " " + num(r.curve.bin_centers[i]);
  o.require(peaks.size() == 2, "delta=1.0: " + std::to_string(peaks.size()) + " local maxima after 3-bin smoothing at" + where);
  // positions from the first full run
  const double frozen[] = {1.043, 1.957};
  const double width = r.curve.bin_centers[1] - r.curve.bin_centers[0];
  if (peaks.size() == 2)
    for (int k = 0; k < 2; ++k)
      o.require(std::abs(r.curve.bin_centers[peaks[k]] - frozen[k]) <= width,
                "bump " + std::to_string(k + 1) + " at frozen " + num(frozen[k]) + " +- one bin");
  o.notes.push_back("sweep " + num(f.seconds, 3) + " s");
  return o;
}

Outcome correlated_inflexion() {
  Outcome o;
  const auto& f = figure(3);
  double previous = -1e300;
  for (const auto& [n, t] : f.output.sweep->transitions) {
    const auto& c = t.max_curvature;
    o.require(c && std::abs(c->location - 2.0) <= 0.25 + 1e-9,
              "N=" + std::to_string(n) + ": max curvature at " + opt(c ? std::optional(c->location) : std::nullopt) +
                  " (2.0 +- 0.25), strength " + num(c ? c->strength : 0.0));
    const double s = c ? c->strength : 0.0;
    o.require(s > previous, "N=" + std::to_string(n) + ": curvature sharpens with N");
    previous = s;
  }
  const auto r = run_ensemble(
      ensemble_of("command = ensemble\nfamily = long_range_correlated\nN = 800\nalpha = 5\nsamples = 200\nseed = 3\n"));
  const double m = mean_over(r.curve, -0.25, 0.25);
  o.require(std::abs(m - 1.6) <= 0.15, "alpha=5 band-centre plateau " + num(m) + " (1.6 +- 0.15)");
  o.notes.push_back("sweep " + num(f.seconds, 3) + " s");
  return o;
}

Outcome hopping_inflexion() {
  Outcome o;
  const auto& f = figure(4);
  const auto& t = f.output.sweep->transitions.at(800);
  o.require(t.headline && std::abs(t.headline->location - 1.7) <= 0.15 + 1e-9,
            "N=800: " + (t.headline ? std::string(to_string(t.headline->method)) : "none") + " at " +
                opt(t.headline ? std::optional(t.headline->location) : std::nullopt) + " (1.70 +- 0.15)");

  const auto r = run_ensemble(ensemble_of(
      "command = ensemble\nfamily = long_range_hopping\nN = 800\nW = 5\nmu = 1.1\nsamples = 50\nseed = 4\n"));
  std::vector<double> v;
  for (std::size_t i = 0; i < r.curve.size(); ++i)
    if (r.curve.populated(i)) v.push_back(r.curve.mean_scaled_concurrence[i]);
  const std::size_t q = v.size() / 4;
  double bottom = 0.0, top = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    bottom += v[i] / q;
    top += v[v.size() - 1 - i] / q;
  }
  o.require(top > 3.0 * bottom, "mu=1.1: top-quartile mean " + num(top) + " vs 3x bottom-quartile " + num(3 * bottom));
  const auto e = detect_mobility_edges(r.curve, 0.8, 800);
  o.notes.push_back("mu=1.1 edges (" + opt(e.lower_edge) + ", " + opt(e.upper_edge) + ")");
  o.notes.push_back("sweep " + num(f.seconds, 3) + " s");
  return o;
}

Outcome properties() {
  Outcome o;
  for (const auto& c : props::all()) o.require(c.pass, c.name + ": " + c.detail);
  return o;
}

Outcome reproducibility() {
  Outcome o;
  for (int k = 1; k <= 4; ++k) {
    const auto& f = figure(k);
    const auto file = read_text_file(f.path);
    const auto rerun = parse_config(extract_embedded_config(file));
    const auto text = render(rerun, execute(rerun));
    o.require(text == file, "fig" + std::to_string(k) + "d re-run from " + f.path.filename().string() +
                                (text == file ? " is bitwise identical" : " differs"));
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"extended-state plateau", plateau},
      {"mobility edges", mobility_edges},
      {"Harper-limit transition", harper_transition},
      {"dimer jump and two bumps", dimer_jump},
      {"correlated-disorder inflexion", correlated_inflexion},
      {"long-range hopping inflexion and asymmetry", hopping_inflexion},
      {"property suite", properties},
      {"end-to-end reproducibility", reproducibility},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  std::filesystem::create_directories(kOutDir);
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.contains(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), secs);
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d of %zu criteria failed\n", failures, selected.empty() ? criteria.size() : selected.size());
  return failures ? 1 : 0;
}
