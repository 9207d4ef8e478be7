// circlaw: config-driven experiment runner over the circlaw C API.
//
//   circlaw <sample|hermitize|limit|girko|lln|sweep> --config cfg.json --out dir
//           [--seed N] [--threads K] [--svg]
//   circlaw verify --out dir
//
// Each run writes CSV files plus manifest.json (config copy, version,
// wall-clock, SHA-256 per file) into --out. CSV bytes depend only on the
// config and seed, never on --threads.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "circlaw/parallel.hpp"
#include "cli_support.hpp"

namespace cli {
namespace {

struct DistributionDeleter {
  void operator()(circlaw_distribution* p) const { circlaw_distribution_free(p); }
};
struct MatrixDeleter {
  void operator()(circlaw_matrix* p) const { circlaw_matrix_free(p); }
};
struct SpectrumDeleter {
  void operator()(circlaw_spectrum* p) const { circlaw_spectrum_free(p); }
};
using Distribution = std::unique_ptr<circlaw_distribution, DistributionDeleter>;
using MatrixHandle = std::unique_ptr<circlaw_matrix, MatrixDeleter>;
using SpectrumHandle = std::unique_ptr<circlaw_spectrum, SpectrumDeleter>;

struct Ensemble {
  Distribution dist;
  std::string label;
};

Ensemble parse_ensemble(const Field& f) {
  circlaw_distribution* raw = nullptr;
  const auto status = circlaw_distribution_from_json(f.raw().dump().c_str(), &raw);
  if (status != CIRCLAW_OK) throw ConfigError(f.path() + ": " + circlaw_last_error());
  Ensemble e{Distribution(raw), {}};
  std::size_t needed = 0;
  check(circlaw_distribution_label(raw, nullptr, 0, &needed), "distribution label");
  std::string label(needed, '\0');
  check(circlaw_distribution_label(raw, label.data(), label.size(), &needed), "distribution label");
  label.resize(needed - 1);
  e.label = label;
  return e;
}

// Fails on configs that cannot be realized at dimension n (e.g. sparse
// laws with c^2 n < 1) before any heavy work starts.
void check_realizable(const Ensemble& e, std::size_t n, const Field& where) {
  double ignored = 0.0;
  if (circlaw_lindeberg_analytic(e.dist.get(), n, 0.5, &ignored) != CIRCLAW_OK)
    throw ConfigError(where.path() + ": " + circlaw_last_error());
}

MatrixHandle sample(const Ensemble& e, std::size_t n, std::uint64_t seed) {
  circlaw_matrix* raw = nullptr;
  check(circlaw_matrix_sample(e.dist.get(), n, seed, 1, &raw), "sample " + e.label);
  return MatrixHandle(raw);
}

SpectrumHandle spectrum_of(const circlaw_matrix* m, const std::string& what) {
  circlaw_spectrum* raw = nullptr;
  check(circlaw_spectrum_compute(m, &raw), "eigenvalues of " + what);
  return SpectrumHandle(raw);
}

// Lexicographic (re, im) order so the CSV does not depend on solver output
// order.
std::vector<circlaw_complex> sorted_eigenvalues(const circlaw_spectrum* s) {
  std::vector<circlaw_complex> ev(circlaw_spectrum_size(s));
  check(circlaw_spectrum_eigenvalues(s, ev.data()), "eigenvalues");
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) { return a.re != b.re ? a.re < b.re : a.im < b.im; });
  return ev;
}

std::vector<std::size_t> ladder(const Field& f) {
  std::vector<std::size_t> out;
  if (f.raw().is_number()) {
    out.push_back(f.count());
    return out;
  }
  for (std::size_t k = 0; k < f.size(); ++k) out.push_back(f.at(k).count());
  if (out.empty()) f.reject("n ladder must not be empty");
  return out;
}

std::vector<circlaw_complex> complex_list(const Field& f) {
  std::vector<circlaw_complex> out;
  for (std::size_t k = 0; k < f.size(); ++k) out.push_back(f.at(k).complex());
  if (out.empty()) f.reject("list must not be empty");
  return out;
}

struct Context {
  Field config;
  OutputDir& out;
  std::uint64_t seed;
  unsigned threads;
  bool svg;
};

const std::vector<std::string> kCommon = {"seed", "threads", "svg", "description"};

std::vector<std::string> with_common(std::vector<std::string> keys) {
  keys.insert(keys.end(), kCommon.begin(), kCommon.end());
  return keys;
}

// ---- sample ---------------------------------------------------------------

void run_sample(Context& ctx) {
  const auto& cfg = ctx.config;
  only_keys(cfg, with_common({"ensemble", "n", "trials", "write_matrix", "tail_radius"}));
  const auto ens = parse_ensemble(cfg.at("ensemble"));
  const auto n = cfg.at("n").count();
  const auto trials = cfg.count_or("trials", 1);
  const bool write_matrix = cfg.boolean_or("write_matrix", false);
  const double radius = cfg.number_or("tail_radius", 2.0);
  if (!(radius > 0.0)) cfg.at("tail_radius").reject("expected a positive number");
  check_realizable(ens, n, cfg.at("ensemble"));

  struct Trial {
    std::vector<circlaw_complex> eigenvalues;
    std::vector<circlaw_complex> entries;
    double trace = 0, radial = 0, angular = 0, tail = 0, tail_bound = 0;
  };
  std::vector<Trial> results(trials);
  circlaw::parallel_for(trials, ctx.threads, [&](std::size_t t) {
    auto m = sample(ens, n, ctx.seed + t);
    auto s = spectrum_of(m.get(), ens.label);
    auto& r = results[t];
    r.eigenvalues = sorted_eigenvalues(s.get());
    r.trace = circlaw_spectrum_trace(s.get());
    circlaw_ks_result ks{};
    check(circlaw_radial_ks(s.get(), &ks), "radial KS");
    r.radial = ks.statistic;
    check(circlaw_angular_ks(s.get(), &ks), "angular KS");
    r.angular = ks.statistic;
    check(circlaw_tail_fraction(s.get(), radius, &r.tail, &r.tail_bound), "tail fraction");
    if (write_matrix) {
      r.entries.resize(n * n);
      check(circlaw_matrix_entries(m.get(), r.entries.data()), "matrix entries");
    }
  });

  Csv spectra({"trial", "k", "re", "im"});
  Csv summary({"trial", "seed", "n", "ensemble", "trace_aa_star", "radial_ks", "angular_ks", "tail_radius",
               "tail_fraction", "tail_bound"});
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& r = results[t];
    for (std::size_t k = 0; k < r.eigenvalues.size(); ++k)
      spectra.row({std::to_string(t), std::to_string(k), fmt(r.eigenvalues[k].re), fmt(r.eigenvalues[k].im)});
    summary.row({std::to_string(t), std::to_string(ctx.seed + t), std::to_string(n), ens.label, fmt(r.trace),
                 fmt(r.radial), fmt(r.angular), fmt(radius), fmt(r.tail), fmt(r.tail_bound)});
  }
  ctx.out.write("spectra.csv", spectra.text());
  ctx.out.write("sample_summary.csv", summary.text());

  if (write_matrix) {
    Csv matrix({"trial", "i", "j", "re", "im"});
    for (std::size_t t = 0; t < trials; ++t)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const auto& x = results[t].entries[i * n + j];
          matrix.row({std::to_string(t), std::to_string(i), std::to_string(j), fmt(x.re), fmt(x.im)});
        }
    ctx.out.write("matrix.csv", matrix.text());
  }

  if (ctx.svg) {
    Svg plot(-1.6, 1.6, -1.6, 1.6);
    plot.axes();
    for (const auto& l : results[0].eigenvalues) plot.circle(l.re, l.im, 1.6, "#1f5fa8");
    plot.ring(0.0, 0.0, 1.0, "#d03030");
    plot.text(-1.55, 1.5, ens.label + ", n = " + std::to_string(n));
    ctx.out.write("eigenvalues.svg", plot.str());
  }
}

// ---- hermitize ------------------------------------------------------------

void run_hermitize(Context& ctx) {
  const auto& cfg = ctx.config;
  only_keys(cfg, with_common({"ensemble", "n", "z", "points", "x_max", "write_eigenvalues"}));
  const auto ens = parse_ensemble(cfg.at("ensemble"));
  const auto n = cfg.at("n").count();
  const auto zs = complex_list(cfg.at("z"));
  const auto points = cfg.count_or("points", 41, 2);
  const std::optional<double> x_max =
      cfg.has("x_max") ? std::optional<double>(cfg.at("x_max").positive()) : std::nullopt;
  const bool write_eigenvalues = cfg.boolean_or("write_eigenvalues", true);
  check_realizable(ens, n, cfg.at("ensemble"));

  auto m = sample(ens, n, ctx.seed);
  struct PerZ {
    std::vector<double> eigenvalues, grid, empirical, limit;
    double log_empirical = 0, log_limit = 0, sup = 0;
  };
  std::vector<PerZ> results(zs.size());
  circlaw::parallel_for(zs.size(), ctx.threads, [&](std::size_t k) {
    const auto z = zs[k];
    auto& r = results[k];
    r.eigenvalues.resize(n);
    check(circlaw_hermitized_eigenvalues(m.get(), z, r.eigenvalues.data()), "hermitized eigenvalues");
    const double top = x_max ? *x_max : std::pow(2.0 + std::hypot(z.re, z.im), 2) + 1.0;
    for (std::size_t p = 0; p < points; ++p) {
      const double x = top * static_cast<double>(p) / static_cast<double>(points - 1);
      double emp = 0.0, lim = 0.0;
      check(circlaw_empirical_cdf(r.eigenvalues.data(), n, x, &emp), "empirical cdf");
      check(circlaw_nu_cdf(z, x, &lim), "limit cdf");
      r.grid.push_back(x);
      r.empirical.push_back(emp);
      r.limit.push_back(lim);
      r.sup = std::max(r.sup, std::abs(emp - lim));
    }
    double sum = 0.0;
    for (double e : r.eigenvalues) sum += std::log(e);
    r.log_empirical = sum / static_cast<double>(n);
    check(circlaw_nu_log_moment(z, &r.log_limit), "limit log moment");
  });

  Csv eig({"trial", "z_re", "z_im", "k", "value"});
  Csv cdf({"z_re", "z_im", "x", "cdf_empirical", "cdf_limit"});
  Csv summary({"z_re", "z_im", "n", "sup_cdf_gap", "log_moment_empirical", "log_moment_limit"});
  for (std::size_t k = 0; k < zs.size(); ++k) {
    const auto& r = results[k];
    const auto zr = fmt(zs[k].re), zi = fmt(zs[k].im);
    if (write_eigenvalues)
      for (std::size_t j = 0; j < n; ++j) eig.row({"0", zr, zi, std::to_string(j), fmt(r.eigenvalues[j])});
    for (std::size_t p = 0; p < r.grid.size(); ++p)
      cdf.row({zr, zi, fmt(r.grid[p]), fmt(r.empirical[p]), fmt(r.limit[p])});
    summary.row({zr, zi, std::to_string(n), fmt(r.sup), fmt(r.log_empirical), fmt(r.log_limit)});
  }
  if (write_eigenvalues) ctx.out.write("hermitized.csv", eig.text());
  ctx.out.write("nu_cdf.csv", cdf.text());
  ctx.out.write("hermitize_summary.csv", summary.text());

  if (ctx.svg) {
    double right = 0.0;
    for (const auto& r : results) right = std::max(right, r.grid.back());
    Svg plot(0.0, right, -0.05, 1.05, 720, 480);
    plot.axes();
    const char* colors[] = {"#1f5fa8", "#d03030", "#2a9d55", "#a05cc8", "#d08a20"};
    for (std::size_t k = 0; k < results.size(); ++k) {
      std::vector<std::pair<double, double>> emp, lim;
      for (std::size_t p = 0; p < results[k].grid.size(); ++p) {
        emp.emplace_back(results[k].grid[p], results[k].empirical[p]);
        lim.emplace_back(results[k].grid[p], results[k].limit[p]);
      }
      plot.polyline(lim, colors[k % 5]);
      plot.polyline(emp, "#888888");
    }
    ctx.out.write("nu_cdf.svg", plot.str());
  }
}

// ---- limit ----------------------------------------------------------------

std::vector<std::pair<double, double>> default_g_points() {
  // Both pieces of g: ten points inside the unit disk, ten outside.
  return {{0.05, 0.0},  {0.2, 0.3},   {-0.3, -0.4}, {0.5, 0.5},  {-0.6, 0.1}, {0.7, -0.2}, {0.1, 0.8},
          {-0.45, -0.7}, {0.3, -0.6}, {-0.15, 0.5}, {1.2, 0.0},  {-1.5, 0.4}, {2.0, 1.0},  {0.8, 1.1},
          {-0.9, -1.2}, {2.4, -2.0},  {0.05, 1.6},  {-2.5, 0.0}, {1.0, 1.0},  {-0.4, 2.2}};
}

void run_limit(Context& ctx) {
  const auto& cfg = ctx.config;
  only_keys(cfg, with_common({"branch_sweep", "density", "g_table"}));
  if (!cfg.has("branch_sweep") && !cfg.has("density") && !cfg.has("g_table"))
    cfg.reject("expected at least one of branch_sweep, density, g_table");

  if (cfg.has("branch_sweep")) {
    const auto f = cfg.at("branch_sweep");
    only_keys(f, {"count", "im_max", "z_max"});
    const auto count = f.count_or("count", 1000);
    const double im_max = f.number_or("im_max", 10.0);
    const double z_max = f.number_or("z_max", 3.0);
    if (!(im_max > 0.0)) f.at("im_max").reject("expected a positive number");
    if (!(z_max >= 0.0)) f.at("z_max").reject("expected a nonnegative number");
    std::vector<circlaw_complex> alphas(count), zs(count);
    check(circlaw_branch_sweep_points(count, ctx.seed, im_max, z_max, alphas.data(), zs.data()), "branch sweep");
    std::vector<circlaw_stieltjes> sols(count);
    circlaw::parallel_for(count, ctx.threads, [&](std::size_t k) {
      check(circlaw_delta_branch(alphas[k], zs[k], &sols[k]), "branch selection");
    });
    Csv csv({"alpha_re", "alpha_im", "z_re", "z_im", "delta_re", "delta_im", "residual"});
    Csv diag({"index", "vieta_residual", "ambiguous"});
    for (std::size_t k = 0; k < count; ++k) {
      const auto& s = sols[k];
      csv.row({fmt(alphas[k].re), fmt(alphas[k].im), fmt(zs[k].re), fmt(zs[k].im), fmt(s.roots[0].re),
               fmt(s.roots[0].im), fmt(s.residual)});
      diag.row({std::to_string(k), fmt(s.vieta_residual), std::to_string(s.ambiguous)});
    }
    ctx.out.write("branch_sweep.csv", csv.text());
    ctx.out.write("branch_diagnostics.csv", diag.text());
  }

  if (cfg.has("density")) {
    const auto f = cfg.at("density");
    only_keys(f, {"z", "points", "delta_im"});
    const auto zs = complex_list(f.at("z"));
    const auto points = f.count_or("points", 400, 2);
    const double delta_im = f.number_or("delta_im", 1e-6);
    struct Curve {
      std::vector<double> grid, values;
      double lower = 0, upper = 0, mass = 0, log_moment = 0;
    };
    std::vector<Curve> curves(zs.size());
    circlaw::parallel_for(zs.size(), ctx.threads, [&](std::size_t k) {
      auto& c = curves[k];
      const auto z = zs[k];
      check(circlaw_nu_support(z, &c.lower, &c.upper), "support");
      // Quadratic grading puts more points near 0, where the density can
      // blow up like x^{-1/2}.
      const double top = std::pow(2.0 + std::hypot(z.re, z.im), 2) + 1.0;
      for (std::size_t p = 0; p < points; ++p) {
        const double u = static_cast<double>(p) / static_cast<double>(points - 1);
        c.grid.push_back(top * u * u);
      }
      c.values.resize(points);
      check(circlaw_nu_density(z, c.grid.data(), points, delta_im, c.values.data()), "density");
      for (std::size_t p = 1; p < points; ++p)
        c.mass += 0.5 * (c.values[p] + c.values[p - 1]) * (c.grid[p] - c.grid[p - 1]);
      check(circlaw_nu_log_moment(z, &c.log_moment), "log moment");
    });
    // One (x, f) file per z; the summary maps file index to z.
    Csv summary({"curve", "z_re", "z_im", "support_lower", "support_upper", "trapezoid_mass", "log_moment"});
    for (std::size_t k = 0; k < zs.size(); ++k) {
      const auto& c = curves[k];
      Csv density({"x", "f"});
      for (std::size_t p = 0; p < c.grid.size(); ++p) density.row({fmt(c.grid[p]), fmt(c.values[p])});
      ctx.out.write("density_" + std::to_string(k) + ".csv", density.text());
      summary.row({std::to_string(k), fmt(zs[k].re), fmt(zs[k].im), fmt(c.lower), fmt(c.upper), fmt(c.mass),
                   fmt(c.log_moment)});
    }
    ctx.out.write("density_summary.csv", summary.text());

    if (ctx.svg) {
      double right = 0.0, top = 0.0;
      for (const auto& c : curves) {
        right = std::max(right, c.upper * 1.05);
        for (std::size_t p = 0; p < c.grid.size(); ++p)
          if (c.grid[p] > 0.05 * c.upper) top = std::max(top, c.values[p]);
      }
      Svg plot(0.0, right, 0.0, 1.1 * top, 720, 480);
      const char* colors[] = {"#1f5fa8", "#d03030", "#2a9d55", "#a05cc8", "#d08a20"};
      for (std::size_t k = 0; k < curves.size(); ++k) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t p = 0; p < curves[k].grid.size(); ++p)
          if (curves[k].grid[p] <= right) pts.emplace_back(curves[k].grid[p], std::min(curves[k].values[p], 1.1 * top));
        plot.polyline(pts, colors[k % 5]);
      }
      ctx.out.write("density.svg", plot.str());
    }
  }

  if (cfg.has("g_table")) {
    const auto f = cfg.at("g_table");
    only_keys(f, {"points", "h"});
    const double h = f.number_or("h", 1e-2);
    std::vector<std::pair<double, double>> pts;
    if (f.has("points")) {
      const auto list = complex_list(f.at("points"));
      for (const auto& p : list) pts.emplace_back(p.re, p.im);
    } else {
      pts = default_g_points();
    }
    std::vector<double> numeric(pts.size());
    circlaw::parallel_for(pts.size(), ctx.threads, [&](std::size_t k) {
      check(circlaw_g_from_nu(pts[k].first, pts[k].second, h, &numeric[k]), "g from nu");
    });
    Csv csv({"s", "t", "g_closed", "g_from_nu"});
    for (std::size_t k = 0; k < pts.size(); ++k)
      csv.row({fmt(pts[k].first), fmt(pts[k].second), fmt(circlaw_g_closed(pts[k].first, pts[k].second)),
               fmt(numeric[k])});
    ctx.out.write("g_table.csv", csv.text());
  }
}

// ---- girko ----------------------------------------------------------------

void run_girko(Context& ctx) {
  const auto& cfg = ctx.config;
  only_keys(cfg, with_common({"ensemble", "n", "frequencies", "A", "epsilon", "max_cell", "singularity_eps"}));
  const auto ens = parse_ensemble(cfg.at("ensemble"));
  const auto n = cfg.at("n").count();
  const auto freqs = complex_list(cfg.at("frequencies"));
  const double A = cfg.number_or("A", 2.5);
  const double eps = cfg.has("epsilon") ? cfg.at("epsilon").positive() : std::pow(static_cast<double>(n), -0.25);
  const double max_cell = cfg.number_or("max_cell", 0.02);
  check_realizable(ens, n, cfg.at("ensemble"));

  std::vector<circlaw_region> regions(freqs.size());
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const auto st = circlaw_region_resolving(freqs[k].re, freqs[k].im, A, eps, max_cell, &regions[k]);
    if (st != CIRCLAW_OK)
      throw ConfigError(cfg.at("frequencies").at(k).path() + ": " + circlaw_last_error());
  }
  std::vector<double> sing_eps;
  if (cfg.has("singularity_eps"))
    for (std::size_t k = 0; k < cfg.at("singularity_eps").size(); ++k)
      sing_eps.push_back(cfg.at("singularity_eps").at(k).positive());
  else
    sing_eps.push_back(eps);

  auto m = sample(ens, n, ctx.seed);
  auto s = spectrum_of(m.get(), ens.label);

  Csv table({"u", "v", "re_direct", "im_direct", "re_girko", "im_girko", "err_budget"});
  Csv diag({"u", "v", "abs_error", "quadrature_error", "tail_s", "tail_t", "singularity_bound", "kept_fraction",
            "ns", "nt", "epsilon"});
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const auto [u, v] = freqs[k];
    circlaw_complex direct{};
    circlaw_girko_estimate est{};
    check(circlaw_charfn_direct(s.get(), u, v, &direct), "direct characteristic function");
    check(circlaw_charfn_girko(s.get(), u, v, &regions[k], ctx.threads, &est), "girko characteristic function");
    const double err = std::hypot(est.value.re - direct.re, est.value.im - direct.im);
    table.row({fmt(u), fmt(v), fmt(direct.re), fmt(direct.im), fmt(est.value.re), fmt(est.value.im),
               fmt(est.error_budget)});
    diag.row({fmt(u), fmt(v), fmt(err), fmt(est.quadrature_error), fmt(est.tail_s), fmt(est.tail_t),
              fmt(est.singularity_bound), fmt(est.kept_fraction), std::to_string(regions[k].ns),
              std::to_string(regions[k].nt), fmt(eps)});
  }
  ctx.out.write("girko.csv", table.text());
  ctx.out.write("girko_diagnostics.csv", diag.text());

  Csv bounds({"n", "A", "tail_fraction", "tail_bound", "eps", "singularity_integral", "singularity_bound"});
  double frac = 0.0, bound = 0.0;
  check(circlaw_tail_fraction(s.get(), A, &frac, &bound), "tail fraction");
  for (double e : sing_eps) {
    circlaw_region region{A, 8, 8, std::min(e, 0.999)};
    double sing = 0.0;
    check(circlaw_small_singularity_integral(s.get(), &region, e, &sing), "singularity integral");
    bounds.row({std::to_string(n), fmt(A), fmt(frac), fmt(bound), fmt(e), fmt(sing), fmt(8.0 * e)});
  }
  ctx.out.write("girko_bounds.csv", bounds.text());
}

// ---- lln ------------------------------------------------------------------

circlaw_nonneg_distribution parse_nonneg(const Field& f) {
  if (f.raw().is_string()) {
    const auto kind = f.string();
    if (kind == "exponential") return {CIRCLAW_NONNEG_EXPONENTIAL, 1.0, 0.0};
    if (kind == "constant") return {CIRCLAW_NONNEG_CONSTANT, 1.0, 0.0};
    f.reject("unknown kind '" + kind + "'");
  }
  const auto kind = f.at("kind").string();
  if (kind == "exponential") {
    only_keys(f, {"kind", "rate"});
    return {CIRCLAW_NONNEG_EXPONENTIAL, f.number_or("rate", 1.0), 0.0};
  }
  if (kind == "constant") {
    only_keys(f, {"kind", "value"});
    return {CIRCLAW_NONNEG_CONSTANT, f.number_or("value", 1.0), 0.0};
  }
  if (kind == "scaled-chi-square") {
    only_keys(f, {"kind", "dof", "scale"});
    return {CIRCLAW_NONNEG_SCALED_CHI_SQUARE, f.at("dof").positive(), f.at("scale").positive()};
  }
  f.at("kind").reject("unknown kind '" + kind + "'");
}

void run_lln(Context& ctx) {
  const auto& cfg = ctx.config;
  only_keys(cfg, with_common({"lemma2", "slln"}));
  if (!cfg.has("lemma2") && !cfg.has("slln")) cfg.reject("expected lemma2 and/or slln");

  if (cfg.has("lemma2")) {
    const auto f = cfg.at("lemma2");
    only_keys(f, {"distribution", "cells", "trials"});
    const auto dist = f.has("distribution") ? parse_nonneg(f.at("distribution"))
                                            : circlaw_nonneg_distribution{CIRCLAW_NONNEG_EXPONENTIAL, 1.0, 0.0};
    const auto trials = f.count_or("trials", 2000);
    const auto cells = f.at("cells");
    if (cells.size() == 0) cells.reject("must not be empty");
    Csv csv({"n", "a", "b", "trials", "mean", "stderr", "bound", "pass"});
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const auto cell = cells.at(k);
      if (cell.size() != 3) cell.reject("expected [n, a, b]");
      const auto n = cell.at(0).count();
      const double a = cell.at(1).positive();
      const auto b = cell.at(2).count(2);
      circlaw_lln_report r{};
      const auto st = circlaw_lemma2_trial(&dist, n, a, b, trials, ctx.seed + k, ctx.threads, &r);
      if (st == CIRCLAW_ERR_INVALID_SPEC || st == CIRCLAW_ERR_INVALID_ARGUMENT)
        throw ConfigError(cell.path() + ": " + circlaw_last_error());
      check(st, "truncated-sum trial");
      csv.row({std::to_string(r.n), fmt(r.a), std::to_string(r.b), std::to_string(r.trials), fmt(r.mean),
               fmt(r.standard_error), fmt(r.bound), r.violation ? "0" : "1"});
    }
    ctx.out.write("lemma2.csv", csv.text());
  }

  if (cfg.has("slln")) {
    const auto f = cfg.at("slln");
    only_keys(f, {"ensembles", "n"});
    const auto ns = ladder(f.at("n"));
    const auto list = f.at("ensembles");
    if (list.size() == 0) list.reject("must not be empty");
    Csv csv({"ensemble", "n", "seed", "grand_sum"});
    for (std::size_t e = 0; e < list.size(); ++e) {
      const auto ens = parse_ensemble(list.at(e));
      for (auto n : ns) check_realizable(ens, n, list.at(e));
      std::vector<double> sums(ns.size());
      check(circlaw_slln_trajectory(ens.dist.get(), ctx.seed, ns.data(), ns.size(), ctx.threads, sums.data()),
            "grand sum " + ens.label);
      for (std::size_t k = 0; k < ns.size(); ++k)
        csv.row({ens.label, std::to_string(ns[k]), std::to_string(ctx.seed), fmt(sums[k])});
    }
    ctx.out.write("slln.csv", csv.text());
  }
}

// ---- sweep ----------------------------------------------------------------

void run_sweep(Context& ctx) {
  const auto& cfg = ctx.config;
  only_keys(cfg, with_common({"ensembles", "n", "grid"}));
  const auto ns = ladder(cfg.at("n"));
  const auto list = cfg.at("ensembles");
  if (list.size() == 0) list.reject("must not be empty");
  std::vector<Ensemble> ensembles;
  for (std::size_t e = 0; e < list.size(); ++e) {
    ensembles.push_back(parse_ensemble(list.at(e)));
    for (auto n : ns) check_realizable(ensembles.back(), n, list.at(e));
  }
  int lo = -3, hi = 3;
  if (cfg.has("grid")) {
    const auto g = cfg.at("grid");
    only_keys(g, {"lo", "hi"});
    lo = static_cast<int>(g.at("lo").number());
    hi = static_cast<int>(g.at("hi").number());
    if (lo > hi) g.reject("lo must not exceed hi");
  }
  std::vector<double> us, vs;
  for (int u = lo; u <= hi; ++u)
    for (int v = lo; v <= hi; ++v) {
      us.push_back(u);
      vs.push_back(v);
    }

  struct Job {
    std::size_t ensemble, n;
    double radial = 0, angular = 0, charfn = 0;
  };
  std::vector<Job> jobs;
  for (std::size_t e = 0; e < ensembles.size(); ++e)
    for (auto n : ns) jobs.push_back({e, n});
  // Largest problems first so the pool stays busy.
  std::vector<std::size_t> order(jobs.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return jobs[a].n > jobs[b].n; });
  circlaw::parallel_for(order.size(), ctx.threads, [&](std::size_t i) {
    auto& job = jobs[order[i]];
    const auto& ens = ensembles[job.ensemble];
    auto m = sample(ens, job.n, ctx.seed);
    auto s = spectrum_of(m.get(), ens.label);
    circlaw_ks_result ks{};
    check(circlaw_radial_ks(s.get(), &ks), "radial KS");
    job.radial = ks.statistic;
    check(circlaw_angular_ks(s.get(), &ks), "angular KS");
    job.angular = ks.statistic;
    check(circlaw_charfn_discrepancy(s.get(), us.data(), vs.data(), us.size(), &job.charfn), "charfn discrepancy");
  });

  Csv csv({"metric", "n", "ensemble", "seed", "value"});
  for (const char* metric : {"radial_ks", "angular_ks", "charfn_discrepancy"})
    for (const auto& job : jobs) {
      const std::string name = metric;
      const double value = name == "radial_ks" ? job.radial : name == "angular_ks" ? job.angular : job.charfn;
      csv.row({name, std::to_string(job.n), ensembles[job.ensemble].label, std::to_string(ctx.seed), fmt(value)});
    }
  ctx.out.write("sweep.csv", csv.text());

  if (ctx.svg) {
    const double x0 = std::log2(static_cast<double>(*std::min_element(ns.begin(), ns.end()))) - 0.5;
    const double x1 = std::log2(static_cast<double>(*std::max_element(ns.begin(), ns.end()))) + 0.5;
    double top = 0.0;
    for (const auto& j : jobs) top = std::max({top, j.radial, j.angular});
    Svg plot(x0, x1, 0.0, 1.1 * top + 1e-3, 720, 480);
    const char* colors[] = {"#1f5fa8", "#d03030", "#2a9d55", "#a05cc8", "#d08a20"};
    for (std::size_t e = 0; e < ensembles.size(); ++e) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& j : jobs)
        if (j.ensemble == e) pts.emplace_back(std::log2(static_cast<double>(j.n)), j.radial);
      plot.polyline(pts, colors[e % 5]);
      for (const auto& p : pts) plot.circle(p.first, p.second, 3.0, colors[e % 5]);
    }
    plot.text(x0 + 0.1, 1.05 * top, "radial KS vs log2 n");
    ctx.out.write("sweep.svg", plot.str());
  }
}

// ---- driver ---------------------------------------------------------------

json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("--config: cannot open " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config: " + path + ": " + e.what());
  }
}

int run_command(const std::string& name, const std::function<void(Context&)>& body, const std::string& config_path,
                const std::string& out_dir, std::optional<std::uint64_t> seed_flag,
                std::optional<unsigned> threads_flag, bool svg_flag) {
  const auto started = std::chrono::steady_clock::now();
  const json config = load_config(config_path);
  if (!config.is_object()) throw ConfigError("config: expected a JSON object");
  const Field root(config, "config");
  if (root.has(name)) only_keys(root, {name, "seed", "threads", "svg", "description"});
  // Settings may live at the top level or under a key named after the command.
  json merged = root.has(name) ? config.at(name) : config;
  if (!merged.is_object()) throw ConfigError("config." + name + ": expected an object");
  for (const char* key : {"seed", "threads", "svg"})
    if (config.contains(key) && !merged.contains(key)) merged[key] = config[key];
  merged.erase("description");
  const Field cfg(merged, root.has(name) ? "config." + name : "config");

  std::uint64_t seed = seed_flag ? *seed_flag : (cfg.has("seed") ? cfg.at("seed").u64() : 1);
  unsigned threads = threads_flag ? *threads_flag : static_cast<unsigned>(cfg.count_or("threads", 1));
  const bool svg = svg_flag || cfg.boolean_or("svg", false);

  OutputDir out(out_dir);
  Context ctx{cfg, out, seed, threads, svg};
  body(ctx);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_manifest(out, name, config, {{"seed", seed}, {"threads", threads}, {"svg", svg}}, wall);
  std::cout << name << ": wrote " << out.files().size() << " files to " << out_dir << " in " << wall << " s\n";
  return kSuccess;
}

int exit_code_for(circlaw_status status) {
  switch (status) {
    case CIRCLAW_ERR_INVALID_ARGUMENT:
    case CIRCLAW_ERR_INVALID_SPEC:
    case CIRCLAW_ERR_DOMAIN: return kConfigError;
    case CIRCLAW_ERR_INTERNAL: return kFailure;
    default: return kNumericalError;
  }
}

}  // namespace
}  // namespace cli

int main(int argc, char** argv) {
  using namespace cli;
  CLI::App app{"circlaw: spectra of non-Hermitian random matrices and the circular law"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(circlaw_version()));

  const std::map<std::string, std::pair<std::string, std::function<void(Context&)>>> commands = {
      {"sample", {"sample matrices, write spectra (optional eigenvalue scatter SVG)", run_sample}},
      {"hermitize", {"empirical vs limiting CDFs of the hermitized spectrum over a z list", run_hermitize}},
      {"limit", {"branch sweeps, limiting densities and g(s,t) tables", run_limit}},
      {"girko", {"direct vs integral-formula characteristic function", run_girko}},
      {"lln", {"truncated-sum Monte Carlo and grand-sum trajectories", run_lln}},
      {"sweep", {"KS and characteristic-function distances over an n ladder", run_sweep}},
  };

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool svg = false;
  std::map<std::string, CLI::App*> subs;
  std::map<std::string, std::pair<CLI::Option*, CLI::Option*>> overrides;
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->required();
    auto* seed_opt = sub->add_option("--seed", seed, "base seed (overrides the config)");
    auto* threads_opt =
        sub->add_option("--threads", threads, "worker threads (overrides the config)")->check(CLI::Range(1u, 1024u));
    sub->add_flag("--svg", svg, "also emit SVG plots");
    subs[name] = sub;
    overrides[name] = {seed_opt, threads_opt};
  }
  auto* verify = app.add_subcommand("verify", "check the checksums in <out>/manifest.json");
  verify->add_option("--out", out_dir, "output directory of a previous run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (verify->parsed()) {
    try {
      const auto problems = verify_manifest(out_dir);
      for (const auto& p : problems) std::cerr << "verify: " << p << '\n';
      if (!problems.empty()) return kFailure;
      std::cout << "verify: all checksums match\n";
      return kSuccess;
    } catch (const std::exception& e) {
      std::cerr << "verify: " << e.what() << '\n';
      return kFailure;
    }
  }

  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    const auto& [seed_opt, threads_opt] = overrides[name];
    try {
      return run_command(name, commands.at(name).second, config_path, out_dir,
                         seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt,
                         threads_opt->count() ? std::optional<unsigned>(threads) : std::nullopt, svg);
    } catch (const ConfigError& e) {
      std::cerr << "circlaw " << name << ": config error: " << e.what() << '\n';
      return kConfigError;
    } catch (const LibraryError& e) {
      std::cerr << "circlaw " << name << ": " << e.what() << '\n';
      return exit_code_for(e.status);
    } catch (const std::exception& e) {
      std::cerr << "circlaw " << name << ": " << e.what() << '\n';
      return kFailure;
    }
  }
  return kFailure;
}
