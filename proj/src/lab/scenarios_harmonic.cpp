#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "tnls/critical_norms.hpp"
#include "tnls/errors.hpp"
#include "tnls/evolution.hpp"
#include "tnls/lab/scenarios.hpp"
#include "tnls/lab/sweep.hpp"

namespace tnls::lab {

SpectralField strichartz_data(const TorusGeometry& g, std::int64_t N, const std::string& kind, std::uint64_t seed) {
  const DyadicShell shell{N};
  SpectralField f(g);
  if (kind == "single_mode") {
    const Mode m{{static_cast<int>(N), 0, 0, 0}};
    f.set_coefficient(m, 1.0);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> modulus(0.5, 1.5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double a = kind == "coherent" ? modulus(rng) : gauss(rng);
      const double b = kind == "coherent" ? 0.0 : gauss(rng);
      if (shell.contains(mode_at(g, i))) f[i] = cplx(a, b);
    }
    if (kind == "coherent") {
      // Real, even coefficients: every mode is in phase at x = 0, t = 0 (Knapp-type focusing).
      SpectralField sym = f;
      for (std::size_t i = 0; i < f.size(); ++i) {
        const Mode m = mode_at(g, i);
        if (!shell.contains(m)) continue;
        const Mode neg{{-m.n[0], -m.n[1], -m.n[2], -m.n[3]}};
        sym[i] = 0.5 * (f[i] + f.coefficient(neg));
      }
      f = sym;
    } else if (kind != "random_phase") {
      throw ConfigError("data", "unknown Strichartz data '" + kind + "'");
    }
  }
  const double l2 = l2_norm(f);
  if (l2 > 0.0) f = cplx(1.0 / l2) * f;
  return f;
}

StrichartzCell strichartz_cell(double lambda, std::int64_t N, const std::vector<double>& exponents,
                               const std::string& kind, std::uint64_t seed, double samples_factor) {
  for (double p : exponents) {
    if (!(p > 3.0)) throw DomainError("Strichartz exponents need p > 3");
  }
  int G = static_cast<int>(3 * N);
  G += G % 2;
  const TorusGeometry g = TorusGeometry::cube(lambda, std::max(8, G));
  const SpectralField f = strichartz_data(g, N, kind, seed);

  // |u(t + P)| is a translate of |u(t)| with P = lambda^2 / (4 pi): sample [0, P], graded
  // towards both refocusing ends on the dispersive scale lambda^2 / (2 pi N)^2.
  const double P = lambda * lambda / (4.0 * kPi);
  const double width = lambda * lambda / (4.0 * kPi * kPi * static_cast<double>(N * N));
  const int n_side = 48;
  const int n_mid = static_cast<int>(std::ceil(samples_factor * static_cast<double>(N * N)));
  std::vector<double> side{0.0};
  {
    const double first = std::min(0.02 * width, 0.25 * P / n_side);
    double lo = 1.0 + 1e-12, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
      const double q = 0.5 * (lo + hi);
      (first * (std::pow(q, n_side) - 1.0) / (q - 1.0) < 0.25 * P ? lo : hi) = q;
    }
    double t = 0.0, h = first;
    for (int i = 1; i < n_side; ++i) {
      t += h;
      side.push_back(t);
      h *= lo;
    }
  }
  std::vector<double> times = side;
  for (int i = 0; i <= n_mid; ++i) times.push_back(0.25 * P + 0.5 * P * i / std::max(1, n_mid));
  for (auto it = side.rbegin(); it != side.rend(); ++it) times.push_back(P - *it);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  // |u|^p = (|u|^2)^{p/2}; even integer exponents avoid pow.
  std::vector<int> int_half(exponents.size(), 0);
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    const double h = 0.5 * exponents[k];
    if (h == std::floor(h) && h <= 8.0) int_half[k] = static_cast<int>(h);
  }
  std::vector<std::vector<double>> integrand(exponents.size());
  std::vector<double> l4;
  double sup = 0.0;
  const double dv = g.cell_volume();
  for (double t : times) {
    const PhysicalField u = inverse_transform(free_propagate(f, t));
    std::vector<double> sums(exponents.size(), 0.0);
    double s4 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double m2 = std::norm(u[i]);
      sup = std::max(sup, m2);
      s4 += m2 * m2;
      for (std::size_t k = 0; k < exponents.size(); ++k) {
        if (int_half[k] > 0) {
          double v = m2;
          for (int j = 1; j < int_half[k]; ++j) v *= m2;
          sums[k] += v;
        } else {
          sums[k] += std::pow(m2, 0.5 * exponents[k]);
        }
      }
    }
    for (std::size_t k = 0; k < exponents.size(); ++k) integrand[k].push_back(sums[k] * dv);
    l4.push_back(s4 * dv);
  }
  StrichartzCell cell;
  cell.N = N;
  cell.seed = seed;
  cell.samples = times.size();
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    cell.lp.push_back(std::pow(integrate_periodic(times, integrand[k], P, -1.0, 1.0), 1.0 / exponents[k]));
  }
  cell.l2 = l2_norm(f);
  cell.h1 = h1_norm(f);
  const double n = static_cast<double>(N);
  cell.z = std::pow(n * n * integrate_periodic(times, l4, P, 0.0, 1.0), 0.25);
  cell.concentration = std::sqrt(sup) / n;
  return cell;
}

ScenarioResult run_strichartz(const Config& config, OutputDir& out, int threads) {
  const TorusGeometry g = config.geometry();
  const Vec4& lam = g.lambda();
  if (!recurrence_period(g)) throw ConfigError("lambda", "the Strichartz scenario needs equal side lengths");
  const auto ps = config.reals("strichartz", "p");
  const auto Ns = config.integers("strichartz", "N");
  const int seeds = static_cast<int>(config.integer("strichartz", "seeds"));
  const std::string kind = config.text("strichartz", "data");
  const double factor = config.real("strichartz", "samples_factor");
  const std::uint64_t base = kind == "single_mode" ? 0 : config.seed();

  const std::size_t cells = Ns.size() * static_cast<std::size_t>(seeds);
  const auto results = parallel_cells<StrichartzCell>(cells, threads, [&](std::size_t i) {
    const std::int64_t N = Ns[i / seeds];
    const int s = static_cast<int>(i % seeds);
    return strichartz_cell(lam[0], N, ps, kind, base + static_cast<std::uint64_t>(s), factor);
  });

  CsvTable table{{"N", "seed_index", "p", "lp", "lp_over_l2", "bound_ratio", "z", "concentration", "refined_ratio"}, {}};
  std::vector<double> refined(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const auto& c = results[i];
    refined[i] = c.z / (std::pow(c.h1, 5.0 / 6.0) * std::pow(c.concentration, 1.0 / 6.0));
    for (std::size_t k = 0; k < ps.size(); ++k) {
      const double bound = std::pow(static_cast<double>(c.N), 2.0 - 6.0 / ps[k]) * c.l2;
      table.rows.push_back({static_cast<double>(c.N), static_cast<double>(i % seeds), ps[k], c.lp[k],
                            c.lp[k] / c.l2, c.lp[k] / bound, c.z, c.concentration, refined[i]});
    }
  }
  out.csv("strichartz.csv", table, "per-shell Strichartz table");

  ScenarioResult res;
  res.results["data"] = kind;
  res.results["time_window"] = {-1.0, 1.0};
  res.results["N_range"] = {Ns.front(), Ns.back()};
  nlohmann::ordered_json fits = nlohmann::ordered_json::array();
  const double tol = config.real("strichartz", "slope_tolerance");
  for (std::size_t k = 0; k < ps.size(); ++k) {
    std::vector<double> xs, ys;
    for (std::size_t n = 0; n < Ns.size(); ++n) {
      double logsum = 0.0;
      for (int s = 0; s < seeds; ++s) {
        const auto& c = results[n * seeds + s];
        logsum += std::log(c.lp[k] / c.l2);
      }
      xs.push_back(static_cast<double>(Ns[n]));
      ys.push_back(std::exp(logsum / seeds));
    }
    const double target = 2.0 - 6.0 / ps[k];
    nlohmann::ordered_json fj{{"p", ps[k]}, {"target_slope", target}};
    if (Ns.size() >= 2) {
      const LinearFit fit = loglog_fit(xs, ys);
      fj["fit"] = fit_json(fit);
      fj["table"] = {{"N", xs}, {"lp_over_l2", ys}};
      if (kind != "single_mode") {
        res.checks.push_back(check_less("slope_error_p" + format_double(ps[k]), std::abs(fit.slope - target), tol));
      }
    }
    fits.push_back(fj);
  }
  res.results["fits"] = fits;

  double fitted = 0.0, worst = 0.0;
  for (std::size_t n = 0; n < Ns.size(); ++n) fitted = std::max(fitted, refined[n * seeds]);
  for (double r : refined) worst = std::max(worst, r);
  res.results["refined"] = {{"constant_first_seed", fitted}, {"max_ratio_all_seeds", worst},
                            {"slack", config.real("strichartz", "refined_slack")}};
  res.checks.push_back(check_less("refined_ratio_over_constant", worst / fitted,
                                  config.real("strichartz", "refined_slack") + 1e-12));
  return res;
}

SparseWave random_shell_wave(const Vec4& lambda, std::int64_t N, int count, std::uint64_t seed) {
  if (N < 1 || count < 1) throw DomainError("shell wave needs N >= 1 and count >= 1");
  const DyadicShell shell{N};
  std::mt19937_64 rng(seed);
  SparseWave w;
  const double side = static_cast<double>(2 * N + 1);
  if (side * side * side * side <= 4e6) {
    std::vector<Index4> all;
    const int n = static_cast<int>(N);
    for (int a = -n; a <= n; ++a)
      for (int b = -n; b <= n; ++b)
        for (int c = -n; c <= n; ++c)
          for (int d = -n; d <= n; ++d) {
            if (shell.contains(Mode{{a, b, c, d}})) all.push_back({a, b, c, d});
          }
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min<std::size_t>(all.size(), static_cast<std::size_t>(count)));
    w.modes = all;
  } else {
    std::uniform_int_distribution<std::int64_t> pick(-N, N);
    std::set<Index4> seen;
    while (static_cast<int>(w.modes.size()) < count) {
      const Index4 m{int(pick(rng)), int(pick(rng)), int(pick(rng)), int(pick(rng))};
      if (shell.contains(Mode{m}) && seen.insert(m).second) w.modes.push_back(m);
    }
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < w.modes.size(); ++i) {
    w.coefficients.emplace_back(gauss(rng), gauss(rng));
    sum += std::norm(w.coefficients.back());
  }
  const double vol = lambda[0] * lambda[1] * lambda[2] * lambda[3];
  const double scale = 1.0 / std::sqrt(vol * sum);
  for (auto& c : w.coefficients) c *= scale;
  return w;
}

double bilinear_product_norm(const Vec4& lambda, const SparseWave& u1, const SparseWave& u2) {
  struct Term {
    Index4 k;
    cplx z;
    double omega;
  };
  auto disp = [&](const Index4& n) {
    double s = 0.0;
    for (int i = 0; i < kDim; ++i) {
      const double w = 2.0 * kPi * n[i] / lambda[i];
      s += w * w;
    }
    return s;
  };
  std::vector<Term> terms;
  terms.reserve(u1.modes.size() * u2.modes.size());
  for (std::size_t a = 0; a < u1.modes.size(); ++a) {
    for (std::size_t b = 0; b < u2.modes.size(); ++b) {
      Index4 k;
      for (int i = 0; i < kDim; ++i) k[i] = u1.modes[a][i] + u2.modes[b][i];
      terms.push_back({k, u1.coefficients[a] * u2.coefficients[b], disp(u1.modes[a]) + disp(u2.modes[b])});
    }
  }
  std::stable_sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.k < y.k; });
  // int_0^1 e^{-i w t} dt
  auto kernel = [](double w) {
    if (std::abs(w) < 1e-12) return cplx(1.0, 0.0);
    return (1.0 - std::polar(1.0, -w)) / cplx(0.0, w);
  };
  double total = 0.0;
  for (std::size_t lo = 0; lo < terms.size();) {
    std::size_t hi = lo;
    while (hi < terms.size() && terms[hi].k == terms[lo].k) ++hi;
    cplx s{};
    for (std::size_t a = lo; a < hi; ++a) {
      for (std::size_t b = lo; b < hi; ++b) s += terms[a].z * std::conj(terms[b].z) * kernel(terms[a].omega - terms[b].omega);
    }
    total += s.real();
    lo = hi;
  }
  const double vol = lambda[0] * lambda[1] * lambda[2] * lambda[3];
  return std::sqrt(std::max(0.0, vol * total));
}

ScenarioResult run_bilinear(const Config& config, OutputDir& out, int threads) {
  const Vec4 lam = config.geometry().lambda();
  const auto N1 = config.integers("bilinear", "N1");
  const auto N2 = config.integers("bilinear", "N2");
  const int seeds = static_cast<int>(config.integer("bilinear", "seeds"));
  const int modes = static_cast<int>(config.integer("bilinear", "modes"));
  const std::uint64_t base = config.seed();
  struct Cell {
    double norm = 0.0;
  };
  const std::size_t cells = N1.size() * static_cast<std::size_t>(seeds);
  const auto results = parallel_cells<Cell>(cells, threads, [&](std::size_t i) {
    const std::size_t pair = i / seeds;
    const std::uint64_t s = base + 1000003ULL * pair + 2 * (i % seeds);
    const SparseWave u1 = random_shell_wave(lam, N1[pair], modes, s);
    const SparseWave u2 = random_shell_wave(lam, N2[pair], modes, s + 1);
    return Cell{bilinear_product_norm(lam, u1, u2)};
  });
  CsvTable table{{"N1", "N2", "seed_index", "product_norm", "normalized", "envelope"}, {}};
  std::vector<double> env, val;
  for (std::size_t i = 0; i < cells; ++i) {
    const double n1 = static_cast<double>(N1[i / seeds]), n2 = static_cast<double>(N2[i / seeds]);
    const double e = n2 / n1 + 1.0 / n2;
    const double q = results[i].norm / n2;
    table.rows.push_back({n1, n2, static_cast<double>(i % seeds), results[i].norm, q, e});
    env.push_back(e);
    val.push_back(q);
  }
  out.csv("bilinear.csv", table, "bilinear products");

  ScenarioResult res;
  res.results["normalization"] = "||u1 u2||_{L2([0,1] x T^4)} / (N2 ||u1(0)||_2 ||u2(0)||_2)";
  std::set<double> distinct(env.begin(), env.end());
  if (distinct.size() < 2) throw ConfigError("N1", "the bilinear fit needs at least two distinct pairs");
  const LinearFit fit = loglog_fit(env, val);
  const double conf = config.real("bilinear", "confidence");
  const double lower = fit.slope_lower_bound(conf);
  const double rel_residual = std::exp(fit.rms_residual) - 1.0;
  res.results["kappa"] = fit.slope;
  res.results["kappa_lower_bound"] = lower;
  res.results["confidence"] = conf;
  res.results["relative_residual"] = rel_residual;
  res.results["fit"] = fit_json(fit);
  res.checks.push_back(check_greater("kappa_lower_bound", lower, 0.0));
  res.checks.push_back(check_less("relative_residual", rel_residual, config.real("bilinear", "residual_tolerance")));
  return res;
}

double kernel_origin_by_counts(int M) {
  if (M < 1) throw DomainError("kernel order M must be >= 1");
  const CutoffProfile eta;
  const std::int64_t qmax = 4LL * M * M;
  double sum = 0.0;
  for (std::int64_t q = 0; q <= qmax; ++q) {
    // Jacobi: r_4(q) = 8 sum_{d | q, 4 does not divide d} d.
    std::int64_t r4 = 1;
    if (q > 0) {
      std::int64_t s = 0;
      for (std::int64_t d = 1; d * d <= q; ++d) {
        if (q % d != 0) continue;
        if (d % 4 != 0) s += d;
        const std::int64_t e = q / d;
        if (e != d && e % 4 != 0) s += e;
      }
      r4 = 8 * s;
    }
    sum += static_cast<double>(r4) * cutoff_radial(eta, std::sqrt(static_cast<double>(q)) / M);
  }
  return sum;
}

}  // namespace tnls::lab
