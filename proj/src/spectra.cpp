#include "abpump/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "abpump/errors.hpp"

namespace abpump {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Eigensystem {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

class TwoSiteModel {
 public:
  TwoSiteModel(int particles, double interaction, double hopping, double amplitude)
      : graph_(build_chain(2)), basis_(2, static_cast<std::size_t>(particles)) {
    params_.hopping = hopping;
    params_.interaction = interaction;
    params_.amplitude = amplitude;
  }

  Eigensystem solve(double phi) const {
    const SparseHamiltonian h = assemble(graph_, basis_, at_phase(params_, phi));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h.dense(0.0));
    return {eig.eigenvalues(), eig.eigenvectors()};
  }

  std::size_t start_index() const {
    Occupation occ{static_cast<std::uint8_t>(basis_.particles()), 0};
    return basis_.index_of(occ);
  }

 private:
  LatticeGraph graph_;
  FockBasis basis_;
  ModelParams params_;
};

double gap_of(const Eigen::VectorXd& values, Eigen::Index level) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < values.size(); ++k)
    if (k != level) gap = std::min(gap, std::abs(values[k] - values[level]));
  return gap;
}

Eigen::Index best_overlap(const Eigen::MatrixXcd& vectors, const Eigen::VectorXcd& reference) {
  Eigen::Index best = 0;
  (vectors.adjoint() * reference).cwiseAbs().maxCoeff(&best);
  return best;
}

struct TrackPoint {
  double phi;
  Eigen::Index level;
  double gap;
};

// Follows the branch from a to b. A change of level index within one step
// means an avoided crossing narrower than the step; the interval is halved
// until the branch is followed adiabatically or the depth limit is hit.
void track(const TwoSiteModel& model, double phi_a, const Eigen::VectorXcd& vec_a,
           Eigen::Index level_a, double phi_b, int depth, int max_depth,
           std::vector<TrackPoint>& points, Eigen::VectorXcd& vec_out, Eigen::Index& level_out) {
  const Eigensystem sys = model.solve(phi_b);
  const Eigen::Index level = best_overlap(sys.vectors, vec_a);
  if (level != level_a && depth < max_depth) {
    const double mid = 0.5 * (phi_a + phi_b);
    Eigen::VectorXcd vec_mid;
    Eigen::Index level_mid = 0;
    track(model, phi_a, vec_a, level_a, mid, depth + 1, max_depth, points, vec_mid, level_mid);
    track(model, mid, vec_mid, level_mid, phi_b, depth + 1, max_depth, points, vec_out, level_out);
    return;
  }
  vec_out = sys.vectors.col(level);
  level_out = level;
  points.push_back({phi_b, level, gap_of(sys.values, level)});
}

}  // namespace

ModelParams at_phase(ModelParams params, double phi) {
  params.phase = phi;
  return params;
}

std::vector<double> phase_grid(std::size_t count) {
  if (count == 0) throw ConfigError("phase grid needs at least one point");
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k)
    grid[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(count);
  return grid;
}

Eigen::VectorXd lowest_eigenvalues(const FrozenHamiltonian& h, std::size_t k, double tolerance) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  if (k == 0) return {};
  if (static_cast<Eigen::Index>(k) > n) throw ConfigError("more levels requested than the dimension");
  // Block Lanczos with full reorthogonalization and explicit Rayleigh-Ritz.
  const Eigen::Index block = static_cast<Eigen::Index>(std::min<std::size_t>(k, 8));
  const Eigen::Index max_cols = std::min<Eigen::Index>(n, std::max<Eigen::Index>(300, 4 * block));

  Eigen::MatrixXcd v(n, max_cols);
  Eigen::MatrixXcd hv(n, max_cols);
  Eigen::MatrixXcd start(n, block);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index b = 0; b < block; ++b)
      start(i, b) = Complex(std::cos(0.7 * static_cast<double>(i + 1) * static_cast<double>(b + 1)),
                            0.3 * std::sin(1.3 * static_cast<double>(i + b + 1)));

  Eigen::Index cols = 0;
  State out(n);
  Eigen::VectorXd best;
  auto append = [&](Eigen::MatrixXcd candidates) {
    for (Eigen::Index c = 0; c < candidates.cols() && cols < max_cols; ++c) {
      State w = candidates.col(c);
      for (int pass = 0; pass < 2; ++pass)
        if (cols > 0) w -= v.leftCols(cols) * (v.leftCols(cols).adjoint() * w);
      const double norm = w.norm();
      if (norm < 1e-10) continue;
      v.col(cols) = w / norm;
      h.apply(v.col(cols), out);
      hv.col(cols) = out;
      ++cols;
    }
  };
  append(start);
  Eigen::Index done = 0;
  int rounds = 0;
  while (true) {
    const Eigen::Index previous = cols;
    append(hv.middleCols(done, cols - done));
    done = previous;
    const bool exhausted = cols == previous || cols == max_cols;
    if (++rounds % 4 != 0 && !exhausted) continue;
    Eigen::MatrixXcd projected = v.leftCols(cols).adjoint() * hv.leftCols(cols);
    projected = 0.5 * (projected + projected.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(projected);
    const auto want = static_cast<Eigen::Index>(k);
    if (cols < want) {
      if (exhausted) throw NumericalError("Krylov space collapsed before reaching the requested levels");
      continue;
    }
    double worst = 0.0;
    for (Eigen::Index j = 0; j < want; ++j) {
      const State y = eig.eigenvectors().col(j);
      const State r = hv.leftCols(cols) * y - eig.eigenvalues()[j] * (v.leftCols(cols) * y);
      worst = std::max(worst, r.norm());
    }
    best = eig.eigenvalues().head(want);
    if (worst <= tolerance || cols == n) return best;
    if (exhausted) {
      throw NumericalError("lowest eigenvalues did not converge: residual " + std::to_string(worst));
    }
  }
}

SpectralFlow instantaneous_spectrum(const LatticeGraph& graph, const FockBasis& basis,
                                    const ModelParams& params, const std::vector<double>& grid,
                                    const SpectrumOptions& options) {
  const std::size_t dim = basis.size();
  const bool iterative = dim > options.dense_cap;
  if (iterative && !options.lowest) {
    throw ConfigError("dimension " + std::to_string(dim) + " exceeds the dense cap " +
                      std::to_string(options.dense_cap) + "; request the lowest levels instead");
  }
  const std::size_t levels = options.lowest ? std::min(*options.lowest, dim) : dim;
  if (levels == 0) throw ConfigError("at least one level must be requested");

  SpectralFlow flow;
  flow.phases = grid;
  flow.levels.resize(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(levels));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const SparseHamiltonian h = assemble(graph, basis, at_phase(params, grid[g]));
    Eigen::VectorXd values;
    if (iterative) {
      values = lowest_eigenvalues(FrozenHamiltonian(h, 0.0), levels);
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h.dense(0.0, options.dense_cap),
                                                          Eigen::EigenvaluesOnly);
      values = eig.eigenvalues().head(static_cast<Eigen::Index>(levels));
    }
    flow.levels.row(static_cast<Eigen::Index>(g)) = values.transpose();
  }
  return flow;
}

void write_spectrum_csv(std::ostream& os, const SpectralFlow& flow) {
  os << "phi";
  for (Eigen::Index k = 0; k < flow.levels.cols(); ++k) os << ",E" << k;
  os << '\n' << std::setprecision(12);
  for (std::size_t g = 0; g < flow.phases.size(); ++g) {
    os << flow.phases[g];
    for (Eigen::Index k = 0; k < flow.levels.cols(); ++k)
      os << ',' << flow.levels(static_cast<Eigen::Index>(g), k);
    os << '\n';
  }
}

Branch parse_branch(const std::string& text) {
  if (text == "top") return Branch::top;
  if (text == "bottom") return Branch::bottom;
  throw ConfigError("unknown branch '" + text + "' (expected top or bottom)");
}

std::string to_string(Branch branch) { return branch == Branch::top ? "top" : "bottom"; }

GapReport two_site_gap(int particles, double interaction, Branch branch, double hopping,
                       const GapOptions& options) {
  if (particles < 1) throw ConfigError("two-site gap needs at least one particle");
  if (options.grid < 3) throw ConfigError("gap grid needs at least three points");
  const TwoSiteModel model(particles, interaction, hopping, options.amplitude);

  // |N,0> -> |0,N> takes one third of a period, centred on the degeneracy.
  const double phi_start = branch == Branch::top ? 0.0 : std::numbers::pi;
  const double span = kTwoPi / 3.0;
  const auto steps = std::max<std::size_t>(2, options.grid / 3);

  Eigensystem sys = model.solve(phi_start);
  State start = State::Zero(sys.vectors.rows());
  start[static_cast<Eigen::Index>(model.start_index())] = 1.0;
  Eigen::Index level = best_overlap(sys.vectors, start);
  Eigen::VectorXcd vec = sys.vectors.col(level);

  std::vector<TrackPoint> points{{phi_start, level, gap_of(sys.values, level)}};
  for (std::size_t s = 1; s <= steps; ++s) {
    const double phi_b = phi_start + span * static_cast<double>(s) / static_cast<double>(steps);
    Eigen::VectorXcd next;
    Eigen::Index next_level = 0;
    track(model, points.back().phi, vec, level, phi_b, 0, options.max_refinements, points, next,
          next_level);
    vec = std::move(next);
    level = next_level;
  }

  std::size_t at = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].gap < points[at].gap) at = i;

  // Golden-section refinement between the neighbours of the coarse minimum.
  double lo = points[at > 0 ? at - 1 : 0].phi;
  double hi = points[std::min(at + 1, points.size() - 1)].phi;
  const Eigen::Index tracked = points[at].level;
  auto gap_at = [&](double phi) { return gap_of(model.solve(phi).values, tracked); };
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = gap_at(x1);
  double f2 = gap_at(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(hi)); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = gap_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = gap_at(x2);
    }
    if (std::abs(f1 - f2) < 1e-3 * options.tolerance && hi - lo < 1e-9) break;
  }

  GapReport report;
  report.branch = branch;
  report.particles = particles;
  report.interaction = interaction;
  report.hopping = hopping;
  report.min_gap = points[at].gap;
  report.phase_at_min = points[at].phi;
  const double refined = std::min(f1, f2);
  if (refined < report.min_gap) {
    report.min_gap = refined;
    report.phase_at_min = f1 < f2 ? x1 : x2;
  }
  return report;
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ConfigError("regression inputs differ in length");
  if (x.size() < 3) throw ConfigError("degenerate fit: at least three points are needed");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) throw ConfigError("degenerate fit: all abscissae coincide");
  return (n * sxy - sx * sy) / denom;
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw ConfigError("log grid bounds must be positive");
  if (count < 2) return {lo};
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(count - 1));
  return out;
}

GapScaling fit_gap_scaling(int particles, const std::vector<double>& interactions, Branch branch,
                           const GapOptions& options) {
  if (interactions.size() < 3) throw ConfigError("degenerate fit: at least three U values are needed");
  GapScaling fit;
  fit.interactions = interactions;
  std::vector<double> log_u, log_gap;
  for (double u : interactions) {
    const double gap = two_site_gap(particles, u, branch, 1.0, options).min_gap;
    fit.gaps.push_back(gap);
    log_u.push_back(std::log(u));
    log_gap.push_back(std::log(gap));
  }
  fit.u_exponent = -regression_slope(log_u, log_gap);

  // J exponent at the geometric-mean U, with J kept well below U.
  double mean_log = 0.0;
  for (double u : log_u) mean_log += u;
  const double u_mid = std::exp(mean_log / static_cast<double>(log_u.size()));
  std::vector<double> log_j, log_gap_j;
  for (double j : {0.5, std::sqrt(0.5), 1.0}) {
    log_j.push_back(std::log(j));
    log_gap_j.push_back(std::log(two_site_gap(particles, u_mid, branch, j, options).min_gap));
  }
  fit.j_exponent = regression_slope(log_j, log_gap_j);
  return fit;
}

}  // namespace abpump
