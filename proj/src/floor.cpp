#include "laban/floor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "laban/errors.hpp"

namespace laban {

namespace {

void check_axes(int up_axis, int depth_axis) {
  if (up_axis < 0 || up_axis > 2 || depth_axis < 0 || depth_axis > 2 || up_axis == depth_axis) {
    throw DataError("floor axes must be distinct indices in {0,1,2}");
  }
}

// Profile of the pinball objective over the slope: for fixed slope the best
// intercept is the ceil(tau*N)-th smallest residual.
class SlopeProfile {
 public:
  SlopeProfile(std::vector<double> depth, std::vector<double> height, double tau)
      : d_(std::move(depth)), h_(std::move(height)), tau_(tau), scratch_(d_.size()) {
    const auto n = static_cast<double>(d_.size());
    k_ = static_cast<std::size_t>(std::max(1.0, std::ceil(tau_ * n - 1e-12))) - 1;
  }

  double intercept(double slope) const {
    for (std::size_t i = 0; i < d_.size(); ++i) scratch_[i] = h_[i] - slope * d_[i];
    std::nth_element(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(k_), scratch_.end());
    return scratch_[k_];
  }

  double loss(double slope, double intercept) const {
    double total = 0.0;
    for (std::size_t i = 0; i < d_.size(); ++i) total += pinball(h_[i] - slope * d_[i] - intercept, tau_);
    return total;
  }

  double operator()(double slope) const { return loss(slope, intercept(slope)); }

  // Index of a sample the optimal line for this slope passes through.
  std::size_t anchor(double slope) const {
    const double b = intercept(slope);
    std::size_t best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d_.size(); ++i) {
      const double gap = std::abs(h_[i] - slope * d_[i] - b);
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    return best;
  }

  const std::vector<double>& depth() const { return d_; }
  const std::vector<double>& height() const { return h_; }

 private:
  std::vector<double> d_;
  std::vector<double> h_;
  double tau_;
  std::size_t k_ = 0;
  mutable std::vector<double> scratch_;
};

double least_squares_slope(const std::vector<double>& d, const std::vector<double>& h) {
  const auto n = static_cast<double>(d.size());
  double md = 0.0, mh = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    md += d[i];
    mh += h[i];
  }
  md /= n;
  mh /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    sxy += (d[i] - md) * (h[i] - mh);
    sxx += (d[i] - md) * (d[i] - md);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

void FloorPlane::validate() const {
  check_axes(up_axis, depth_axis);
  if (!(tau > 0.0 && tau < 1.0)) throw DataError("floor tau must lie in (0, 1)");
  if (!std::isfinite(slope) || !std::isfinite(intercept)) throw DataError("floor parameters must be finite");
  if (!(pinball_loss >= 0.0)) throw DataError("floor pinball loss must be >= 0");
}

FloorPlane FloorPlane::flat() { return FloorPlane{}; }

double pinball_loss(std::span<const Vec3> points, double slope, double intercept, double tau, int up_axis,
                    int depth_axis) {
  double total = 0.0;
  for (const auto& p : points) total += pinball(p[up_axis] - (slope * p[depth_axis] + intercept), tau);
  return total;
}

FloorPlane fit_floor(const PointCloud& cloud, double tau, int up_axis, int depth_axis) {
  check_axes(up_axis, depth_axis);
  if (!(tau > 0.0 && tau < 1.0)) throw DataError("quantile tau must lie in (0, 1)");
  if (cloud.points.size() < 10) {
    throw DataError("point cloud needs at least 10 points, got " + std::to_string(cloud.points.size()));
  }
  std::vector<double> d, h;
  d.reserve(cloud.points.size());
  h.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    if (!is_finite(p)) throw DataError("point cloud contains non-finite coordinates");
    d.push_back(p[depth_axis]);
    h.push_back(p[up_axis]);
  }
  const auto [dmin, dmax] = std::minmax_element(d.begin(), d.end());
  const auto [hmin, hmax] = std::minmax_element(h.begin(), h.end());
  if (!(*dmax - *dmin > 1e-12 * std::max(1.0, std::abs(*dmax)))) {
    throw DataError("singular floor fit: all points share one depth coordinate");
  }
  const double depth_span = *dmax - *dmin;
  const double height_span = std::max(*hmax - *hmin, 1e-12);

  const SlopeProfile g(d, h, tau);

  // Bracket the minimum of the convex profile, starting from least squares.
  const double s0 = least_squares_slope(d, h);
  const double g0 = g(s0);
  const double step0 = std::max(height_span / depth_span, 1e-6) * 0.25;
  auto expand = [&](double dir) {
    double step = step0;
    double previous = g0;
    for (int i = 0; i < 200; ++i) {
      const double x = s0 + dir * step;
      const double gx = g(x);
      if (gx > previous) return x;
      previous = gx;
      step *= 2.0;
    }
    return s0 + dir * step;
  };
  const double lo = expand(-1.0);
  const double hi = expand(+1.0);

  // Golden section on [lo, hi].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double gc = g(c), ge = g(e);
  for (int i = 0; i < 400 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (gc <= ge) {
      b = e;
      e = c;
      ge = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = e;
      gc = ge;
      e = a + inv_phi * (b - a);
      ge = g(e);
    }
  }
  double best_slope = gc <= ge ? c : e;
  double best_loss = std::min(gc, ge);

  // The optimum is a vertex: a line through two samples. Snap to the best
  // vertex among lines through the anchor sample with slopes near the estimate.
  const std::size_t p = g.anchor(best_slope);
  std::vector<std::pair<double, double>> candidates;  // (|slope - best|, slope)
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == d[p]) continue;
    const double s = (h[i] - h[p]) / (d[i] - d[p]);
    candidates.emplace_back(std::abs(s - best_slope), s);
  }
  const std::size_t keep = std::min<std::size_t>(candidates.size(), 16);
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end());
  for (std::size_t i = 0; i < keep; ++i) {
    const double s = candidates[i].second;
    const double loss = g(s);
    if (loss < best_loss) {
      best_loss = loss;
      best_slope = s;
    }
  }

  FloorPlane plane;
  plane.slope = best_slope;
  plane.intercept = g.intercept(best_slope);
  plane.up_axis = up_axis;
  plane.depth_axis = depth_axis;
  plane.tau = tau;
  plane.pinball_loss = g.loss(plane.slope, plane.intercept);
  return plane;
}

double height_above_floor(const Vec3& p, const FloorPlane& plane) {
  return p[plane.up_axis] - (plane.slope * p[plane.depth_axis] + plane.intercept);
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw DataError("percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double f = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * f;
}

double body_height(const JointSequence& seq, const FloorPlane& plane) {
  plane.validate();
  const std::size_t head = seq.skeleton().index(Role::head);
  std::vector<double> heights(seq.frame_count());
  for (std::size_t t = 0; t < heights.size(); ++t) heights[t] = height_above_floor(seq.at(t, head), plane);
  return percentile(std::move(heights), 0.95);
}

PointCloud read_point_cloud(std::istream& in) {
  PointCloud cloud;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    Vec3 p;
    if (!(fields >> p.x)) continue;
    if (!(fields >> p.y >> p.z)) throw ParseError("expected three coordinates", line_no);
    if (!is_finite(p)) throw ParseError("non-finite coordinate", line_no);
    cloud.points.push_back(p);
  }
  return cloud;
}

PointCloud load_point_cloud(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_point_cloud(in);
}

void save_floor(const std::filesystem::path& path, const FloorPlane& plane) {
  nlohmann::json j;
  j["slope"] = plane.slope;
  j["intercept"] = plane.intercept;
  j["up_axis"] = plane.up_axis;
  j["depth_axis"] = plane.depth_axis;
  j["tau"] = plane.tau;
  j["pinball_loss"] = plane.pinball_loss;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

FloorPlane load_floor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  FloorPlane plane;
  try {
    const auto j = nlohmann::json::parse(in);
    plane.slope = j.at("slope").get<double>();
    plane.intercept = j.at("intercept").get<double>();
    plane.up_axis = j.at("up_axis").get<int>();
    plane.depth_axis = j.at("depth_axis").get<int>();
    plane.tau = j.at("tau").get<double>();
    plane.pinball_loss = j.value("pinball_loss", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad floor file " + path.string() + ": " + e.what());
  }
  plane.validate();
  return plane;
}

}  // namespace laban
