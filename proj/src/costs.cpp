#include "admm_ilqr/costs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace admm_ilqr {

namespace {

// Position residual e (squared distance = e^T e) and its Jacobian de/dp.
struct PositionResidual {
  Point2 e = Point2::Zero();
  Eigen::Matrix2d de_dp = Eigen::Matrix2d::Zero();
};

PositionResidual position_residual(const State& x, const Reference& reference) {
  PositionResidual res;
  if (reference.is_lateral()) {
    res.e << 0.0, x.py - *reference.lateral_target;
    res.de_dp(1, 1) = 1.0;
    return res;
  }
  const Point2 p(x.px, x.py);
  const PolylineProjection proj = polyline_distance(p, reference.polyline);
  res.e = p - proj.closest;
  res.de_dp = Eigen::Matrix2d::Identity();
  if (proj.interior) {
    res.de_dp -= proj.tangent * proj.tangent.transpose();
  }
  return res;
}

double speed_error(const State& x, const Reference& reference) {
  return reference.speed ? x.v - *reference.speed : 0.0;
}

double state_terms(const State& x, const CostWeights& weights, const Reference& reference) {
  const PositionResidual pos = position_residual(x, reference);
  const double q2 = reference.speed ? weights.q2 : 0.0;
  const double ev = speed_error(x, reference);
  return weights.q1 * pos.e.squaredNorm() + q2 * ev * ev;
}

TerminalExpansion state_expansion(const State& x, const CostWeights& weights,
                                  const Reference& reference) {
  const PositionResidual pos = position_residual(x, reference);
  const double q2 = reference.speed ? weights.q2 : 0.0;
  TerminalExpansion out;
  out.lx.head<2>() = 2.0 * weights.q1 * pos.de_dp.transpose() * pos.e;
  out.lx(3) = 2.0 * q2 * speed_error(x, reference);
  out.lxx.topLeftCorner<2, 2>() = 2.0 * weights.q1 * pos.de_dp.transpose() * pos.de_dp;
  out.lxx(3, 3) = 2.0 * q2;
  return out;
}

}  // namespace

void CostWeights::validate() const {
  if (q1 < 0.0 || q2 < 0.0 || r1 < 0.0 || r2 < 0.0 || terminal_scale < 0.0) {
    throw std::invalid_argument("cost weights must be non-negative");
  }
  if (q1 == 0.0 && q2 == 0.0 && r1 == 0.0 && r2 == 0.0) {
    throw std::invalid_argument("at least one cost weight must be positive");
  }
}

Reference Reference::lateral(double py_ref, std::optional<double> v_ref) {
  Reference ref;
  ref.lateral_target = py_ref;
  ref.speed = v_ref;
  return ref;
}

Reference Reference::path(std::vector<Point2> points, std::optional<double> v_ref) {
  Reference ref;
  ref.polyline = std::move(points);
  ref.speed = v_ref;
  ref.validate();
  return ref;
}

void Reference::validate() const {
  if (lateral_target.has_value() == !polyline.empty()) {
    throw std::invalid_argument("reference needs exactly one of polyline or lateral target");
  }
  if (lateral_target) {
    return;
  }
  if (polyline.size() < 2) {
    throw std::invalid_argument("reference polyline needs at least two points");
  }
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    if (polyline[i] == polyline[i - 1]) {
      throw std::invalid_argument("reference polyline has repeated consecutive points");
    }
  }
}

PolylineProjection polyline_distance(const Point2& p, std::span<const Point2> polyline) {
  PolylineProjection best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const Point2& a = polyline[i];
    const Point2 seg = polyline[i + 1] - a;
    const double len2 = seg.squaredNorm();
    const double s = (p - a).dot(seg) / len2;
    const double s_clamped = std::clamp(s, 0.0, 1.0);
    const Point2 foot = a + s_clamped * seg;
    const double dist = (p - foot).norm();
    if (dist < best.distance) {
      best.distance = dist;
      best.closest = foot;
      best.tangent = seg / std::sqrt(len2);
      best.segment = i;
      best.interior = s > 0.0 && s < 1.0;
    }
  }
  return best;
}

double stage_cost(const State& x, const Control& u, const CostWeights& weights,
                  const Reference& reference) {
  return state_terms(x, weights, reference) + weights.r1 * u.w * u.w + weights.r2 * u.a * u.a;
}

StageExpansion stage_expansion(const State& x, const Control& u, const CostWeights& weights,
                               const Reference& reference) {
  const TerminalExpansion s = state_expansion(x, weights, reference);
  StageExpansion out;
  out.lx = s.lx;
  out.lxx = s.lxx;
  out.lu << 2.0 * weights.r1 * u.w, 2.0 * weights.r2 * u.a;
  out.luu.diagonal() << 2.0 * weights.r1, 2.0 * weights.r2;
  return out;
}

double terminal_cost(const State& x, const CostWeights& weights, const Reference& reference) {
  if (weights.terminal_scale == 0.0) {
    return 0.0;
  }
  return weights.terminal_scale * state_terms(x, weights, reference);
}

TerminalExpansion terminal_expansion(const State& x, const CostWeights& weights,
                                     const Reference& reference) {
  TerminalExpansion out = state_expansion(x, weights, reference);
  out.lx *= weights.terminal_scale;
  out.lxx *= weights.terminal_scale;
  return out;
}

QuadraticCostForm quadratic_form(const CostWeights& weights, const Reference& reference) {
  if (!reference.is_lateral()) {
    throw std::invalid_argument("quadratic form exists only for a lateral reference");
  }
  QuadraticCostForm form;
  const double q2 = reference.speed ? weights.q2 : 0.0;
  form.C.diagonal() << 0.0, weights.q1, 0.0, q2, weights.r1, weights.r2;
  form.r << 0.0, *reference.lateral_target, 0.0, reference.speed.value_or(0.0), 0.0, 0.0;
  return form;
}

TrackingObjective::TrackingObjective(CostWeights weights, Reference reference)
    : weights_(weights), reference_(std::move(reference)) {
  weights_.validate();
  reference_.validate();
}

double TrackingObjective::stage(int, const StateVector& x, const ControlVector& u) const {
  return stage_cost(State::from(x), Control::from(u), weights_, reference_);
}

StageExpansion TrackingObjective::stage_expansion(int, const StateVector& x,
                                                  const ControlVector& u) const {
  return admm_ilqr::stage_expansion(State::from(x), Control::from(u), weights_, reference_);
}

double TrackingObjective::terminal(const StateVector& x) const {
  return terminal_cost(State::from(x), weights_, reference_);
}

TerminalExpansion TrackingObjective::terminal_expansion(const StateVector& x) const {
  return admm_ilqr::terminal_expansion(State::from(x), weights_, reference_);
}

}  // namespace admm_ilqr
