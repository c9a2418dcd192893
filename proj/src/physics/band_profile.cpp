#include <algorithm>
#include <cmath>
#include <utility>

#include "qdpc/constants.hpp"
#include "qdpc/errors.hpp"
#include "qdpc/numerics/quadrature.hpp"
#include "qdpc/physics.hpp"

namespace qdpc {

BandProfile::BandProfile(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw InvalidGeometry("band profile needs at least one segment");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!(s.end_nm >= s.start_nm)) throw InvalidGeometry("band profile segment with negative length");
    if (i > 0 && s.start_nm != segments_[i - 1].end_nm) {
      throw InvalidGeometry("band profile segments must be contiguous");
    }
  }
}

double BandProfile::potential(double x_nm) const {
  for (const auto& s : segments_) {
    if (x_nm < s.end_nm) return s.potential(std::max(x_nm, s.start_nm));
  }
  return segments_.back().end_potential();
}

double BandProfile::barrier_top() const {
  double top = -INFINITY;
  for (const auto& s : segments_) {
    if (s.region != Region::kBarrier) continue;
    top = std::max({top, s.start_potential_eV, s.end_potential()});
  }
  if (top == -INFINITY) {
    for (const auto& s : segments_) {
      if (s.region == Region::kDot) top = s.end_potential();
    }
  }
  return top;
}

double BandProfile::barrier_base() const {
  for (const auto& s : segments_) {
    if (s.region == Region::kBarrier) return s.start_potential_eV;
  }
  return barrier_top();
}

BandProfile build_profile(const DeviceParams& p, BarrierGeometry geometry) {
  const double w = p.dot_width_nm;
  const double fd = p.dot_field_V_per_nm;
  const double half_drop = fd * w / 2.0;

  double barrier_length = p.barrier_width_nm;
  double barrier_slope = p.barrier_field_V_per_nm;
  if (geometry == BarrierGeometry::kClosedFormEquivalent && fd > 0.0) {
    barrier_length = p.barrier_field_V_per_nm * p.barrier_width_nm / fd;
    barrier_slope = fd;
  }

  std::vector<Segment> segments;
  segments.push_back({0.0, w, half_drop, -fd, Region::kDot});
  double x = w;
  if (barrier_length > 0.0) {
    segments.push_back({x, x + barrier_length, p.conduction_offset_eV - half_drop, barrier_slope,
                        Region::kBarrier});
    x += barrier_length;
  }
  // Collector side: flat band at the level of the dot's downhill edge.
  segments.push_back({x, x + w, -half_drop, 0.0, Region::kBulk});
  return BandProfile(std::move(segments));
}

double wkb_action_numeric(const TunnelSpec& spec) {
  const double two_m = 2.0 * mass_from_relative(spec.relative_mass);
  const double E = spec.energy_eV;
  double action = 0.0;
  for (const auto& s : spec.profile.segments()) {
    if (s.region == Region::kDot) continue;
    // Part of this linear segment where V > E.
    double lo = s.start_nm;
    double hi = s.end_nm;
    if (s.slope_eV_per_nm == 0.0) {
      if (!(s.start_potential_eV > E)) continue;
    } else {
      const double crossing = s.start_nm + (E - s.start_potential_eV) / s.slope_eV_per_nm;
      if (s.slope_eV_per_nm > 0.0) {
        lo = std::max(lo, crossing);
      } else {
        hi = std::min(hi, crossing);
      }
    }
    if (!(hi > lo)) continue;
    const auto integrand = [&](double x) {
      return std::sqrt(two_m * std::max(0.0, s.potential(x) - E)) / kConstants.hbar;
    };
    action += integrate_adaptive(integrand, lo, hi, 1e-10, 1e-14).value;
  }
  return action;
}

double wkb_transmission_numeric(const TunnelSpec& spec) {
  return std::min(1.0, std::exp(-2.0 * wkb_action_numeric(spec)));
}

}  // namespace qdpc
