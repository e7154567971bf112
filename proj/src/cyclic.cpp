#include "proxima/cyclic.hpp"

namespace proxima {

CyclicityReport verify_cyclicity(const CyclicMap<double>& m, std::size_t sample_count,
                                 std::uint64_t seed) {
  m.validate();
  if (sample_count < 1) throw InputError("verify_cyclicity: sample_count must be >= 1");
  SetSampler sampler(seed);
  CyclicityReport report;
  report.samples_per_set = sample_count;
  for (std::size_t i = 0; i < sample_count; ++i) {
    Vector a = sampler.draw<double>(m.box_a, m.in_a);
    Vector ta = apply_map(m, a);
    if (!m.in_b(ta)) report.violations.push_back({a, ta, true});

    Vector b = sampler.draw<double>(m.box_b, m.in_b);
    Vector tb = apply_map(m, b);
    if (!m.in_a(tb)) report.violations.push_back({b, tb, false});
  }
  return report;
}

ContractionReport verify_contraction(const CyclicMap<double>& m, std::size_t sample_count,
                                     std::uint64_t seed) {
  m.validate();
  if (sample_count < 1) throw InputError("verify_contraction: sample_count must be >= 1");
  SetSampler sampler(seed);
  ContractionReport report;
  for (std::size_t i = 0; i < sample_count; ++i) {
    Vector x = sampler.draw<double>(m.box_a, m.in_a);
    Vector y = sampler.draw<double>(m.box_b, m.in_b);
    const double dist = m.space.distance(x, y);
    const double image_dist = m.space.distance(apply_map(m, x), apply_map(m, y));
    const double excess = image_dist - (m.k * dist + (1.0 - m.k) * m.d);
    ++report.pairs;
    if (excess > report.max_violation) {
      report.max_violation = excess;
      report.worst_x = x;
      report.worst_y = y;
    }
    if (excess > 1e-9 * (1.0 + dist)) ++report.failures;
  }
  return report;
}

}  // namespace proxima
