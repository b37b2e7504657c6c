#include "qvsum/query_distance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <tuple>

#include "qvsum/error.hpp"
#include "qvsum/parallel.hpp"

namespace qvsum::query {

Phi1Mode parse_phi1_mode(std::string_view s) {
  if (s == "count_diff") return Phi1Mode::count_diff;
  if (s == "symdiff") return Phi1Mode::symdiff;
  throw ConfigError("phi1_mode must be count_diff or symdiff, got '" + std::string(s) + "'");
}

RelevanceMode parse_relevance_mode(std::string_view s) {
  if (s == "exp") return RelevanceMode::exp;
  if (s == "raw") return RelevanceMode::raw;
  throw ConfigError("relevance must be exp or raw, got '" + std::string(s) + "'");
}

std::string_view to_string(Phi1Mode m) { return m == Phi1Mode::count_diff ? "count_diff" : "symdiff"; }
std::string_view to_string(RelevanceMode m) { return m == RelevanceMode::exp ? "exp" : "raw"; }

namespace {

std::set<int> class_set(std::span<const ingest::DetectionRecord> dets) {
  std::set<int> out;
  for (const auto& d : dets) out.insert(d.class_id);
  return out;
}

double centroid_distance(const ingest::BBox& a, const ingest::BBox& b) {
  return std::hypot(a.cx - b.cx, a.cy - b.cy);
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> pair_instances(
    std::span<const ingest::DetectionRecord> q, std::span<const ingest::DetectionRecord> v) {
  struct Candidate {
    double dist;
    std::size_t qi;
    std::size_t vi;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (q[i].class_id == v[j].class_id) {
        candidates.push_back({centroid_distance(q[i].bbox, v[j].bbox), i, j});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.dist, a.qi, a.vi) < std::tie(b.dist, b.qi, b.vi);
  });

  std::vector<bool> q_used(q.size(), false);
  std::vector<bool> v_used(v.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& c : candidates) {
    if (q_used[c.qi] || v_used[c.vi]) continue;
    q_used[c.qi] = v_used[c.vi] = true;
    pairs.emplace_back(c.qi, c.vi);
  }
  return pairs;
}

double phi1(const QueryProfile& q, const ingest::ShotRecord& v, Phi1Mode mode) {
  const auto qs = class_set(q.detections);
  const auto vs = class_set(v.detections);
  if (mode == Phi1Mode::count_diff) {
    return std::abs(static_cast<double>(qs.size()) - static_cast<double>(vs.size()));
  }
  std::vector<int> sym;
  std::set_symmetric_difference(qs.begin(), qs.end(), vs.begin(), vs.end(), std::back_inserter(sym));
  return static_cast<double>(sym.size());
}

double phi2(const QueryProfile& q, const ingest::ShotRecord& v) {
  double sum = 0.0;
  for (const auto& [qi, vi] : pair_instances(q.detections, v.detections)) {
    sum += centroid_distance(q.detections[qi].bbox, v.detections[vi].bbox);
  }
  return sum;
}

double phi3(const QueryProfile& q, const ingest::ShotRecord& v) {
  double sum = 0.0;
  for (const auto& [qi, vi] : pair_instances(q.detections, v.detections)) {
    sum += std::abs(q.detections[qi].bbox.area() - v.detections[vi].bbox.area());
  }
  return sum;
}

double phi4(const QueryProfile& q, const ingest::ShotRecord& v) {
  return saliency::mask_difference(q.saliency, v.saliency);
}

double cumulative_distance(const QueryProfile& q, const ingest::ShotRecord& v, Phi1Mode mode) {
  return phi1(q, v, mode) + phi2(q, v) + phi3(q, v) + phi4(q, v);
}

DistanceVector from_distances(std::vector<double> d, RelevanceMode mode) {
  DistanceVector out;
  out.s.reserve(d.size());
  for (double di : d) {
    if (!std::isfinite(di) || di < 0.0) {
      throw NumericError("distances must be finite and non-negative");
    }
    out.s.push_back(mode == RelevanceMode::exp ? std::exp(-di) : di);
  }
  out.d = std::move(d);
  return out;
}

DistanceVector distance_vector(const QueryProfile& q, std::span<const ingest::ShotRecord> shots,
                               const DistanceOptions& opts) {
  if (shots.empty()) throw InputError("distance_vector: no shots");
  std::vector<double> d(shots.size());
  parallel_for(shots.size(), [&](std::size_t i) { d[i] = cumulative_distance(q, shots[i], opts.phi1_mode); });
  return from_distances(std::move(d), opts.relevance);
}

}  // namespace qvsum::query
