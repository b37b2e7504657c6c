#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qvsum/ingest.hpp"
#include "qvsum/saliency.hpp"

namespace qvsum::query {

// Object-level and global features of the query image.
struct QueryProfile {
  std::vector<ingest::DetectionRecord> detections;
  saliency::SaliencyMask saliency;
};

// count_diff: | #distinct classes(q) - #distinct classes(v) |
// symdiff:    size of the symmetric difference of the two class sets
enum class Phi1Mode { count_diff, symdiff };

// exp:  s_i = exp(-d_i), similarity in (0,1]
// raw:  s_i = d_i, the distances themselves
enum class RelevanceMode { exp, raw };

Phi1Mode parse_phi1_mode(std::string_view s);
RelevanceMode parse_relevance_mode(std::string_view s);
std::string_view to_string(Phi1Mode m);
std::string_view to_string(RelevanceMode m);

struct DistanceOptions {
  Phi1Mode phi1_mode = Phi1Mode::count_diff;
  RelevanceMode relevance = RelevanceMode::exp;
};

// Same-class instance pairs (query index, shot index), chosen greedily by
// smallest centroid distance; ties go to the lower query index, then the lower
// shot index. Unpaired instances are left out.
std::vector<std::pair<std::size_t, std::size_t>> pair_instances(
    std::span<const ingest::DetectionRecord> q, std::span<const ingest::DetectionRecord> v);

double phi1(const QueryProfile& q, const ingest::ShotRecord& v, Phi1Mode mode = Phi1Mode::count_diff);
// Summed centroid distance over paired instances.
double phi2(const QueryProfile& q, const ingest::ShotRecord& v);
// Summed |area_q - area_v| over paired instances, in frame-area units.
double phi3(const QueryProfile& q, const ingest::ShotRecord& v);
// Salient-mask disagreement ratio.
double phi4(const QueryProfile& q, const ingest::ShotRecord& v);

double cumulative_distance(const QueryProfile& q, const ingest::ShotRecord& v,
                           Phi1Mode mode = Phi1Mode::count_diff);

struct DistanceVector {
  std::vector<double> d;  // cumulative distances, >= 0
  std::vector<double> s;  // relevance scores

  std::size_t size() const { return d.size(); }
};

DistanceVector distance_vector(const QueryProfile& q, std::span<const ingest::ShotRecord> shots,
                               const DistanceOptions& opts = {});

// Relevance scores for precomputed distances.
DistanceVector from_distances(std::vector<double> d, RelevanceMode mode = RelevanceMode::exp);

}  // namespace qvsum::query
