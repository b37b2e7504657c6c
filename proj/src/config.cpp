#include <cmath>

#include "qvsum/error.hpp"
#include "qvsum/pipeline.hpp"

namespace qvsum::pipeline {

void RunConfig::validate() const {
  loss.validate();
  saliency::validate_alpha(alpha);
  if (!(shot_length_s > 0.0) || !std::isfinite(shot_length_s)) throw ConfigError("shot_length_s must be positive");
  if (!std::isfinite(threshold.k)) throw ConfigError("k must be finite");
  solver.validate();
  if (duration_s && !(*duration_s > 0.0)) throw ConfigError("duration_s must be positive");
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = {{"lambda1", loss.lambda1},
                      {"lambda2", loss.lambda2},
                      {"alpha", alpha},
                      {"shot_length_s", shot_length_s},
                      {"threshold_mode", solver::to_string(threshold.mode)},
                      {"k", threshold.k},
                      {"phi1_mode", query::to_string(distance.phi1_mode)},
                      {"relevance", query::to_string(distance.relevance)},
                      {"metric_mode", eval::to_string(metric_mode)},
                      {"max_iters", solver.max_iters},
                      {"tol", solver.tol},
                      {"init", solver.init},
                      {"preprocess", preprocess}};
  j["duration_s"] = duration_s ? nlohmann::json(*duration_s) : nlohmann::json(nullptr);
  return j;
}

}  // namespace qvsum::pipeline
