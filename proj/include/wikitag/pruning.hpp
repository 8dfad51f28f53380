#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wikitag {

enum class PruneMethod { kOnlyLp, kAvg, kLr };

const char* ToString(PruneMethod method);
std::optional<PruneMethod> PruneMethodFromString(const std::string& s);

struct PruneFeatures {
  double lp = 0.0;
  double coherence = 0.0;
};

struct LrModel {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  void Save(const std::string& path) const;
  static LrModel Load(const std::string& path);
};

struct PruneConfig {
  PruneMethod method = PruneMethod::kAvg;
  double rho_na = 0.2;
  std::optional<LrModel> lr_model;
};

// only_lp -> lp; avg -> (lp + coherence) / 2; lr -> alpha*lp + beta*coh + gamma.
double Rho(const PruneFeatures& features, const PruneConfig& cfg);

struct LrTrainingCase {
  double lp = 0.0;
  double coherence = 0.0;
  int label = 0;  // 1 = keep, 0 = prune
};

class PruneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ordinary least squares of label on (lp, coherence, 1); the minimum-norm
// solution when the normal matrix is rank deficient. Needs >= 3 cases.
LrModel TrainLr(const std::vector<LrTrainingCase>& cases);

}  // namespace wikitag
