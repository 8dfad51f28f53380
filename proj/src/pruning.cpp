#include "wikitag/pruning.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wikitag {

const char* ToString(PruneMethod method) {
  switch (method) {
    case PruneMethod::kOnlyLp: return "only_lp";
    case PruneMethod::kAvg: return "avg";
    case PruneMethod::kLr: return "lr";
  }
  return "?";
}

std::optional<PruneMethod> PruneMethodFromString(const std::string& s) {
  if (s == "only_lp") return PruneMethod::kOnlyLp;
  if (s == "avg") return PruneMethod::kAvg;
  if (s == "lr") return PruneMethod::kLr;
  return std::nullopt;
}

double Rho(const PruneFeatures& features, const PruneConfig& cfg) {
  switch (cfg.method) {
    case PruneMethod::kOnlyLp:
      return features.lp;
    case PruneMethod::kAvg:
      return (features.lp + features.coherence) / 2.0;
    case PruneMethod::kLr: {
      if (!cfg.lr_model) {
        throw PruneError("lr pruner selected without a model");
      }
      return cfg.lr_model->alpha * features.lp +
             cfg.lr_model->beta * features.coherence + cfg.lr_model->gamma;
    }
  }
  throw PruneError("unknown prune method");
}

void LrModel::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw PruneError("cannot write model file: " + path);
  out.precision(17);
  out << "alpha " << alpha << "\n"
      << "beta " << beta << "\n"
      << "gamma " << gamma << "\n";
}

LrModel LrModel::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PruneError("cannot read model file: " + path);
  LrModel model;
  std::string name;
  double value;
  int seen = 0;
  while (in >> name >> value) {
    if (name == "alpha") model.alpha = value;
    else if (name == "beta") model.beta = value;
    else if (name == "gamma") model.gamma = value;
    else throw PruneError("unknown coefficient '" + name + "' in " + path);
    ++seen;
  }
  if (seen != 3) throw PruneError("model file must carry exactly alpha, beta, gamma");
  return model;
}

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

// Jacobi eigendecomposition of a symmetric 3x3 matrix; m becomes diagonal and
// v accumulates the rotations.
void JacobiEigen(Mat3& m, Mat3& v) {
  v = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::abs(m[0][1]) + std::abs(m[0][2]) + std::abs(m[1][2]);
    if (off < 1e-15) break;
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(m[p][q]) < 1e-18) continue;
        const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < 3; ++k) {
          const double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
}

}  // namespace

LrModel TrainLr(const std::vector<LrTrainingCase>& cases) {
  if (cases.size() < 3) {
    throw PruneError("linear-regression training needs at least 3 cases, got " +
                     std::to_string(cases.size()));
  }
  // Normal equations A^T A x = A^T y with rows (lp, coherence, 1).
  Mat3 ata = {{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
  Vec3 aty = {0, 0, 0};
  for (const LrTrainingCase& c : cases) {
    const Vec3 row = {c.lp, c.coherence, 1.0};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) ata[i][j] += row[i] * row[j];
      aty[i] += row[i] * static_cast<double>(c.label);
    }
  }

  Mat3 diag = ata;
  Mat3 vecs;
  JacobiEigen(diag, vecs);
  double max_eig = 0.0;
  for (int i = 0; i < 3; ++i) max_eig = std::max(max_eig, std::abs(diag[i][i]));
  if (max_eig <= 0.0) {
    throw PruneError("singular design matrix: all features are zero");
  }
  const double tol = max_eig * 1e-12;

  // Minimum-norm least squares via the pseudoinverse of A^T A.
  Vec3 solution = {0, 0, 0};
  for (int i = 0; i < 3; ++i) {
    const double eig = diag[i][i];
    if (std::abs(eig) <= tol) continue;
    double proj = 0.0;
    for (int k = 0; k < 3; ++k) proj += vecs[k][i] * aty[k];
    proj /= eig;
    for (int k = 0; k < 3; ++k) solution[k] += vecs[k][i] * proj;
  }
  return LrModel{solution[0], solution[1], solution[2]};
}

}  // namespace wikitag
