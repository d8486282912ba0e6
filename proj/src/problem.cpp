#include "sdg/problem.hpp"

#include <string>

#include "sdg/error.hpp"

namespace sdg {

double ProblemSpec::eta_gamma(int f, int s) const {
  const Fracture& fr = domain.fractures[static_cast<std::size_t>(f)];
  return fr.thickness / fr.kappa_n[static_cast<std::size_t>(s)];
}

double ProblemSpec::alpha_gamma(int f, int s) const { return eta_gamma(f, s) * (0.5 * xi - 0.25); }

double ProblemSpec::k_gamma(int f, int s) const {
  const Fracture& fr = domain.fractures[static_cast<std::size_t>(f)];
  return fr.kappa_t[static_cast<std::size_t>(s)] * fr.thickness;
}

void ProblemSpec::validate() const {
  domain.validate();
  if (!(xi > 0.5 && xi <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "xi must lie in (1/2, 1], got " + std::to_string(xi));
  }
  if (!tips.empty() && tips.size() != domain.fractures.size()) {
    throw Error(ErrorCode::InvalidArgument, "tip conditions must be given for every fracture");
  }
}

}  // namespace sdg
