#include "test_support.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace cdt::fixtures {

StepList fig4_steps() {
  return {{
      {"CCCpqrCCrpCsp", "", false},
      {"CCCCpqCrqCqsCtCqs", "D11", false},
      {"CCCpCqrCCsqCtqCuCCsqCtq", "D12", false},
      {"CCCpCqrCstCCqtCst", "DDDD1D1D1D1DDDD131n11n1", false},
      {"CCCCpqCrqCCCsCptCrquCvCCCsCptCrqu", "D1DD414", false},
      {"CCCpqpCrp", "DD31n", false},
      {"CCpqCCqrCpr", "DDDD1DD55n1n1", true},
      {"CCCpqpp", "DDD426n", true},
      {"CpCqp", "DD26n", true},
  }};
}

std::vector<DTerm> expand_steps(const StepList& steps) {
  std::vector<DTerm> out;
  std::function<DTerm(const DTerm&)> subst = [&](const DTerm& d) -> DTerm {
    if (d.is_wildcard()) return d;
    if (d.is_leaf()) {
      const auto k = static_cast<std::size_t>(d.axiom());
      if (k < 1 || k > out.size()) throw std::runtime_error("bad step reference");
      return out[k - 1];
    }
    return DTerm::node(subst(d.major()), subst(d.minor()));
  };
  for (std::size_t i = 0; i < steps.steps.size(); ++i) {
    const auto& s = steps.steps[i];
    if (s.dterm.empty())
      out.push_back(DTerm::leaf(static_cast<AxiomId>(i + 1)));
    else
      out.push_back(subst(parse_dnotation(s.dterm)));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cdt::fixtures
