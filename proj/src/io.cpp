#include "memstab/io.hpp"

#include "memstab/kernel.hpp"

#include <cstdio>
#include <ostream>

namespace memstab {

KernelSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("spec: expected a JSON object");
  if (!j.contains("theta")) throw DomainError("theta: field is required");
  const auto& theta = j.at("theta");
  if (!theta.is_array() || theta.empty())
    throw DomainError("theta: expected a non-empty array of numbers");

  KernelSpec spec;
  spec.theta = VectorXd(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!theta[i].is_number())
      throw DomainError("theta: entries must be numbers");
    spec.theta[static_cast<Eigen::Index>(i)] = theta[i].get<double>();
  }
  spec.k = static_cast<int>(theta.size()) - 1;

  if (j.contains("k")) {
    if (!j.at("k").is_number_integer())
      throw DomainError("k: must be an integer");
    if (j.at("k").get<int>() != spec.k)
      throw DomainError("k: inconsistent with the number of theta entries");
  }
  if (j.contains("tau")) {
    if (!j.at("tau").is_number()) throw DomainError("tau: must be a number");
    spec.tau = j.at("tau").get<double>();
  }
  spec.validate();
  return spec;
}

nlohmann::json spec_to_json(const KernelSpec& spec) {
  nlohmann::json j;
  j["k"] = spec.k;
  j["theta"] = std::vector<double>(spec.theta.begin(), spec.theta.end());
  j["tau"] = spec.tau;
  return j;
}

nlohmann::json verdict_to_json(const StabilityVerdict& verdict) {
  nlohmann::json j;
  j["class"] = to_string(verdict.cls);
  if (verdict.c0) {
    j["c0"] = *verdict.c0;
    j["c0_criterion_backed"] = verdict.criterion_backed;
  }
  if (!verdict.crossings.empty()) {
    nlohmann::json crossings = nlohmann::json::array();
    for (const Crossing& c : verdict.crossings)
      crossings.push_back({{"zeta", c.zeta}, {"xi", c.xi}});
    j["crossings"] = crossings;
  }
  j["trace"] = verdict.trace;
  return j;
}

nlohmann::json matrices_to_json(const SystemMatrices& m) {
  auto dump = [](const MatrixXd& a) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
      rows.push_back(row);
    }
    return rows;
  };
  return nlohmann::json{{"a0", dump(m.a0)}, {"a1", dump(m.a1)}, {"b", dump(m.b)}};
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_spectrum_csv(std::ostream& os, const Spectrum& sp) {
  os << "xi,branch_index,re_lambda,im_lambda\n";
  for (Eigen::Index i = 0; i < sp.xi.size(); ++i)
    for (std::size_t b = 0; b < sp.branches.size(); ++b)
      os << format_double(sp.xi[i]) << ',' << b << ','
         << format_double(sp.branches[b][i].real()) << ','
         << format_double(sp.branches[b][i].imag()) << '\n';
}

void write_envelope_csv(std::ostream& os, const Spectrum& sp) {
  os << "xi,max_re\n";
  for (Eigen::Index i = 0; i < sp.xi.size(); ++i)
    os << format_double(sp.xi[i]) << ',' << format_double(sp.envelope[i])
       << '\n';
}

void write_region_map_csv(std::ostream& os, double eta2_max, double eta3_max,
                          int resolution) {
  if (resolution < 1) throw DomainError("resolution: must be >= 1");
  os << "eta2,eta3,in_S,in_M,in_C,verdict\n";
  for (int i = 0; i < resolution; ++i) {
    const double eta2 =
        resolution == 1 ? 0.0 : eta2_max * i / double(resolution - 1);
    for (int j = 0; j < resolution; ++j) {
      const double eta3 =
          resolution == 1 ? 0.0 : eta3_max * j / double(resolution - 1);
      const RegionMembership member = region_membership_k2(eta2, eta3);
      os << format_double(eta2) << ',' << format_double(eta3) << ','
         << member.in_s << ',' << member.in_m << ',' << member.in_c << ','
         << to_string(classify_k2_analytic(eta2, eta3)) << '\n';
    }
  }
}

void write_kernel_csv(std::ostream& os, int max_shape, double t_max,
                      int n_points, const KernelSpec* spec) {
  if (max_shape < 1) throw DomainError("shapes: must be >= 1");
  if (n_points < 2) throw DomainError("points: must be >= 2");
  os << "t";
  for (int j = 1; j <= max_shape; ++j) os << ",g" << j;
  if (spec) os << ",kernel";
  os << '\n';
  for (int i = 0; i < n_points; ++i) {
    const double t = t_max * i / double(n_points - 1);
    os << format_double(t);
    for (int j = 1; j <= max_shape; ++j)
      os << ',' << format_double(eval_gamma(j, 1.0, t));
    if (spec) os << ',' << format_double(eval_kernel(*spec, t));
    os << '\n';
  }
}

void write_snapshots_csv(std::ostream& os, const FieldSimulation& sim) {
  os << "x,t,u\n";
  for (Eigen::Index j = 0; j < sim.snapshot_times.size(); ++j)
    for (Eigen::Index m = 0; m < sim.x.size(); ++m)
      os << format_double(sim.x[m]) << ','
         << format_double(sim.snapshot_times[j]) << ','
         << format_double(sim.field(j, m)) << '\n';
}

void write_mode_rates_csv(std::ostream& os, const FieldSimulation& sim) {
  os << "n,xi,fitted_rate,predicted_rate\n";
  for (const ModeRate& r : sim.mode_rates)
    os << r.n << ',' << format_double(r.xi) << ','
       << format_double(r.fitted_rate) << ','
       << format_double(r.predicted_rate) << '\n';
}

}  // namespace memstab
