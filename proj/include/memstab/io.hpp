#pragma once

#include "memstab/chain_trick.hpp"
#include "memstab/dispersion.hpp"
#include "memstab/simulate.hpp"
#include "memstab/stability.hpp"
#include "memstab/types.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace memstab {

/// {"k": int, "theta": [floats], "tau": float}; "k" and "tau" may be omitted
/// (inferred from theta / defaulted to 1). Throws DomainError naming the
/// offending field.
KernelSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const KernelSpec& spec);

nlohmann::json verdict_to_json(const StabilityVerdict& verdict);
nlohmann::json matrices_to_json(const SystemMatrices& m);

/// 17 significant digits, '.' decimal point, no locale dependence; enough to
/// round-trip any double. All CSV cells go through this.
std::string format_double(double value);

// CSV datasets. Column layouts are documented in FORMATS.md.
void write_spectrum_csv(std::ostream& os, const Spectrum& sp);
void write_envelope_csv(std::ostream& os, const Spectrum& sp);
void write_region_map_csv(std::ostream& os, double eta2_max, double eta3_max,
                          int resolution);
void write_kernel_csv(std::ostream& os, int max_shape, double t_max,
                      int n_points, const KernelSpec* spec = nullptr);
void write_snapshots_csv(std::ostream& os, const FieldSimulation& sim);
void write_mode_rates_csv(std::ostream& os, const FieldSimulation& sim);

}  // namespace memstab
