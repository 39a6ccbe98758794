#pragma once

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

#include "quasimin/verify.hpp"

namespace quasimin {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

nlohmann::json to_json(const AdmissibilityScan& scan);
nlohmann::json to_json(const ConvergenceStudy& study);
nlohmann::json to_json(const CertificationReport& report);

/// {"payload": payload, "metadata": {...}}; only metadata carries a time stamp.
nlohmann::json with_metadata(nlohmann::json payload, const std::string& command);

/// CSV header: s,t,x1..x5,H1..H5,nullity,on_form_residual. Rows are s-major
/// over the grid; x5/H5 are empty for E^4_2 and H/nullity are empty where
/// the point is singular. Returns the number of rows written.
std::size_t write_surface_csv(std::ostream& out, const Immersion& f, SampleGrid grid,
                              const NullityOptions& nullity = {});

}  // namespace quasimin
