#pragma once

#include <string>

#include "techcycle/market_data.hpp"

#ifndef TECHCYCLE_TEST_DATA_DIR
#error "TECHCYCLE_TEST_DATA_DIR must be defined"
#endif

namespace fixtures {

inline std::string data_dir() { return TECHCYCLE_TEST_DATA_DIR; }
inline std::string data_file(const std::string& name) { return data_dir() + "/" + name; }

inline techcycle::DatasetPaths bundled_paths() {
  return {data_file("riaa_us_revenue.csv"), data_file("cpi.csv"), data_file("groups.cfg")};
}

inline const techcycle::Dataset& bundled(techcycle::Basis basis) {
  static const auto real = techcycle::load_dataset(bundled_paths(), 2018, techcycle::Basis::Real);
  static const auto nominal = techcycle::load_dataset(bundled_paths(), 2018, techcycle::Basis::Nominal);
  return basis == techcycle::Basis::Real ? real : nominal;
}

}  // namespace fixtures
