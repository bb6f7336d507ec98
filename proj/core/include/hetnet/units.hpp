#pragma once

#include <cmath>

// Unit conversions. Everything inside the library is linear: watts, Hz,
// meters, dimensionless ratios. dBm/dB appear only at the config and
// report boundaries.

namespace hetnet {

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace hetnet
