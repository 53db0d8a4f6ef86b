#pragma once

#include <cstdio>
#include <ctime>
#include <ostream>
#include <string>

#include "sqpump/sweep.hpp"

namespace sqpump {

inline constexpr const char* kCsvHeader =
    "mu_over_U,J_over_U,n_ph,x_bec,delta_n,entropy,fidelity,pi0,overlap,t_eff";

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const SweepResult& result,
                      const std::string& title = "sweep", bool timestamp = true) {
  if (timestamp) {
    std::time_t now = std::time(nullptr);
    char stamp[64];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "# " << title << " generated " << stamp << "\n";
  }
  os << kCsvHeader << "\n";
  for (const auto& row : result.rows) {
    const SteadyStateReport& r = row.report;
    os << detail::fmt(row.mu) << ',' << detail::fmt(row.j);
    if (row.ok)
      os << ',' << detail::fmt(r.n_ph) << ',' << detail::fmt(r.x_bec) << ','
         << detail::fmt(r.delta_n) << ',' << detail::fmt(r.entropy) << ','
         << detail::fmt(r.fidelity) << ',' << detail::fmt(r.pi0) << ',' << detail::fmt(r.overlap)
         << ',' << detail::fmt(r.t_eff) << "\n";
    else
      os << ",nan,nan,nan,nan,nan,nan,nan,nan\n# error at mu=" << detail::fmt(row.mu)
         << " J=" << detail::fmt(row.j) << ": " << row.error << "\n";
  }
}

}  // namespace sqpump
