#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "degenheat/diagnostics.hpp"

namespace degenheat {

// 17-significant-digit decimal form ("%.17g"); round-trips through
// parse_double bit for bit.
std::string format_double(double v);
double parse_double(const std::string& s);

// Writers. Headers are part of the format:
//   trajectory  t,x,u        (1D)   t,x,y,u (2D)
//   energy      name,lhs,rhs,ratio,satisfied
//   sweep       lambda,err_l2h1,err_supl2,pen_mass
//   decay       lambda,I_eps,W,scaled,slope_fit,residual
//   stationary  x,u_penalized,u_limit   (x,y,... in 2D)
void write_trajectory_csv(const std::filesystem::path& file, const Grid& g,
                          const Trajectory& tr);
void write_energy_csv(const std::filesystem::path& file, const EnergyReport& r);
void write_sweep_csv(const std::filesystem::path& file, const SweepReport& r);
void write_decay_csv(const std::filesystem::path& file, const DecayReport& r);
void write_stationary_csv(const std::filesystem::path& file, const Grid& g,
                          const Field& penalized, const Field& limit);

struct TrajectoryCsv {
    std::vector<double> t, x, y, u;  // y empty for 1D files
};
struct StationaryCsv {
    std::vector<double> x, y, u_penalized, u_limit;
};

TrajectoryCsv parse_trajectory_csv(const std::filesystem::path& file);
EnergyReport parse_energy_csv(const std::filesystem::path& file);
SweepReport parse_sweep_csv(const std::filesystem::path& file);
DecayReport parse_decay_csv(const std::filesystem::path& file);
StationaryCsv parse_stationary_csv(const std::filesystem::path& file);

}  // namespace degenheat
