#pragma once

#include <string>
#include <vector>

#include "soen/config.hpp"
#include "soen/sweep.hpp"

namespace soen::figures {

const std::vector<std::string>& figure_ids();

/// fig4b: photons vs on-time; fig4c: photons vs bias; fig6a: nTron time
/// constant and gate energy vs time above T_c; fig6b: photons vs nTron time
/// constant; fig7: stage efficiencies vs photon count.
sweep::ResultTable figure_dataset(const std::string& id, const config::RunConfig& base, unsigned jobs = 0);

/// Least-squares slope of y on x.
double linear_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace soen::figures
