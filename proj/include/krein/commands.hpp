#pragma once

#include <exception>
#include <string>

#include "krein/config.hpp"

namespace krein {

// JSON reports.
std::string cmd_solve(const RunConfig& c);
std::string cmd_split(const RunConfig& c);
// CSV outputs.
std::string cmd_sweep(const RunConfig& c, int threads = 0);
std::string cmd_wavefunction(const RunConfig& c);

// KREIN_THREADS if set (>= 1), otherwise hardware concurrency.
int thread_count();

std::string format_double(double x);  // %.17g

// 0 success, 2 config, 3 numerical.
int exit_code_for(const std::exception& e);
std::string error_json(const std::exception& e);

}  // namespace krein
