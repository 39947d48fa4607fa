#pragma once

#include <iosfwd>
#include <string>

#include "hotspot/dataset.hpp"
#include "hotspot/io/config.hpp"

namespace hotspot::io {

inline constexpr const char* kVersion = "0.1.0";

/// Reads genotype and response TSVs; rows are samples. Throws DataError
/// naming both files when the sample sets differ.
DataSet load_dataset(const std::string& genotypes_path, const std::string& responses_path);

/// Each command resolves the config, writes it as config.resolved.ini into
/// run.out, then writes its own outputs there. Reports go to `report`.
void cmd_fit(const Config& cfg, std::ostream& report);
void cmd_simulate(const Config& cfg, std::ostream& report);
void cmd_evaluate(const Config& cfg, std::ostream& report);
void cmd_permute(const Config& cfg, std::ostream& report);
void cmd_calibrate(const Config& cfg, std::ostream& report);

/// Parses arguments and dispatches. Returns 0 on success, 2 for config
/// errors, 3 for data errors, 4 for numerical failures.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hotspot::io
