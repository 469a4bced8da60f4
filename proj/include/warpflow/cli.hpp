#pragma once

#include <iosfwd>
#include <string>

#include "warpflow/config.hpp"

namespace warpflow {

// Exit statuses: 0 success, 1 numeric or experiment failure, 2 usage or
// configuration error.
int cmd_check_warp(const RunConfig& cfg, std::ostream& out);
int cmd_run(const RunConfig& cfg, std::ostream& out);
int cmd_modulus(const RunConfig& cfg, const std::string& profile_path,
                std::ostream& out);
int cmd_blowup(const RunConfig& cfg, std::ostream& out);
int cmd_transform(const RunConfig& cfg, std::ostream& out);

// Argument parsing and subcommand dispatch for the warpflow binary.
int dispatch(int argc, char** argv);

}  // namespace warpflow
