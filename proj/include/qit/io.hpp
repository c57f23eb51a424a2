#pragma once

// JSON (de)serialization of states and channels.
//
// State schema:
//   { "dims": [2, 2], "labels": ["A", "B"], "classical": ["A"],
//     "matrix": [[[re, im], ...], ...] }          (row-major)
// Channel schema:
//   { "kraus": [matrix, ...], "dim_in": d, "dim_out": d' }

#include <string>

#include "qit/states.hpp"

namespace qit {

std::string to_json(const DensityOperator& rho);
std::string to_json(const Channel& ch);

DensityOperator state_from_json(const std::string& text);
Channel channel_from_json(const std::string& text);

DensityOperator load_state(const std::string& path);
Channel load_channel(const std::string& path);
void save_state(const DensityOperator& rho, const std::string& path);

// Matrix helpers shared with the SDP dump format.
cmat cmat_from_json_text(const std::string& text);

}  // namespace qit
