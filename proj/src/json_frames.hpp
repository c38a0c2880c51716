#pragma once

// Frame <-> JSON helpers shared by the dictionary and pose-sequence formats.

#include "json.hpp"
#include "posepipe/keypoints.hpp"

namespace posepipe::detail {

/// Flat x,y,c triples for `rows` points starting at `first_row`.
nlohmann::json pack_points(const KeypointFrame& frame, int first_row, int rows);

/// Inverse of pack_points. Throws Error(Parse) naming `key` on a size or value problem.
void unpack_points(const nlohmann::json& arr, const char* key, int first_row, int rows,
                   KeypointFrame& frame);

/// {"body": [75 numbers], "face": [210 numbers]}
nlohmann::json frame_to_json(const KeypointFrame& frame);
KeypointFrame frame_from_json(const nlohmann::json& obj);

}  // namespace posepipe::detail
