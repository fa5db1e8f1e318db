#pragma once

#include <filesystem>
#include <string>

#include "cgmn/train.hpp"

namespace cgmn {

// JSON round trip of a trained model. Doubles are written with enough digits
// to restore them bit for bit.
std::string checkpoint_to_string(const Checkpoint& ckpt);
Checkpoint checkpoint_from_string(const std::string& text, const std::string& source = "<string>");

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace cgmn
