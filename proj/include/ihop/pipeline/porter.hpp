#pragma once

#include <string>
#include <string_view>

namespace ihop::pipeline {

/// Porter's suffix-stripping stemmer, following Martin Porter's reference
/// implementation (including its 'bli' -> 'ble' and 'logi' -> 'log' rules).
/// Expects a lowercase ASCII word; words of length <= 2 are returned as is.
std::string porter_stem(std::string_view word);

}  // namespace ihop::pipeline
