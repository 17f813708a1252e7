#pragma once

#include <string>
#include <string_view>

namespace simvec {

// Porter stemmer, reference-implementation variant (including the
// "bli" -> "ble" and "logi" -> "log" rules). Input must be lowercase ASCII;
// words of one or two letters are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace simvec
