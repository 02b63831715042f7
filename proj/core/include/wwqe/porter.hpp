#pragma once

#include <string>
#include <string_view>

namespace wwqe {

// The original Porter (1980) suffix-stripping algorithm for lowercase ASCII
// words. Words of length <= 2 and words containing non-letters are returned
// unchanged.
std::string porter_stem(std::string_view word);

}  // namespace wwqe
