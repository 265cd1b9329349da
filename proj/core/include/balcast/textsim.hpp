#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace balcast {

/// Digits and whitespace: the dates and reference numbers that vary between otherwise
/// identical merchant strings.
bool default_junk(char32_t c);

struct SimilarityConfig {
  double threshold = 0.75;
  std::function<bool(char32_t)> junk = default_junk;

  /// Throws InvalidArgument unless 0 <= threshold <= 1.
  void validate() const;
};

/// Case-folded code points of `text` with junk characters removed.
std::u32string fold_and_filter(std::string_view text, const std::function<bool(char32_t)>& junk);

/// Ratcliff/Obershelp matched-character count: repeatedly take the longest common contiguous
/// block (earliest in `a`, then earliest in `b`) and recurse on both flanks.
std::size_t matching_characters(std::u32string_view a, std::u32string_view b);

/// 2M / (|a'| + |b'|) over the folded, junk-free strings. When both filtered strings are empty
/// the raw folded strings are compared instead. The block tie-break makes M order-dependent,
/// so the larger of M(a, b) and M(b, a) is used.
double similarity(std::string_view a, std::string_view b, const SimilarityConfig& config = {});

bool is_same_biller(std::string_view a, std::string_view b, const SimilarityConfig& config = {});

}  // namespace balcast
