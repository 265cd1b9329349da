#include "balcast/textsim.hpp"

#include <algorithm>
#include <array>
#include <utility>
#include <vector>

#include "balcast/error.hpp"

namespace balcast {

namespace {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto lead = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    char32_t cp = lead;
    if (lead >= 0xF0 && lead < 0xF8) {
      extra = 3;
      cp = lead & 0x07;
    } else if (lead >= 0xE0 && lead < 0xF0) {
      extra = 2;
      cp = lead & 0x0F;
    } else if (lead >= 0xC0 && lead < 0xE0) {
      extra = 1;
      cp = lead & 0x1F;
    }
    bool ok = lead < 0x80 || extra > 0;
    for (std::size_t k = 1; ok && k <= extra; ++k) {
      if (i + k >= s.size() || (static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
      }
    }
    if (!ok) {
      // Stray byte: read it as Latin-1.
      out.push_back(lead);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

char32_t fold(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c < 0x80) return c;
  // Latin-1 capitals except the multiplication sign.
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  // Latin Extended-A pairs (even upper, odd lower), with the 0x139-0x148 and 0x179-0x17E runs shifted.
  if (c >= 0x100 && c <= 0x137) return c | 1;
  if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) return (c & 1) ? c + 1 : c;
  if (c >= 0x14A && c <= 0x177) return c | 1;
  if (c == 0x178) return 0xFF;
  // Greek and Cyrillic.
  if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 32;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  return c;
}

// Longest common block of a[alo,ahi) and b[blo,bhi); earliest in a, then in b.
struct Block {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t size = 0;
};

Block longest_block(std::u32string_view a, std::size_t alo, std::size_t ahi, std::u32string_view b, std::size_t blo,
                    std::size_t bhi, std::vector<std::size_t>& prev, std::vector<std::size_t>& cur) {
  Block best{alo, blo, 0};
  const std::size_t width = bhi - blo;
  prev.assign(width + 1, 0);
  cur.assign(width + 1, 0);
  for (std::size_t i = alo; i < ahi; ++i) {
    for (std::size_t j = blo; j < bhi; ++j) {
      const std::size_t col = j - blo + 1;
      if (a[i] == b[j]) {
        const std::size_t k = prev[col - 1] + 1;
        cur[col] = k;
        if (k > best.size) best = Block{i + 1 - k, j + 1 - k, k};
      } else {
        cur[col] = 0;
      }
    }
    std::swap(prev, cur);
  }
  return best;
}

}  // namespace

bool default_junk(char32_t c) {
  return (c >= U'0' && c <= U'9') || c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\v' ||
         c == U'\f' || c == 0xA0;
}

void SimilarityConfig::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw InvalidArgument("similarity threshold must lie in [0, 1]");
}

std::u32string fold_and_filter(std::string_view text, const std::function<bool(char32_t)>& junk) {
  std::u32string out;
  for (char32_t c : decode_utf8(text)) {
    const char32_t f = fold(c);
    if (!junk || !junk(f)) out.push_back(f);
  }
  return out;
}

std::size_t matching_characters(std::u32string_view a, std::u32string_view b) {
  std::size_t total = 0;
  std::vector<std::size_t> prev;
  std::vector<std::size_t> cur;
  std::vector<std::array<std::size_t, 4>> todo{{0, a.size(), 0, b.size()}};
  while (!todo.empty()) {
    const auto [alo, ahi, blo, bhi] = todo.back();
    todo.pop_back();
    if (alo >= ahi || blo >= bhi) continue;
    const Block m = longest_block(a, alo, ahi, b, blo, bhi, prev, cur);
    if (m.size == 0) continue;
    total += m.size;
    todo.push_back({alo, m.i, blo, m.j});
    todo.push_back({m.i + m.size, ahi, m.j + m.size, bhi});
  }
  return total;
}

double similarity(std::string_view a, std::string_view b, const SimilarityConfig& config) {
  std::u32string fa = fold_and_filter(a, config.junk);
  std::u32string fb = fold_and_filter(b, config.junk);
  if (fa.empty() && fb.empty()) {
    fa = fold_and_filter(a, nullptr);
    fb = fold_and_filter(b, nullptr);
  }
  const std::size_t total = fa.size() + fb.size();
  if (total == 0) return 1.0;
  const std::size_t m = std::max(matching_characters(fa, fb), matching_characters(fb, fa));
  return 2.0 * static_cast<double>(m) / static_cast<double>(total);
}

bool is_same_biller(std::string_view a, std::string_view b, const SimilarityConfig& config) {
  return similarity(a, b, config) >= config.threshold;
}

}  // namespace balcast
