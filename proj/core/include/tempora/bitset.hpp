#ifndef TEMPORA_BITSET_HPP
#define TEMPORA_BITSET_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <vector>

namespace tempora {

/// Dense rows-of-bitsets matrix used for reachability closures.
/// Row r stores a set over [0, cols). Storage is row-major, 64-bit words.
class BitMatrix {
public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), words_per_row_((cols + 63) / 64), bits_(rows * words_per_row_, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return words_per_row_; }
  bool empty() const { return bits_.empty(); }

  uint64_t* row(std::size_t r) { return bits_.data() + r * words_per_row_; }
  const uint64_t* row(std::size_t r) const { return bits_.data() + r * words_per_row_; }

  void set(std::size_t r, std::size_t c) { row(r)[c >> 6] |= (uint64_t{1} << (c & 63)); }
  bool test(std::size_t r, std::size_t c) const { return (row(r)[c >> 6] >> (c & 63)) & 1; }

  /// row(dst) |= row(src)
  void or_row(std::size_t dst, std::size_t src) {
    uint64_t* d = row(dst);
    const uint64_t* s = row(src);
    for (std::size_t w = 0; w < words_per_row_; ++w) d[w] |= s[w];
  }

  void or_row_external(std::size_t dst, const uint64_t* s) {
    uint64_t* d = row(dst);
    for (std::size_t w = 0; w < words_per_row_; ++w) d[w] |= s[w];
  }

  std::size_t popcount_row(std::size_t r) const {
    const uint64_t* s = row(r);
    std::size_t n = 0;
    for (std::size_t w = 0; w < words_per_row_; ++w) n += std::popcount(s[w]);
    return n;
  }

  /// Number of bits set in row r but not in row mask_row of `other`.
  std::size_t count_andnot(std::size_t r, const BitMatrix& other, std::size_t other_row) const {
    const uint64_t* a = row(r);
    const uint64_t* b = other.row(other_row);
    std::size_t n = 0;
    for (std::size_t w = 0; w < words_per_row_; ++w) n += std::popcount(a[w] & ~b[w]);
    return n;
  }

  bool row_equal(std::size_t r, const BitMatrix& other, std::size_t other_row) const {
    return std::memcmp(row(r), other.row(other_row), words_per_row_ * 8) == 0;
  }

  /// Visit all set bits of row r in increasing column order.
  template <typename Fn>
  void for_each_in_row(std::size_t r, Fn&& fn) const {
    const uint64_t* s = row(r);
    for (std::size_t w = 0; w < words_per_row_; ++w) {
      uint64_t m = s[w];
      while (m) {
        fn(w * 64 + std::countr_zero(m));
        m &= m - 1;
      }
    }
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<uint64_t> bits_;
};

} // namespace tempora

#endif
