#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace iamlearn {

/// Approval indicator vector over m candidates, stored as packed bits.
class ApprovalBallot {
 public:
  ApprovalBallot() = default;
  explicit ApprovalBallot(std::size_t m);

  static ApprovalBallot from_indices(std::size_t m,
                                     std::span<const std::size_t> approved);
  static ApprovalBallot full(std::size_t m);

  std::size_t size() const noexcept { return m_; }
  bool operator[](std::size_t j) const noexcept {
    return (words_[j >> 6] >> (j & 63)) & 1U;
  }
  void set(std::size_t j, bool approved = true) noexcept;

  /// Number of approved candidates |A(v)|.
  std::size_t count() const noexcept;
  std::vector<std::size_t> approved() const;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /// Calls f(j) for every approved candidate j, in increasing order.
  template <class F>
  void for_each_approved(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        f(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const ApprovalBallot&, const ApprovalBallot&) = default;

 private:
  std::size_t m_ = 0;
  std::vector<std::uint64_t> words_;
};

/// ham(X, Y) = |X \ Y| + |Y \ X|. Throws DimensionMismatch on unequal lengths.
std::size_t hamming(const ApprovalBallot& a, const ApprovalBallot& b);

}  // namespace iamlearn
