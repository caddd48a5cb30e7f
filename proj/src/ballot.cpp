#include "iamlearn/ballot.hpp"

#include "iamlearn/error.hpp"

namespace iamlearn {

ApprovalBallot::ApprovalBallot(std::size_t m) : m_(m), words_((m + 63) / 64, 0) {}

ApprovalBallot ApprovalBallot::from_indices(std::size_t m,
                                            std::span<const std::size_t> approved) {
  ApprovalBallot b(m);
  for (std::size_t j : approved) {
    if (j >= m) {
      throw Error(ErrorKind::DimensionMismatch,
                  "candidate index " + std::to_string(j) + " out of range for m=" +
                      std::to_string(m));
    }
    b.set(j);
  }
  return b;
}

ApprovalBallot ApprovalBallot::full(std::size_t m) {
  ApprovalBallot b(m);
  for (std::size_t j = 0; j < m; ++j) b.set(j);
  return b;
}

void ApprovalBallot::set(std::size_t j, bool approved) noexcept {
  const std::uint64_t mask = std::uint64_t{1} << (j & 63);
  if (approved) {
    words_[j >> 6] |= mask;
  } else {
    words_[j >> 6] &= ~mask;
  }
}

std::size_t ApprovalBallot::count() const noexcept {
  std::size_t c = 0;
  for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::vector<std::size_t> ApprovalBallot::approved() const {
  std::vector<std::size_t> out;
  for_each_approved([&](std::size_t j) { out.push_back(j); });
  return out;
}

std::size_t hamming(const ApprovalBallot& a, const ApprovalBallot& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch, "ballots of different lengths");
  }
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t d = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    d += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  }
  return d;
}

}  // namespace iamlearn
