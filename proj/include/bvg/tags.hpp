#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bvg {

/// Function cones on (0, inf): completely monotone, Bernstein, complete
/// Bernstein and Stieltjes.
enum class ClassTag : std::uint8_t { CM = 0, BF = 1, CBF = 2, S = 3 };

inline constexpr std::array<ClassTag, 4> kAllTags = {ClassTag::CM, ClassTag::BF, ClassTag::CBF,
                                                     ClassTag::S};

std::string_view to_string(ClassTag tag);
std::optional<ClassTag> parse_tag(std::string_view name);

/// Set of class tags, always closed under the inclusions CBF -> BF and S -> CM.
class TagSet {
 public:
  constexpr TagSet() = default;
  TagSet(std::initializer_list<ClassTag> tags) {
    for (ClassTag t : tags) bits_ |= bit(t);
    close();
  }

  [[nodiscard]] constexpr bool has(ClassTag t) const { return (bits_ & bit(t)) != 0; }
  [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
  [[nodiscard]] constexpr bool contains_all(TagSet other) const {
    return (bits_ & other.bits_) == other.bits_;
  }

  TagSet& add(ClassTag t) {
    bits_ |= bit(t);
    close();
    return *this;
  }
  TagSet& merge(TagSet other) {
    bits_ |= other.bits_;
    close();
    return *this;
  }

  [[nodiscard]] std::vector<ClassTag> list() const;
  [[nodiscard]] std::string str() const;

  friend constexpr bool operator==(TagSet a, TagSet b) { return a.bits_ == b.bits_; }

 private:
  static constexpr std::uint8_t bit(ClassTag t) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(t));
  }
  constexpr void close() {
    if (has(ClassTag::CBF)) bits_ |= bit(ClassTag::BF);
    if (has(ClassTag::S)) bits_ |= bit(ClassTag::CM);
  }

  std::uint8_t bits_ = 0;
};

}  // namespace bvg
