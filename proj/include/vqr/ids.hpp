#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace vqr {

// Opaque string identifier, distinct per domain so a journal id cannot be
// passed where a publication id is expected. Ordering is lexicographic.
template <typename Tag>
class StrongId {
 public:
  StrongId() = default;
  explicit StrongId(std::string value) : value_(std::move(value)) {}
  explicit StrongId(std::string_view value) : value_(value) {}
  explicit StrongId(const char* value) : value_(value) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const StrongId&, const StrongId&) = default;
  friend bool operator==(const StrongId&, const StrongId&) = default;

  friend std::ostream& operator<<(std::ostream& os, const StrongId& id) { return os << id.value_; }

 private:
  std::string value_;
};

struct PubTag {};
struct JournalTag {};
struct ResearcherTag {};
struct PanelTag {};
struct CategoryTag {};
struct InstitutionTag {};

using PubId = StrongId<PubTag>;
using JournalId = StrongId<JournalTag>;
using ResearcherId = StrongId<ResearcherTag>;
using PanelId = StrongId<PanelTag>;
using CategoryId = StrongId<CategoryTag>;
using InstitutionId = StrongId<InstitutionTag>;

}  // namespace vqr

template <typename Tag>
struct std::hash<vqr::StrongId<Tag>> {
  std::size_t operator()(const vqr::StrongId<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
