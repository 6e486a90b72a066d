#pragma once

// JSON interchange format for schedules.
//
//   {
//     "format_version": 1,
//     "fence_length": "7/2",
//     "period": "7",
//     "agents": [
//       {"speed": "1", "weight": "1", "breakpoints": [["0", "0"], ["7/2", "7/2"], ["7", "0"]]}
//     ],
//     "metadata": {"name": "fig1", "provenance": "...", "seed": 1, "budget": 10000, "grid": 840}
//   }
//
// Rationals are strings matching [-]?digits(/digits)?. Unknown fields are
// rejected at every level.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fence/rational.hpp"
#include "fence/schedule.hpp"

namespace fence {

inline constexpr int kFormatVersion = 1;

struct DocumentMetadata {
  std::optional<std::string> name;
  std::optional<std::string> provenance;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> budget;
  std::optional<std::int64_t> grid;
  friend bool operator==(const DocumentMetadata&, const DocumentMetadata&) = default;
};

struct AgentEntry {
  Rational speed;
  Rational weight;
  std::vector<Breakpoint> breakpoints;
  friend bool operator==(const AgentEntry&, const AgentEntry&) = default;
};

struct ScheduleDocument {
  int format_version = kFormatVersion;
  Rational fence_length;
  Rational period;
  std::vector<AgentEntry> agents;
  std::optional<DocumentMetadata> metadata;
  friend bool operator==(const ScheduleDocument&, const ScheduleDocument&) = default;
};

/// Parse or conversion failure. `where` is a JSON path such as
/// "agents[2].breakpoints[0][1]", or empty for whole-document errors.
class DocumentError : public std::runtime_error {
public:
  DocumentError(std::string where, const std::string& message);
  [[nodiscard]] const std::string& where() const { return where_; }

private:
  std::string where_;
};

[[nodiscard]] ScheduleDocument parse_document(std::string_view json_text);

/// Two-space indented JSON with a trailing newline; keys in the order above.
[[nodiscard]] std::string emit_document(const ScheduleDocument& doc);

[[nodiscard]] ScheduleDocument to_document(const Schedule& s, std::optional<DocumentMetadata> metadata = {});

/// Builds the schedule; throws DocumentError for non-positive speed or
/// weight and for malformed trajectories. Does not run validate_schedule.
[[nodiscard]] Schedule to_schedule(const ScheduleDocument& doc);

}  // namespace fence
