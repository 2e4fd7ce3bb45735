#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabreason/table.hpp"

namespace tabreason {

enum class TaskKind { ShortQa, FactVerification, FreeQa };

std::string_view to_string(TaskKind kind);
TaskKind task_kind_from_string(std::string_view name);

// Label conventions for fact verification. TrueFalse is the table-only
// convention ({true, false}); ThreeWay adds NOT ENOUGH INFO to SUPPORTS/REFUTES.
enum class LabelSet { TrueFalse, ThreeWay };

std::string_view to_string(LabelSet set);
LabelSet label_set_from_string(std::string_view name);
const std::vector<std::string>& labels_of(LabelSet set);

struct GoldAnswer {
  std::vector<std::string> answers;
  std::optional<std::string> label;

  friend bool operator==(const GoldAnswer&, const GoldAnswer&) = default;
};

struct Instance {
  std::string id;
  TaskKind task = TaskKind::ShortQa;
  std::string query;
  Table table;
  SentenceContext sentences;
  GoldAnswer gold;
  std::map<std::string, std::string> tags;

  // The "label_set" tag wins; otherwise the set is inferred from the gold
  // label ("true"/"false" means TrueFalse).
  LabelSet label_set() const;
};

nlohmann::ordered_json table_to_json(const Table& table);
Table table_from_json(const nlohmann::json& j);

nlohmann::ordered_json instance_to_json(const Instance& instance);
// Throws Error(ParseFailure) on schema violations, including a fact
// verification gold label outside the instance's label set.
Instance instance_from_json(const nlohmann::json& j);

std::vector<Instance> load_instances(const std::filesystem::path& path);
void write_instances(const std::filesystem::path& path, const std::vector<Instance>& instances);

}  // namespace tabreason
