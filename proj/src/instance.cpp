#include "tabreason/instance.hpp"

#include <fstream>

#include "tabreason/error.hpp"
#include "tabreason/text.hpp"

namespace tabreason {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::ShortQa: return "short_qa";
    case TaskKind::FactVerification: return "fact_verification";
    case TaskKind::FreeQa: return "free_qa";
  }
  return "short_qa";
}

TaskKind task_kind_from_string(std::string_view name) {
  if (name == "short_qa") return TaskKind::ShortQa;
  if (name == "fact_verification") return TaskKind::FactVerification;
  if (name == "free_qa") return TaskKind::FreeQa;
  throw Error(ErrorCode::UnsupportedTask, "unknown task '" + std::string(name) + "'");
}

std::string_view to_string(LabelSet set) {
  return set == LabelSet::TrueFalse ? "true_false" : "three_way";
}

LabelSet label_set_from_string(std::string_view name) {
  if (name == "true_false") return LabelSet::TrueFalse;
  if (name == "three_way") return LabelSet::ThreeWay;
  throw Error(ErrorCode::ParseFailure, "unknown label set '" + std::string(name) + "'");
}

const std::vector<std::string>& labels_of(LabelSet set) {
  static const std::vector<std::string> true_false{"true", "false"};
  static const std::vector<std::string> three_way{"SUPPORTS", "REFUTES", "NOT ENOUGH INFO"};
  return set == LabelSet::TrueFalse ? true_false : three_way;
}

LabelSet Instance::label_set() const {
  if (auto it = tags.find("label_set"); it != tags.end()) return label_set_from_string(it->second);
  if (gold.label && (text::iequals(*gold.label, "true") || text::iequals(*gold.label, "false"))) {
    return LabelSet::TrueFalse;
  }
  return LabelSet::ThreeWay;
}

ordered_json table_to_json(const Table& table) {
  ordered_json j;
  if (table.page_title) j["page_title"] = *table.page_title;
  if (table.section_title) j["section_title"] = *table.section_title;
  if (table.caption) j["caption"] = *table.caption;
  j["headers"] = table.headers;
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json r = ordered_json::array();
    for (const auto& c : row) r.push_back(c.raw());
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

namespace {

std::string cell_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

}  // namespace

Table table_from_json(const json& j) {
  if (!j.is_object() || !j.contains("headers") || !j["headers"].is_array()) {
    throw Error(ErrorCode::ParseFailure, "table object needs a 'headers' array");
  }
  std::vector<std::string> headers;
  for (const auto& h : j["headers"]) headers.push_back(cell_text(h));
  if (headers.empty()) throw Error(ErrorCode::ParseFailure, "table has no headers");
  std::vector<std::vector<std::string>> rows;
  if (j.contains("rows")) {
    if (!j["rows"].is_array()) throw Error(ErrorCode::ParseFailure, "'rows' must be an array");
    for (const auto& r : j["rows"]) {
      if (!r.is_array()) throw Error(ErrorCode::ParseFailure, "each row must be an array");
      std::vector<std::string> row;
      for (const auto& c : r) row.push_back(cell_text(c));
      rows.push_back(std::move(row));
    }
  }
  Table table = make_table(std::move(headers), std::move(rows));
  if (j.contains("page_title") && !j["page_title"].is_null()) table.page_title = j["page_title"].get<std::string>();
  if (j.contains("section_title") && !j["section_title"].is_null()) table.section_title = j["section_title"].get<std::string>();
  if (j.contains("caption") && !j["caption"].is_null()) table.caption = j["caption"].get<std::string>();
  return table;
}

ordered_json instance_to_json(const Instance& instance) {
  ordered_json j;
  j["id"] = instance.id;
  j["task"] = to_string(instance.task);
  j["query"] = instance.query;
  j["table"] = table_to_json(instance.table);
  ordered_json sentences = ordered_json::array();
  for (const auto& s : instance.sentences.items) {
    ordered_json o;
    if (s.title) o["title"] = *s.title;
    o["text"] = s.text;
    sentences.push_back(std::move(o));
  }
  j["sentences"] = std::move(sentences);
  ordered_json gold;
  if (instance.gold.label) {
    gold["label"] = *instance.gold.label;
  } else {
    gold["answers"] = instance.gold.answers;
  }
  j["gold"] = std::move(gold);
  j["tags"] = instance.tags;
  return j;
}

Instance instance_from_json(const json& j) {
  try {
    Instance in;
    in.id = j.at("id").get<std::string>();
    in.task = task_kind_from_string(j.at("task").get<std::string>());
    in.query = j.at("query").get<std::string>();
    in.table = table_from_json(j.at("table"));
    if (j.contains("sentences")) {
      for (const auto& s : j["sentences"]) {
        Sentence sentence;
        if (s.contains("title") && !s["title"].is_null()) sentence.title = s["title"].get<std::string>();
        sentence.text = s.at("text").get<std::string>();
        if (text::trim(sentence.text).empty()) {
          throw Error(ErrorCode::ParseFailure, "instance " + in.id + ": empty sentence text");
        }
        in.sentences.items.push_back(std::move(sentence));
      }
    }
    const auto& gold = j.at("gold");
    if (gold.contains("label")) in.gold.label = gold["label"].get<std::string>();
    if (gold.contains("answers")) {
      for (const auto& a : gold["answers"]) in.gold.answers.push_back(cell_text(a));
    }
    if (j.contains("tags")) {
      for (const auto& [k, v] : j["tags"].items()) in.tags[k] = cell_text(v);
    }
    if (in.task == TaskKind::FactVerification) {
      if (!in.gold.label) throw Error(ErrorCode::ParseFailure, "instance " + in.id + ": fact verification needs gold.label");
      bool ok = false;
      for (const auto& l : labels_of(in.label_set())) ok = ok || text::iequals(l, *in.gold.label);
      if (!ok) {
        throw Error(ErrorCode::ParseFailure,
                    "instance " + in.id + ": gold label '" + *in.gold.label + "' not in label set");
      }
    }
    return in;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseFailure, std::string("malformed instance: ") + e.what());
  }
}

std::vector<Instance> load_instances(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::vector<Instance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseFailure, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(instance_from_json(j));
  }
  return out;
}

void write_instances(const std::filesystem::path& path, const std::vector<Instance>& instances) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  for (const auto& in : instances) out << instance_to_json(in).dump() << '\n';
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

}  // namespace tabreason
