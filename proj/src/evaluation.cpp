#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <unordered_map>

#include "tabreason/error.hpp"
#include "tabreason/evaluation.hpp"
#include "tabreason/text.hpp"

namespace tabreason {

namespace {

std::string normalize_once(std::string_view in) {
  std::string s = text::collapse_whitespace(text::to_lower(strip_emphasis(in)));
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == ' ') {
      const bool before_punct = i + 1 < s.size() && std::string_view(",.;:!?)").find(s[i + 1]) != std::string_view::npos;
      const bool after_paren = !out.empty() && out.back() == '(';
      if (before_punct || after_paren) continue;
    }
    out.push_back(s[i]);
  }
  if (auto n = cell_as_number(out)) return text::format_number(*n);
  return out;
}

}  // namespace

std::string normalize_answer(std::string_view text) {
  std::string cur = normalize_once(text);
  for (int i = 0; i < 16; ++i) {
    std::string next = normalize_once(cur);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

bool denotation_match(std::span<const std::string> predicted, std::span<const std::string> gold) {
  if (gold.empty() || predicted.empty()) return false;
  std::multiset<std::string> a, b;
  for (const auto& p : predicted) a.insert(normalize_answer(p));
  for (const auto& g : gold) b.insert(normalize_answer(g));
  if (a == b) return true;
  // Extraction splits on commas, so "December 31, 1849" arrives as two
  // items; compare the rejoined text as well.
  auto joined = [](std::span<const std::string> xs) {
    return normalize_answer(text::join(std::vector<std::string>(xs.begin(), xs.end()), ", "));
  };
  return joined(predicted) == joined(gold);
}

std::string canonical_label(std::string_view label) {
  std::string l = text::to_upper(text::collapse_whitespace(strip_emphasis(label)));
  if (l == "TRUE") return "SUPPORTS";
  if (l == "FALSE") return "REFUTES";
  return l;
}

bool is_correct(const FinalAnswer& answer, const Instance& instance) {
  switch (answer.kind) {
    case FinalAnswer::Kind::Missing: return false;
    case FinalAnswer::Kind::Label:
      return instance.gold.label && canonical_label(answer.text) == canonical_label(*instance.gold.label);
    case FinalAnswer::Kind::Short: return denotation_match(answer.answers, instance.gold.answers);
    case FinalAnswer::Kind::Free: {
      const std::string p = normalize_answer(answer.text);
      return std::any_of(instance.gold.answers.begin(), instance.gold.answers.end(),
                         [&](const std::string& g) { return normalize_answer(g) == p; });
    }
  }
  return false;
}

std::string answer_text(const FinalAnswer& answer) {
  switch (answer.kind) {
    case FinalAnswer::Kind::Short: return text::join(answer.answers, ", ");
    case FinalAnswer::Kind::Label:
    case FinalAnswer::Kind::Free: return answer.text;
    case FinalAnswer::Kind::Missing: return "";
  }
  return "";
}

F1Result macro_f1(std::span<const std::string> predicted, std::span<const std::string> gold,
                  std::span<const std::string> classes) {
  if (predicted.size() != gold.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(predicted.size()) + " predictions for " +
                                               std::to_string(gold.size()) + " gold labels");
  }
  if (gold.empty()) throw Error(ErrorCode::EmptyInput, "no labels to score");
  if (classes.empty()) throw Error(ErrorCode::EmptyInput, "no classes to score");
  F1Result r;
  double sum = 0;
  for (const auto& c : classes) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const bool p = predicted[i] == c, g = gold[i] == c;
      tp += p && g;
      fp += p && !g;
      fn += !p && g;
    }
    double f1 = 0;
    if (tp + fp + fn == 0) {
      r.absent.push_back(c);
    } else {
      f1 = 2.0 * tp / (2.0 * tp + fp + fn);
    }
    r.per_class[c] = f1;
    sum += f1;
  }
  r.macro = sum / static_cast<double>(classes.size());
  return r;
}

F1Result three_class_f1(std::span<const std::string> predicted, std::span<const std::string> gold) {
  static const std::vector<std::string> classes{"SUPPORTS", "REFUTES", "NOT ENOUGH INFO"};
  std::vector<std::string> p, g;
  for (const auto& x : predicted) p.push_back(canonical_label(x));
  for (const auto& x : gold) g.push_back(canonical_label(x));
  return macro_f1(p, g, classes);
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unparseable: return "unparseable";
  }
  return "unparseable";
}

JudgeVerdict parse_verdict(std::string_view generation) {
  JudgeVerdict v;
  v.raw = std::string(generation);
  std::string_view t = text::trim(generation);
  while (!t.empty() && (t.front() == '*' || t.front() == '"' || t.front() == '\'')) t.remove_prefix(1);
  std::size_t n = 0;
  while (n < t.size() && std::isalpha(static_cast<unsigned char>(t[n]))) ++n;
  const std::string word = text::to_lower(t.substr(0, n));
  if (word == "yes") v.verdict = Verdict::Yes;
  else if (word == "no") v.verdict = Verdict::No;
  return v;
}

JudgeVerdict judge_verdict(const std::string& question, const std::vector<std::string>& gold,
                           const std::string& predicted, Backend& backend, const PromptTemplates& templates) {
  GenerationRequest req;
  req.messages = {{Role::User, build_judge_prompt(question, gold, predicted, templates)}};
  req.max_new_tokens = 16;
  return parse_verdict(backend.generate(req).text);
}

EvalReport build_report(std::span<const RunResult> results, std::span<const Instance> instances,
                        const ReportOptions& options) {
  std::unordered_map<std::string, const Instance*> by_id;
  for (const auto& inst : instances) by_id.emplace(inst.id, &inst);

  EvalReport rep;
  std::set<std::string> seen;
  std::vector<std::string> f1_pred, f1_gold;
  std::size_t judged_yes = 0;
  std::map<std::pair<std::string, std::string>, GroupStats> groups;
  std::set<std::string> keys(options.group_by.begin(), options.group_by.end());
  if (keys.empty()) {
    for (const auto& r : results) {
      if (auto it = by_id.find(r.outcome.instance_id); it != by_id.end()) {
        for (const auto& [k, v] : it->second->tags) keys.insert(k);
      }
    }
  }

  for (const auto& r : results) {
    const std::string& id = r.outcome.instance_id;
    auto it = by_id.find(id);
    if (it == by_id.end()) throw Error(ErrorCode::IdMismatch, "result for unknown instance '" + id + "'");
    if (!seen.insert(id).second) throw Error(ErrorCode::IdMismatch, "instance '" + id + "' appears twice");
    const Instance& inst = *it->second;

    ++rep.evaluated;
    if (r.outcome.status != Status::Ok) ++rep.failed;
    const FinalAnswer& ans = r.outcome.final_answer;
    const bool missing = ans.is_missing();
    const bool ok = is_correct(ans, inst);
    rep.missing += missing;
    rep.correct += ok;
    rep.mean_api_calls += r.outcome.api_calls;

    if (options.three_class_f1 && inst.task == TaskKind::FactVerification && inst.gold.label) {
      f1_pred.push_back(missing ? "(missing)" : ans.text);
      f1_gold.push_back(*inst.gold.label);
    }
    if (options.judge) {
      if (!missing) {
        std::vector<std::string> gold = inst.gold.answers;
        if (gold.empty() && inst.gold.label) gold.push_back(*inst.gold.label);
        auto v = judge_verdict(inst.query, gold, answer_text(ans), *options.judge);
        judged_yes += v.verdict == Verdict::Yes;
        rep.judge_unparseable += v.verdict == Verdict::Unparseable;
      }
    }
    for (const auto& key : keys) {
      auto tag = inst.tags.find(key);
      const std::string value = tag == inst.tags.end() ? "(none)" : tag->second;
      GroupStats& g = groups[{key, value}];
      g.tag = key;
      g.value = value;
      ++g.count;
      g.correct += ok;
      g.missing += missing;
    }
  }

  if (rep.evaluated) {
    rep.accuracy = static_cast<double>(rep.correct) / static_cast<double>(rep.evaluated);
    rep.mean_api_calls /= static_cast<double>(rep.evaluated);
    if (options.judge) rep.judge_accuracy = static_cast<double>(judged_yes) / static_cast<double>(rep.evaluated);
  }
  if (options.three_class_f1) {
    if (f1_gold.empty()) {
      rep.notes.push_back("three-class F1 skipped: no labelled fact verification instances");
    } else {
      rep.f1 = three_class_f1(f1_pred, f1_gold);
      for (const auto& c : rep.f1->absent) rep.notes.push_back("class " + c + " absent; scored as F1 = 0");
    }
  }
  for (auto& [key, g] : groups) {
    g.accuracy = g.count ? static_cast<double>(g.correct) / static_cast<double>(g.count) : 0.0;
    rep.breakdowns.push_back(g);
  }
  return rep;
}

nlohmann::ordered_json report_to_json(const EvalReport& rep) {
  nlohmann::ordered_json j;
  j["evaluated"] = rep.evaluated;
  j["correct"] = rep.correct;
  j["missing"] = rep.missing;
  j["failed"] = rep.failed;
  j["accuracy"] = rep.accuracy;
  if (rep.f1) {
    nlohmann::ordered_json f;
    f["macro"] = rep.f1->macro;
    for (const auto& [c, v] : rep.f1->per_class) f["per_class"][c] = v;
    j["three_class_f1"] = std::move(f);
  }
  if (rep.judge_accuracy) {
    j["judge_accuracy"] = *rep.judge_accuracy;
    j["judge_unparseable"] = rep.judge_unparseable;
  }
  j["mean_api_calls"] = rep.mean_api_calls;
  auto groups = nlohmann::ordered_json::array();
  for (const auto& g : rep.breakdowns) {
    groups.push_back({{"tag", g.tag}, {"value", g.value}, {"count", g.count}, {"correct", g.correct},
                      {"missing", g.missing}, {"accuracy", g.accuracy}});
  }
  j["breakdowns"] = std::move(groups);
  j["notes"] = rep.notes;
  return j;
}

std::string report_to_text(const EvalReport& rep) {
  std::string out;
  char buf[160];
  auto row = [&](const char* name, const std::string& value) {
    std::snprintf(buf, sizeof buf, "%-22s %s\n", name, value.c_str());
    out += buf;
  };
  auto pct = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.4f", v);
    return std::string(b);
  };
  row("evaluated", std::to_string(rep.evaluated));
  row("correct", std::to_string(rep.correct));
  row("missing answers", std::to_string(rep.missing));
  row("failed runs", std::to_string(rep.failed));
  row("accuracy", pct(rep.accuracy));
  if (rep.f1) row("three-class macro F1", pct(rep.f1->macro));
  if (rep.judge_accuracy) {
    row("judge accuracy", pct(*rep.judge_accuracy));
    row("judge unparseable", std::to_string(rep.judge_unparseable));
  }
  row("mean api calls", pct(rep.mean_api_calls));
  if (!rep.breakdowns.empty()) {
    std::snprintf(buf, sizeof buf, "\n%-20s %-20s %7s %7s %8s\n", "tag", "value", "count", "correct", "accuracy");
    out += buf;
    for (const auto& g : rep.breakdowns) {
      std::snprintf(buf, sizeof buf, "%-20.20s %-20.20s %7zu %7zu %8s\n", g.tag.c_str(), g.value.c_str(), g.count,
                    g.correct, pct(g.accuracy).c_str());
      out += buf;
    }
  }
  for (const auto& n : rep.notes) out += "note: " + n + "\n";
  return out;
}

}  // namespace tabreason
