#include "oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <regex>
#include <set>

namespace oracle {

namespace {

std::string trimmed(const std::string& s) {
  const char* ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::string lower(std::string s) {
  for (auto& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

int compare(const std::string& a, const std::string& b) {
  auto x = as_number(a), y = as_number(b);
  if (x && y) return *x < *y ? -1 : (*x > *y ? 1 : 0);
  const std::string la = lower(a), lb = lower(b);
  return la < lb ? -1 : (la > lb ? 1 : 0);
}

bool holds(const std::string& op, int c) {
  if (op == "=") return c == 0;
  if (op == "!=") return c != 0;
  if (op == "<") return c < 0;
  if (op == "<=") return c <= 0;
  if (op == ">") return c > 0;
  return c >= 0;
}

bool eval(const Cond& c, const tabreason::Row& row) {
  switch (c.kind) {
    case Cond::Kind::Cmp: return holds(c.op, compare(row[c.column].raw(), c.literal));
    case Cond::Kind::Like: return like(row[c.column].raw(), c.literal);
    case Cond::Kind::In:
      for (const auto& l : c.list) {
        if (compare(row[c.column].raw(), l) == 0) return true;
      }
      return false;
    case Cond::Kind::And: return eval(c.kids[0], row) && eval(c.kids[1], row);
    case Cond::Kind::Or: return eval(c.kids[0], row) || eval(c.kids[1], row);
    case Cond::Kind::Not: return !eval(c.kids[0], row);
  }
  return false;
}

std::string shortest(double v) {
  // Same contract as the engine's output: shortest round-trip form. The
  // comparison in tests is numeric, so any faithful spelling works.
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return v == 0 ? "0" : buf;
}

}  // namespace

std::optional<double> as_number(const std::string& cell) {
  static const std::regex number(
      R"(^([+-]?)((\d{1,3}(,\d{3})+(\.\d*)?)|(\d+(\.\d*)?)|(\.\d+))([eE][+-]?\d+)?\s*(%?)$)");
  const std::string t = trimmed(cell);
  std::smatch m;
  if (!std::regex_match(t, m, number)) return std::nullopt;
  std::string digits;
  for (char c : t) {
    if (c != ',' && c != '%' && c != ' ' && c != '\t') digits.push_back(c);
  }
  char* end = nullptr;
  double v = std::strtod(digits.c_str(), &end);
  if (!std::isfinite(v)) return std::nullopt;
  if (m[10].length() > 0) v /= 100.0;
  return v;
}

bool like(const std::string& value, const std::string& pattern) {
  std::string re;
  for (char c : pattern) {
    if (c == '%') re += ".*";
    else if (c == '_') re += ".";
    else if (std::string("\\^$.|?*+()[]{}").find(c) != std::string::npos) { re += '\\'; re += c; }
    else re += c;
  }
  return std::regex_match(value, std::regex(re, std::regex::icase));
}

Result evaluate(const Query& q, const tabreason::Table& table) {
  Result r;
  if (q.unknown_column) {
    r.kind = Result::Kind::UnknownColumn;
    return r;
  }
  bool agg = false, plain = false;
  for (const auto& p : q.projections) (p.kind == Proj::Kind::Aggregate ? agg : plain) = true;
  if (agg && plain) {
    r.kind = Result::Kind::Mixed;
    return r;
  }

  std::vector<const tabreason::Row*> kept;
  for (const auto& row : table.rows) {
    if (!q.where || eval(*q.where, row)) kept.push_back(&row);
  }

  if (agg) {
    std::vector<std::string> out;
    for (const auto& p : q.projections) {
      r.headers.push_back(p.alias ? *p.alias : p.fn + "(" + (p.column < 0 ? "*" : p.written) + ")");
      if (p.fn == "COUNT") {
        out.push_back(std::to_string(kept.size()));
        continue;
      }
      std::vector<double> xs;
      for (const auto* row : kept) {
        if (auto v = as_number((*row)[p.column].raw())) xs.push_back(*v);
      }
      if (xs.empty()) {
        out.push_back("");
        continue;
      }
      double v = 0;
      if (p.fn == "SUM" || p.fn == "AVG") {
        for (double x : xs) v += x;
        if (p.fn == "AVG") v /= static_cast<double>(xs.size());
      } else if (p.fn == "MIN") {
        v = *std::min_element(xs.begin(), xs.end());
      } else {
        v = *std::max_element(xs.begin(), xs.end());
      }
      out.push_back(shortest(v));
    }
    r.rows.push_back(out);
    return r;
  }

  std::vector<int> cols;
  for (const auto& p : q.projections) {
    if (p.kind == Proj::Kind::Star) {
      for (int i = 0; i < static_cast<int>(table.headers.size()); ++i) {
        cols.push_back(i);
        r.headers.push_back(table.headers[i]);
      }
    } else {
      cols.push_back(p.column);
      r.headers.push_back(p.alias ? *p.alias : table.headers[p.column]);
    }
  }
  std::set<std::vector<std::string>> seen;
  for (const auto* row : kept) {
    std::vector<std::string> out;
    for (int c : cols) out.push_back((*row)[c].raw());
    if (q.distinct && !seen.insert(out).second) continue;
    r.rows.push_back(std::move(out));
  }
  return r;
}

}  // namespace oracle
