#include <algorithm>
#include <cmath>
#include <set>

#include "tabreason/error.hpp"
#include "tabreason/sql.hpp"
#include "tabreason/text.hpp"

namespace tabreason::sql {

namespace {

std::string column_key(std::string_view name) { return text::to_lower(text::collapse_whitespace(name)); }

class ColumnIndex {
 public:
  explicit ColumnIndex(const Table& table) {
    for (std::size_t i = 0; i < table.headers.size(); ++i) {
      keys_.push_back(column_key(table.headers[i]));
    }
  }

  std::size_t resolve(const std::string& name) const {
    const std::string key = column_key(name);
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (keys_[i] == key) return i;
    }
    throw Error(ErrorCode::UnknownColumn, "no such column: " + name);
  }

 private:
  std::vector<std::string> keys_;
};

// <0, 0, >0 like strcmp.
int compare(std::string_view cell, const Literal& lit) {
  auto a = cell_as_number(cell);
  auto b = cell_as_number(lit.text);
  if (a && b) return *a < *b ? -1 : (*a > *b ? 1 : 0);
  const std::string la = text::to_lower(cell);
  const std::string lb = text::to_lower(lit.text);
  return la.compare(lb) < 0 ? -1 : (la == lb ? 0 : 1);
}

bool holds(CmpOp op, int c) {
  switch (op) {
    case CmpOp::Eq: return c == 0;
    case CmpOp::Ne: return c != 0;
    case CmpOp::Lt: return c < 0;
    case CmpOp::Le: return c <= 0;
    case CmpOp::Gt: return c > 0;
    case CmpOp::Ge: return c >= 0;
  }
  return false;
}

// Resolves every column a predicate mentions so unknown names fail even when
// the table has no rows.
void check_columns(const Pred& p, const ColumnIndex& index) {
  switch (p.kind) {
    case Pred::Kind::Cmp:
    case Pred::Kind::Like:
    case Pred::Kind::In: index.resolve(p.column); break;
    default:
      for (const auto& c : p.children) check_columns(c, index);
  }
}

bool eval(const Pred& p, const Row& row, const ColumnIndex& index) {
  switch (p.kind) {
    case Pred::Kind::Cmp: return holds(p.op, compare(row[index.resolve(p.column)].raw(), p.literal));
    case Pred::Kind::Like: return like_match(row[index.resolve(p.column)].raw(), p.literal.text);
    case Pred::Kind::In: {
      const std::string& v = row[index.resolve(p.column)].raw();
      return std::any_of(p.list.begin(), p.list.end(), [&](const Literal& l) { return compare(v, l) == 0; });
    }
    case Pred::Kind::And: return eval(p.children[0], row, index) && eval(p.children[1], row, index);
    case Pred::Kind::Or: return eval(p.children[0], row, index) || eval(p.children[1], row, index);
    case Pred::Kind::Not: return !eval(p.children[0], row, index);
  }
  return false;
}

std::string aggregate_header(const ProjItem& item) {
  if (item.alias) return *item.alias;
  return std::string(to_string(item.fn)) + "(" + (item.arg_star ? "*" : item.column) + ")";
}

Cell aggregate(const ProjItem& item, const std::vector<const Row*>& rows, const ColumnIndex& index) {
  if (item.fn == AggFn::Count) return Cell(std::to_string(rows.size()));
  const std::size_t col = index.resolve(item.column);
  std::vector<double> values;
  for (const Row* r : rows) {
    if (auto v = cell_as_number((*r)[col])) values.push_back(*v);
  }
  if (values.empty()) return Cell();
  double out = 0;
  switch (item.fn) {
    case AggFn::Sum:
    case AggFn::Avg:
      for (double v : values) out += v;
      if (item.fn == AggFn::Avg) out /= static_cast<double>(values.size());
      break;
    case AggFn::Min: out = *std::min_element(values.begin(), values.end()); break;
    case AggFn::Max: out = *std::max_element(values.begin(), values.end()); break;
    case AggFn::Count: break;
  }
  return Cell(text::format_number(out));
}

}  // namespace

ResultTable execute(const SqlQuery& query, const Table& table) {
  const ColumnIndex index(table);
  if (query.predicate) check_columns(*query.predicate, index);

  bool has_agg = false;
  bool has_plain = false;
  for (const auto& item : query.projections) {
    if (item.kind == ProjItem::Kind::Aggregate) {
      has_agg = true;
      if (!item.arg_star) index.resolve(item.column);
    } else {
      has_plain = true;
      if (item.kind == ProjItem::Kind::Column) index.resolve(item.column);
    }
  }
  if (has_agg && has_plain) {
    throw Error(ErrorCode::AggregateMixedWithColumns,
                "aggregates cannot be mixed with plain columns without GROUP BY");
  }

  std::vector<const Row*> kept;
  for (const auto& row : table.rows) {
    if (!query.predicate || eval(*query.predicate, row, index)) kept.push_back(&row);
  }

  ResultTable result;
  if (has_agg) {
    Row row;
    for (const auto& item : query.projections) {
      result.headers.push_back(aggregate_header(item));
      row.push_back(aggregate(item, kept, index));
    }
    result.rows.push_back(std::move(row));
    return result;
  }

  std::vector<std::size_t> cols;
  for (const auto& item : query.projections) {
    if (item.kind == ProjItem::Kind::Star) {
      for (std::size_t i = 0; i < table.headers.size(); ++i) {
        cols.push_back(i);
        result.headers.push_back(table.headers[i]);
      }
    } else {
      const std::size_t c = index.resolve(item.column);
      cols.push_back(c);
      result.headers.push_back(item.alias ? *item.alias : table.headers[c]);
    }
  }

  std::set<std::vector<std::string>> seen;
  for (const Row* r : kept) {
    Row out;
    out.reserve(cols.size());
    for (std::size_t c : cols) out.push_back((*r)[c]);
    if (query.distinct) {
      std::vector<std::string> key;
      for (const auto& cell : out) key.push_back(cell.raw());
      if (!seen.insert(std::move(key)).second) continue;
    }
    result.rows.push_back(std::move(out));
  }
  return result;
}

ResultTable run(std::string_view source, const Table& table) { return execute(parse_select(source), table); }

std::string format_result(const ResultTable& result) {
  std::string out = format_pipe_row(std::span<const std::string>(result.headers)) + "\n";
  if (result.rows.empty()) return out + "(no rows)\n";
  for (const auto& row : result.rows) out += format_pipe_row(std::span<const Cell>(row)) + "\n";
  return out;
}

bool like_match(std::string_view value, std::string_view pattern) {
  const std::string lv = text::to_lower(value);
  const std::string lp = text::to_lower(pattern);
  const auto v = text::codepoints(lv);
  const auto p = text::codepoints(lp);
  // Greedy wildcard matching with single backtrack point for '%'.
  std::size_t i = 0, j = 0;
  std::size_t star = std::string::npos, mark = 0;
  while (i < v.size()) {
    if (j < p.size() && (p[j] == "_" || (p[j] != "%" && p[j] == v[i]))) {
      ++i;
      ++j;
    } else if (j < p.size() && p[j] == "%") {
      star = j++;
      mark = i;
    } else if (star != std::string::npos) {
      j = star + 1;
      i = ++mark;
    } else {
      return false;
    }
  }
  while (j < p.size() && p[j] == "%") ++j;
  return j == p.size();
}

}  // namespace tabreason::sql
