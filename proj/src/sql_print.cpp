#include "tabreason/sql.hpp"

namespace tabreason::sql {

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "=";
}

std::string_view to_string(AggFn fn) {
  switch (fn) {
    case AggFn::Count: return "COUNT";
    case AggFn::Sum: return "SUM";
    case AggFn::Avg: return "AVG";
    case AggFn::Min: return "MIN";
    case AggFn::Max: return "MAX";
  }
  return "COUNT";
}

namespace {

std::string quote(std::string_view s, char q) {
  std::string out(1, q);
  for (char c : s) {
    if (c == q) out.push_back(q);
    out.push_back(c);
  }
  out.push_back(q);
  return out;
}

std::string ident(std::string_view name) { return quote(name, '`'); }

std::string literal(const Literal& lit) {
  return lit.kind == Literal::Kind::Number ? lit.text : quote(lit.text, '\'');
}

std::string projection(const ProjItem& item) {
  std::string out;
  switch (item.kind) {
    case ProjItem::Kind::Star: return "*";
    case ProjItem::Kind::Column: out = ident(item.column); break;
    case ProjItem::Kind::Aggregate:
      out = std::string(to_string(item.fn)) + "(" + (item.arg_star ? "*" : ident(item.column)) + ")";
      break;
  }
  if (item.alias) out += " AS " + ident(*item.alias);
  return out;
}

}  // namespace

std::string print(const Pred& pred) {
  switch (pred.kind) {
    case Pred::Kind::Cmp:
      return ident(pred.column) + " " + std::string(to_string(pred.op)) + " " + literal(pred.literal);
    case Pred::Kind::Like:
      return ident(pred.column) + " LIKE " + literal(pred.literal);
    case Pred::Kind::In: {
      std::string out = ident(pred.column) + " IN (";
      for (std::size_t i = 0; i < pred.list.size(); ++i) {
        if (i) out += ", ";
        out += literal(pred.list[i]);
      }
      return out + ")";
    }
    case Pred::Kind::And:
      return "(" + print(pred.children.at(0)) + " AND " + print(pred.children.at(1)) + ")";
    case Pred::Kind::Or:
      return "(" + print(pred.children.at(0)) + " OR " + print(pred.children.at(1)) + ")";
    case Pred::Kind::Not:
      return "NOT (" + print(pred.children.at(0)) + ")";
  }
  return {};
}

std::string print(const SqlQuery& query) {
  std::string out = "SELECT ";
  if (query.distinct) out += "DISTINCT ";
  for (std::size_t i = 0; i < query.projections.size(); ++i) {
    if (i) out += ", ";
    out += projection(query.projections[i]);
  }
  out += " FROM " + ident(query.source.empty() ? "w" : query.source);
  if (query.predicate) out += " WHERE " + print(*query.predicate);
  return out;
}

}  // namespace tabreason::sql
