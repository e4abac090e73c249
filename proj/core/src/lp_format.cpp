#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "storyweave/bip.hpp"

namespace storyweave::bip {

namespace {

constexpr std::size_t kLineWidth = 78;

// Appends " + 3 x" style terms, wrapping long expressions onto continuation
// lines (LP readers join them).
class ExpressionWriter {
 public:
  ExpressionWriter(std::string& out, std::string head) : out_(out) {
    line_ = " " + std::move(head);
  }

  void term(long coefficient, const std::string& name) {
    std::string piece;
    const long mag = coefficient < 0 ? -coefficient : coefficient;
    const std::string coef = mag == 1 ? std::string() : fmt::format("{} ", mag);
    if (first_) {
      piece = fmt::format(" {}{}{}", coefficient < 0 ? "- " : "", coef, name);
      first_ = false;
    } else {
      piece = fmt::format(" {} {}{}", coefficient < 0 ? '-' : '+', coef, name);
    }
    if (line_.size() + piece.size() > kLineWidth && line_.size() > 4) {
      out_ += line_;
      out_ += '\n';
      line_ = "  ";
      // Continuation lines still start with the sign.
      if (piece.front() == ' ') piece.erase(0, 1);
    }
    line_ += piece;
  }

  void finish(std::string_view tail) {
    line_ += tail;
    out_ += line_;
    out_ += '\n';
  }

 private:
  std::string& out_;
  std::string line_;
  bool first_ = true;
};

std::string_view relation_text(Relation op) {
  switch (op) {
    case Relation::LessEqual:
      return "<=";
    case Relation::GreaterEqual:
      return ">=";
    case Relation::Equal:
      return "=";
  }
  return "=";
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

enum class Section { None, Objective, Constraints, Binary, End };

std::optional<Section> section_keyword(const std::string& line) {
  const std::string key = lower(line);
  if (key == "minimize" || key == "minimise" || key == "min") return Section::Objective;
  if (key == "subject to" || key == "such that" || key == "st" || key == "s.t.") {
    return Section::Constraints;
  }
  if (key == "binary" || key == "binaries" || key == "bin") return Section::Binary;
  if (key == "end") return Section::End;
  return std::nullopt;
}

struct ParsedExpression {
  std::vector<std::pair<long, std::string>> terms;
  std::optional<Relation> op;
  long rhs = 0;
};

// Tokenizes "[name:] a x + b y ... [op rhs]".
ParsedExpression parse_expression(std::string_view body, int line_no) {
  ParsedExpression out;
  std::size_t i = 0;
  long sign = 1;
  bool has_coefficient = false;
  long coefficient = 1;
  auto fail = [&](std::string_view what) {
    throw std::invalid_argument(fmt::format("LP line {}: {}", line_no, what));
  };
  auto read_number = [&](std::size_t& k) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(body.data() + k, body.data() + body.size(), v);
    if (ec != std::errc()) fail("bad number");
    k = static_cast<std::size_t>(ptr - body.data());
    return v;
  };
  while (i < body.size()) {
    const char ch = body[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
    } else if (ch == '+') {
      ++i;
    } else if (ch == '-') {
      sign = -sign;
      ++i;
    } else if (ch == '<' || ch == '>' || ch == '=') {
      if (has_coefficient) fail("dangling coefficient");
      std::size_t k = i + 1;
      if (k < body.size() && body[k] == '=') ++k;
      out.op = ch == '<' ? Relation::LessEqual
               : ch == '>' ? Relation::GreaterEqual
                           : Relation::Equal;
      while (k < body.size() && std::isspace(static_cast<unsigned char>(body[k]))) ++k;
      long rhs_sign = 1;
      if (k < body.size() && (body[k] == '-' || body[k] == '+')) {
        if (body[k] == '-') rhs_sign = -1;
        ++k;
        while (k < body.size() && std::isspace(static_cast<unsigned char>(body[k]))) ++k;
      }
      out.rhs = rhs_sign * read_number(k);
      if (!trim(body.substr(k)).empty()) fail("trailing text after right-hand side");
      return out;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      if (has_coefficient) fail("two coefficients in a row");
      coefficient = read_number(i);
      has_coefficient = true;
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t k = i;
      while (k < body.size() &&
             (std::isalnum(static_cast<unsigned char>(body[k])) || body[k] == '_')) {
        ++k;
      }
      out.terms.emplace_back(sign * coefficient,
                             std::string(body.substr(i, k - i)));
      sign = 1;
      coefficient = 1;
      has_coefficient = false;
      i = k;
    } else {
      fail(fmt::format("unexpected character '{}'", ch));
    }
  }
  if (has_coefficient && coefficient != 0) fail("constant term in expression");
  return out;
}

// Strips an optional "name:" label.
std::string_view strip_label(std::string_view text) {
  const auto colon = text.find(':');
  return colon == std::string_view::npos ? text : text.substr(colon + 1);
}

}  // namespace

std::string export_lp(const BinaryProgram& program) {
  std::string out = "\\ storyweave binary program\n";
  out += "Minimize\n";
  {
    ExpressionWriter obj(out, "obj:");
    bool any = false;
    for (std::size_t j = 0; j < program.num_variables(); ++j) {
      if (program.objective()[j] != 0) {
        obj.term(program.objective()[j], program.names()[j]);
        any = true;
      }
    }
    if (!any && program.num_variables() > 0) obj.term(0, program.names()[0]);
    obj.finish("");
  }
  out += "Subject To\n";
  for (std::size_t r = 0; r < program.constraints().size(); ++r) {
    const auto& c = program.constraints()[r];
    ExpressionWriter row(out, fmt::format("c{}:", r));
    for (const auto& t : c.terms) row.term(t.coefficient, program.name(t.var));
    row.finish(fmt::format(" {} {}", relation_text(c.op), c.rhs));
  }
  out += "Binary\n";
  for (const auto& name : program.names()) {
    out += ' ';
    out += name;
    out += '\n';
  }
  out += "End\n";
  return out;
}

BinaryProgram parse_lp(std::string_view text) {
  // Declare variables in the order of the Binary section so indices survive
  // a round trip, then replay objective and constraints.
  struct Pending {
    std::string body;
    int line_no;
  };
  std::vector<std::string> binaries;
  std::string objective;
  int objective_line = 0;
  std::vector<Pending> rows;

  Section section = Section::None;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto bs = raw.find('\\'); bs != std::string::npos) raw.erase(bs);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (auto next = section_keyword(line)) {
      section = *next;
      if (section == Section::Objective) objective_line = line_no;
      continue;
    }
    switch (section) {
      case Section::None:
      case Section::End:
        throw std::invalid_argument(
            fmt::format("LP line {}: text outside a section", line_no));
      case Section::Objective:
        objective += ' ' + line;
        break;
      case Section::Constraints: {
        // A row continues until its relation operator has been seen.
        if (!rows.empty() &&
            rows.back().body.find_first_of("<>=") == std::string::npos) {
          rows.back().body += ' ' + line;
        } else {
          rows.push_back({line, line_no});
        }
        break;
      }
      case Section::Binary: {
        std::istringstream names(line);
        std::string name;
        while (names >> name) binaries.push_back(name);
        break;
      }
    }
  }

  BinaryProgram program;
  for (auto& name : binaries) program.add_variable(name);
  auto lookup = [&](const std::string& name, int at) {
    auto v = program.find(name);
    if (!v) {
      throw std::invalid_argument(
          fmt::format("LP line {}: variable \"{}\" not declared binary", at, name));
    }
    return *v;
  };

  const auto obj = parse_expression(strip_label(objective), objective_line);
  if (obj.op) {
    throw std::invalid_argument(
        fmt::format("LP line {}: relation in objective", objective_line));
  }
  for (const auto& [coef, name] : obj.terms) {
    if (coef != 0) program.add_objective(coef, lookup(name, objective_line));
  }
  for (const auto& row : rows) {
    const auto expr = parse_expression(strip_label(row.body), row.line_no);
    if (!expr.op) {
      throw std::invalid_argument(
          fmt::format("LP line {}: constraint without relation", row.line_no));
    }
    std::vector<Term> terms;
    for (const auto& [coef, name] : expr.terms) {
      terms.push_back({coef, lookup(name, row.line_no)});
    }
    program.add_constraint(std::move(terms), *expr.op, expr.rhs);
  }
  return program;
}

}  // namespace storyweave::bip
