#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mtx/textio.hpp"

namespace mtx {

namespace {

enum class Tok { Ident, LBrace, RBrace, LParen, RParen, Colon, Comma, Arrow, End, Bad };

struct Token {
  Tok kind = Tok::End;
  std::string_view text;
  SourceSpan span;
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Diagnostic> diags;
};

bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

LexResult lex(std::string_view text, std::string_view file) {
  LexResult out;
  size_t i = 0;
  int line = 1;
  int column = 1;

  auto advance = [&](size_t count) {
    for (; count > 0; --count, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  auto span_here = [&](size_t length) {
    return SourceSpan{std::string(file), line, column, static_cast<int>(length)};
  };
  auto push = [&](Tok kind, size_t length) {
    out.tokens.push_back(Token{kind, text.substr(i, length), span_here(length)});
    advance(length);
  };
  // True when position p can start a token (or is whitespace); anything else
  // belongs to a run of stray bytes reported as one diagnostic.
  auto can_start = [&](size_t p) {
    char c = text[p];
    if (is_space(c) || is_ident_start(c)) {
      return true;
    }
    if (c == '{' || c == '}' || c == '(' || c == ')' || c == ':' || c == ',') {
      return true;
    }
    if (c == '/' && p + 1 < text.size() && text[p + 1] == '/') {
      return true;
    }
    if (c == '-' && p + 1 < text.size() && text[p + 1] == '>') {
      return true;
    }
    return false;
  };

  while (i < text.size()) {
    char c = text[i];
    if (is_space(c)) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      size_t end = text.find('\n', i);
      advance((end == std::string_view::npos ? text.size() : end) - i);
      continue;
    }
    if (is_ident_start(c)) {
      size_t len = 1;
      while (i + len < text.size() && is_ident_char(text[i + len])) {
        ++len;
      }
      push(Tok::Ident, len);
      continue;
    }
    switch (c) {
      case '{': push(Tok::LBrace, 1); continue;
      case '}': push(Tok::RBrace, 1); continue;
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case ':': push(Tok::Colon, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      default: break;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      push(Tok::Arrow, 2);
      continue;
    }
    size_t len = 1;
    while (i + len < text.size() && !can_start(i + len)) {
      ++len;
    }
    out.diags.push_back(
        Diagnostic::error_at(DiagCode::ParseError, span_here(len), "unexpected characters"));
    push(Tok::Bad, len);
  }
  out.tokens.push_back(Token{Tok::End, {}, span_here(0)});
  return out;
}

constexpr std::string_view kClassKeywords[] = {"primitive", "class",   "association", "persistent",
                                               "extends",   "primary", "attr"};
constexpr std::string_view kClassTopKeywords[] = {"primitive", "class", "association"};
constexpr std::string_view kRdbmsKeywords[] = {"table", "col", "pkey", "fkey", "references"};
constexpr std::string_view kRdbmsTopKeywords[] = {"table"};

struct Cursor {
  std::span<const Token> toks;
  std::span<const std::string_view> keywords;
  std::span<const std::string_view> top_keywords;
  std::vector<Diagnostic> diags;
  size_t pos = 0;

  const Token& peek() const { return toks[pos]; }
  bool at_end() const { return peek().kind == Tok::End; }

  bool is_keyword(std::string_view text) const {
    return std::find(keywords.begin(), keywords.end(), text) != keywords.end();
  }
  bool at_kw(std::string_view kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }
  bool at_top_kw() const {
    return peek().kind == Tok::Ident &&
           std::find(top_keywords.begin(), top_keywords.end(), peek().text) !=
               top_keywords.end();
  }
  bool accept_kw(std::string_view kw) {
    if (at_kw(kw)) {
      ++pos;
      return true;
    }
    return false;
  }
  bool accept(Tok kind) {
    if (peek().kind == kind) {
      ++pos;
      return true;
    }
    return false;
  }

  // Stray-byte tokens were already reported by the lexer; an extra
  // "expected ..." on top of them is noise.
  void error_here(std::string message) {
    if (peek().kind != Tok::Bad) {
      diags.push_back(
          Diagnostic::error_at(DiagCode::ParseError, peek().span, std::move(message)));
    }
  }

  std::optional<Token> expect_ident(std::string_view what) {
    if (peek().kind == Tok::Ident) {
      if (!is_keyword(peek().text)) {
        return toks[pos++];
      }
      error_here("keyword '" + std::string(peek().text) + "' cannot be used as " +
                 std::string(what));
      return std::nullopt;
    }
    error_here("expected " + std::string(what));
    return std::nullopt;
  }

  bool expect(Tok kind, std::string_view what) {
    if (accept(kind)) {
      return true;
    }
    error_here("expected " + std::string(what));
    return false;
  }

  void sync_to_top() {
    while (!at_end() && !at_top_kw()) {
      ++pos;
    }
  }
};

void sort_by_position(std::vector<Diagnostic>& diags) {
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    int al = a.span ? a.span->line : 0;
    int ac = a.span ? a.span->column : 0;
    int bl = b.span ? b.span->line : 0;
    int bc = b.span ? b.span->column : 0;
    return std::tie(al, ac) < std::tie(bl, bc);
  });
}

// ---- class-model syntax ----

struct RawAttr {
  Token name;
  bool primary = false;
  Token type;
};

struct RawPrim {
  Token name;
};

struct RawClass {
  Token name;
  bool persistent = false;
  std::optional<Token> parent;
  std::vector<RawAttr> attrs;
};

struct RawAssoc {
  Token name;
  Token src;
  Token dest;
};

struct RawClassModel {
  std::vector<std::variant<RawPrim, RawClass>> classifiers;
  std::vector<RawAssoc> assocs;
};

void parse_class_decl(Cursor& cur, RawClassModel& out) {
  std::optional<Token> name = cur.expect_ident("a class name");
  if (!name.has_value()) {
    cur.sync_to_top();
    return;
  }
  RawClass decl{*name, false, std::nullopt, {}};
  decl.persistent = cur.accept_kw("persistent");
  if (cur.accept_kw("extends")) {
    decl.parent = cur.expect_ident("a parent class name");
  }
  if (!cur.expect(Tok::LBrace, "'{'")) {
    out.classifiers.push_back(std::move(decl));
    cur.sync_to_top();
    return;
  }
  while (true) {
    if (cur.accept(Tok::RBrace)) {
      break;
    }
    if (cur.at_end() || cur.at_top_kw()) {
      cur.error_here("expected '}'");
      break;
    }
    bool primary = cur.accept_kw("primary");
    if (!cur.accept_kw("attr")) {
      cur.error_here("expected 'attr'");
      ++cur.pos;
      continue;
    }
    std::optional<Token> attr_name = cur.expect_ident("an attribute name");
    if (!attr_name.has_value() || !cur.expect(Tok::Colon, "':'")) {
      continue;
    }
    std::optional<Token> type_name = cur.expect_ident("a type name");
    if (!type_name.has_value()) {
      continue;
    }
    decl.attrs.push_back(RawAttr{*attr_name, primary, *type_name});
  }
  out.classifiers.push_back(std::move(decl));
}

void parse_assoc_decl(Cursor& cur, RawClassModel& out) {
  std::optional<Token> name = cur.expect_ident("an association name");
  if (!name.has_value()) {
    cur.sync_to_top();
    return;
  }
  if (!cur.expect(Tok::Colon, "':'")) {
    cur.sync_to_top();
    return;
  }
  std::optional<Token> src = cur.expect_ident("a source class name");
  if (!src.has_value()) {
    cur.sync_to_top();
    return;
  }
  if (!cur.expect(Tok::Arrow, "'->'")) {
    cur.sync_to_top();
    return;
  }
  std::optional<Token> dest = cur.expect_ident("a destination class name");
  if (!dest.has_value()) {
    cur.sync_to_top();
    return;
  }
  out.assocs.push_back(RawAssoc{*name, *src, *dest});
}

}  // namespace

Outcome<ClassModel> parse_class_model(std::string_view text, std::string_view file) {
  LexResult lexed = lex(text, file);
  Cursor cur{lexed.tokens, kClassKeywords, kClassTopKeywords, {}, 0};

  RawClassModel raw;
  while (!cur.at_end()) {
    if (cur.accept_kw("primitive")) {
      if (std::optional<Token> name = cur.expect_ident("a primitive type name")) {
        raw.classifiers.push_back(RawPrim{*name});
      } else {
        cur.sync_to_top();
      }
    } else if (cur.accept_kw("class")) {
      parse_class_decl(cur, raw);
    } else if (cur.accept_kw("association")) {
      parse_assoc_decl(cur, raw);
    } else {
      cur.error_here("expected 'primitive', 'class', or 'association'");
      ++cur.pos;
      cur.sync_to_top();
    }
  }

  // Name resolution: indices are fixed by declaration order, so forward
  // references cost nothing; on duplicate names the first declaration wins
  // (the duplicate itself is the validator's finding, not the parser's).
  std::vector<Diagnostic> diags = std::move(lexed.diags);
  diags.insert(diags.end(), cur.diags.begin(), cur.diags.end());

  std::map<std::string_view, uint32_t> index_of;
  for (uint32_t i = 0; i < raw.classifiers.size(); ++i) {
    const auto& decl = raw.classifiers[i];
    std::string_view name = std::holds_alternative<RawPrim>(decl)
                                ? std::get<RawPrim>(decl).name.text
                                : std::get<RawClass>(decl).name.text;
    index_of.emplace(name, i);
  }
  auto resolve = [&](const Token& token) -> std::optional<ClassifierRef> {
    auto it = index_of.find(token.text);
    if (it == index_of.end()) {
      diags.push_back(Diagnostic::error_at(DiagCode::UnresolvedName, token.span,
                                           "unresolved name \"" + std::string(token.text) +
                                               "\""));
      return std::nullopt;
    }
    return ClassifierRef{it->second};
  };

  ClassModel model;
  for (const auto& decl : raw.classifiers) {
    if (const RawPrim* prim = std::get_if<RawPrim>(&decl)) {
      model.append_classifier(PrimitiveDataType{std::string(prim->name.text)});
      continue;
    }
    const RawClass& rc = std::get<RawClass>(decl);
    Class cls{std::string(rc.name.text), rc.persistent, std::nullopt, {}};
    if (rc.parent.has_value()) {
      cls.parent = resolve(*rc.parent);
    }
    for (const RawAttr& attr : rc.attrs) {
      if (std::optional<ClassifierRef> type = resolve(attr.type)) {
        cls.attributes.push_back(Attribute{std::string(attr.name.text), attr.primary, *type});
      }
    }
    model.append_classifier(std::move(cls));
  }
  for (const RawAssoc& assoc : raw.assocs) {
    std::optional<ClassifierRef> src = resolve(assoc.src);
    std::optional<ClassifierRef> dest = resolve(assoc.dest);
    if (src.has_value() && dest.has_value()) {
      model.append_association(Association{std::string(assoc.name.text), *src, *dest});
    }
  }

  sort_by_position(diags);
  if (has_errors(diags)) {
    return Outcome<ClassModel>::failure(std::move(diags));
  }
  Outcome<ClassModel> out = Outcome<ClassModel>::success(std::move(model));
  out.diagnostics = std::move(diags);
  return out;
}

namespace {

// ---- rdbms-model syntax ----

struct RawFkey {
  std::vector<Token> cols;
  std::optional<Token> table;
};

struct RawTable {
  Token name;
  std::vector<std::pair<Token, Token>> cols;  // (name, type)
  std::vector<Token> pkey;
  std::vector<RawFkey> fkeys;
};

bool parse_name_list(Cursor& cur, std::vector<Token>& out) {
  if (!cur.expect(Tok::LParen, "'('")) {
    return false;
  }
  do {
    std::optional<Token> name = cur.expect_ident("a column name");
    if (!name.has_value()) {
      return false;
    }
    out.push_back(*name);
  } while (cur.accept(Tok::Comma));
  return cur.expect(Tok::RParen, "')'");
}

void parse_table_decl(Cursor& cur, std::vector<RawTable>& out) {
  std::optional<Token> name = cur.expect_ident("a table name");
  if (!name.has_value()) {
    cur.sync_to_top();
    return;
  }
  RawTable decl{*name, {}, {}, {}};
  if (!cur.expect(Tok::LBrace, "'{'")) {
    out.push_back(std::move(decl));
    cur.sync_to_top();
    return;
  }
  while (cur.accept_kw("col")) {
    std::optional<Token> col_name = cur.expect_ident("a column name");
    if (!col_name.has_value() || !cur.expect(Tok::Colon, "':'")) {
      break;
    }
    std::optional<Token> type_name = cur.expect_ident("a type name");
    if (!type_name.has_value()) {
      break;
    }
    decl.cols.emplace_back(*col_name, *type_name);
  }
  if (cur.accept_kw("pkey")) {
    parse_name_list(cur, decl.pkey);
  } else {
    cur.error_here("expected 'pkey'");
  }
  while (cur.accept_kw("fkey")) {
    RawFkey fkey;
    if (!parse_name_list(cur, fkey.cols)) {
      break;
    }
    if (!cur.accept_kw("references")) {
      cur.error_here("expected 'references'");
      break;
    }
    fkey.table = cur.expect_ident("a table name");
    decl.fkeys.push_back(std::move(fkey));
  }
  if (!cur.accept(Tok::RBrace)) {
    cur.error_here("expected '}'");
    cur.sync_to_top();
  }
  out.push_back(std::move(decl));
}

}  // namespace

Outcome<RdbmsModel> parse_rdbms_model(std::string_view text, std::string_view file) {
  LexResult lexed = lex(text, file);
  Cursor cur{lexed.tokens, kRdbmsKeywords, kRdbmsTopKeywords, {}, 0};

  std::vector<RawTable> raw;
  while (!cur.at_end()) {
    if (cur.accept_kw("table")) {
      parse_table_decl(cur, raw);
    } else {
      cur.error_here("expected 'table'");
      ++cur.pos;
      cur.sync_to_top();
    }
  }

  std::vector<Diagnostic> diags = std::move(lexed.diags);
  diags.insert(diags.end(), cur.diags.begin(), cur.diags.end());

  std::map<std::string_view, uint32_t> table_index;
  for (uint32_t i = 0; i < raw.size(); ++i) {
    table_index.emplace(raw[i].name.text, i);
  }

  RdbmsModel model;
  for (const RawTable& decl : raw) {
    Table table;
    table.name = std::string(decl.name.text);
    std::map<std::string_view, uint32_t> column_index;
    for (uint32_t c = 0; c < decl.cols.size(); ++c) {
      table.columns.push_back(
          Column{std::string(decl.cols[c].first.text), std::string(decl.cols[c].second.text)});
      column_index.emplace(decl.cols[c].first.text, c);
    }
    auto resolve_col = [&](const Token& token) -> std::optional<uint32_t> {
      auto it = column_index.find(token.text);
      if (it == column_index.end()) {
        diags.push_back(Diagnostic::error_at(DiagCode::UnresolvedName, token.span,
                                             "unresolved column \"" + std::string(token.text) +
                                                 "\""));
        return std::nullopt;
      }
      return it->second;
    };
    for (const Token& token : decl.pkey) {
      if (std::optional<uint32_t> idx = resolve_col(token)) {
        table.pkey.push_back(*idx);
      }
    }
    for (const RawFkey& fkey : decl.fkeys) {
      FKey out_fkey;
      for (const Token& token : fkey.cols) {
        if (std::optional<uint32_t> idx = resolve_col(token)) {
          out_fkey.cols.push_back(*idx);
        }
      }
      if (!fkey.table.has_value()) {
        continue;
      }
      auto it = table_index.find(fkey.table->text);
      if (it == table_index.end()) {
        diags.push_back(Diagnostic::error_at(
            DiagCode::UnresolvedName, fkey.table->span,
            "unresolved table \"" + std::string(fkey.table->text) + "\""));
        continue;
      }
      out_fkey.references = it->second;
      table.fkeys.push_back(std::move(out_fkey));
    }
    model.tables.push_back(std::move(table));
  }

  sort_by_position(diags);
  if (has_errors(diags)) {
    return Outcome<RdbmsModel>::failure(std::move(diags));
  }
  Outcome<RdbmsModel> out = Outcome<RdbmsModel>::success(std::move(model));
  out.diagnostics = std::move(diags);
  return out;
}

}  // namespace mtx
