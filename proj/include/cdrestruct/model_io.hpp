// Plain-text model format, version 1.
//
//   classmodel 1
//   type T
//   entity A
//     prop a T
//     super B
//   entity NewClass1 synthesized
//     prop c T
//
// One record per line, tokens separated by blanks, '#' starts a comment line.
// `prop` and `super` lines belong to the closest preceding `entity`. Supers
// may name entities declared further down. docs/model-format.md has the full
// grammar.
//
// save_model() writes the canonical form: header, types in model order,
// entities in model order with properties in declaration order followed by
// supers in edge order, two-space indentation, '\n' line ends.

#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cdrestruct/model.hpp"

namespace cdrestruct {

inline constexpr int kFormatVersion = 1;

enum class LoadErrc { Parse, UnresolvedReference, DuplicateName, DuplicateGeneralization, Cycle, Io };

class LoadError : public std::runtime_error {
 public:
  LoadError(LoadErrc code, const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ":" + std::to_string(column) + ": " + what : what),
        code_(code),
        line_(line),
        column_(column) {}

  LoadErrc code() const noexcept { return code_; }
  // 1-based position of the offending token; 0 when not tied to a location.
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  LoadErrc code_;
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

}  // namespace detail

namespace detail {

// Reads a document. Syntax errors always throw. Semantic errors (unresolved
// references, duplicates, cycles) throw as well unless `problems` is given,
// in which case they are collected and the offending record is skipped.
inline ClassModel read_document(std::string_view text, std::vector<LoadError>* problems) {
  struct Pending {
    EntityId owner;
    std::string name;  // super entity or property type
    std::size_t line, column;
  };

  ClassModel model;
  std::vector<Pending> supers;
  std::vector<Pending> prop_types;
  std::optional<EntityId> current;
  bool skipping = false;  // inside a rejected duplicate entity
  bool have_header = false;

  auto report = [&](LoadError e) {
    if (!problems) throw e;
    problems->push_back(std::move(e));
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no;

    auto tokens = tokenize(line);
    if (tokens.empty() || tokens.front().text.front() == '#') continue;

    auto fail = [&](const std::string& msg, const Token& at) {
      return LoadError(LoadErrc::Parse, msg, line_no, at.column);
    };
    auto expect_args = [&](std::size_t n) {
      if (tokens.size() < n + 1)
        throw fail("expected " + std::to_string(n) + " argument(s) after '" + std::string(tokens[0].text) + "'",
                   Token{{}, line.size() + 1});
      if (tokens.size() > n + 1) throw fail("unexpected token '" + std::string(tokens[n + 1].text) + "'", tokens[n + 1]);
    };
    auto name_at = [&](std::size_t i) {
      if (!is_valid_name(tokens[i].text)) throw fail("invalid name '" + std::string(tokens[i].text) + "'", tokens[i]);
      return std::string(tokens[i].text);
    };

    std::string_view kw = tokens[0].text;
    if (!have_header) {
      if (kw != "classmodel") throw fail("expected 'classmodel <version>' header", tokens[0]);
      expect_args(1);
      if (tokens[1].text != std::to_string(kFormatVersion))
        throw fail("unsupported format version '" + std::string(tokens[1].text) + "'", tokens[1]);
      have_header = true;
    } else if (kw == "type") {
      expect_args(1);
      std::string name = name_at(1);
      if (model.has_type(name))
        report(LoadError(LoadErrc::DuplicateName, "duplicate type " + name, line_no, tokens[1].column));
      else
        model.add_type(name);
    } else if (kw == "entity") {
      expect_args(tokens.size() >= 3 ? 2 : 1);
      std::string name = name_at(1);
      Origin origin = Origin::Original;
      if (tokens.size() == 3) {
        if (tokens[2].text == "synthesized") origin = Origin::Synthesized;
        else if (tokens[2].text != "original") throw fail("unknown origin '" + std::string(tokens[2].text) + "'", tokens[2]);
      }
      skipping = model.find(name).has_value();
      if (skipping) {
        report(LoadError(LoadErrc::DuplicateName, "duplicate entity " + name, line_no, tokens[1].column));
        current.reset();
      } else {
        current = model.add_entity(name, origin);
      }
    } else if (kw == "prop") {
      expect_args(2);
      std::string pname = name_at(1);
      std::string tname = name_at(2);
      if (skipping) continue;
      if (!current) throw fail("'prop' outside of an entity", tokens[0]);
      const EntityId owner = current.value();
      if (model.entity(owner).find_property(pname)) {
        report(LoadError(LoadErrc::DuplicateName, "duplicate property " + model.name_of(owner) + "." + pname,
                         line_no, tokens[1].column));
        continue;
      }
      model.unchecked_add_property(owner, {pname, tname});
      prop_types.push_back({owner, tname, line_no, tokens[2].column});
    } else if (kw == "super") {
      expect_args(1);
      std::string target = name_at(1);
      if (skipping) continue;
      if (!current) throw fail("'super' outside of an entity", tokens[0]);
      supers.push_back({current.value(), target, line_no, tokens[1].column});
    } else {
      throw fail("unknown record '" + std::string(kw) + "'", tokens[0]);
    }
  }
  if (!have_header) throw LoadError(LoadErrc::Parse, "missing 'classmodel' header", line_no, 1);

  for (const auto& p : prop_types)
    if (!model.has_type(p.name))
      report(LoadError(LoadErrc::UnresolvedReference, "unresolved type " + p.name, p.line, p.column));

  for (const auto& s : supers) {
    auto target = model.find(s.name);
    if (!target) {
      report(LoadError(LoadErrc::UnresolvedReference, "unresolved entity " + s.name, s.line, s.column));
    } else if (*target == s.owner) {
      report(LoadError(LoadErrc::Cycle, "self-generalization " + s.name, s.line, s.column));
    } else if (model.has_generalization(s.owner, *target)) {
      report(LoadError(LoadErrc::DuplicateGeneralization,
                       "duplicate generalization " + model.name_of(s.owner) + " -> " + s.name, s.line, s.column));
    } else {
      model.unchecked_add_generalization(s.owner, *target);
    }
  }

  // Remaining violations are cycles; unresolved types were reported above.
  for (const std::string& problem : validate(model))
    if (problem.starts_with("generalization cycle")) report(LoadError(LoadErrc::Cycle, problem));
  return model;
}

}  // namespace detail

// Parses and validates a document; the first problem is thrown as LoadError.
inline ClassModel load_model(std::string_view text) { return detail::read_document(text, nullptr); }

// Every problem of a document, in reading order. A syntax error ends the
// scan, so it is always the last entry.
inline std::vector<LoadError> check_document(std::string_view text) {
  std::vector<LoadError> problems;
  try {
    detail::read_document(text, &problems);
  } catch (const LoadError& e) {
    problems.push_back(e);
  }
  return problems;
}

inline std::string save_model(const ClassModel& model) {
  std::string out = "classmodel " + std::to_string(kFormatVersion) + "\n";
  for (const auto& t : model.types()) out += "type " + t + "\n";
  for (const Entity& e : model.entities()) {
    out += "entity " + e.name;
    if (e.origin == Origin::Synthesized) out += " synthesized";
    out += '\n';
    for (const auto& p : e.properties) out += "  prop " + p.prop_name + " " + p.type_name + "\n";
    for (EntityId g : model.supers(e.id)) out += "  super " + model.name_of(g) + "\n";
  }
  return out;
}

inline ClassModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(LoadErrc::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str());
}

inline void save_model_file(const ClassModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw LoadError(LoadErrc::Io, "cannot write " + path);
  out << save_model(model);
  if (!out.flush()) throw LoadError(LoadErrc::Io, "cannot write " + path);
}

}  // namespace cdrestruct
