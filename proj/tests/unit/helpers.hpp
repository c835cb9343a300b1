#pragma once

#include <gtest/gtest.h>

#include <string>

#include "cap/surface.hpp"

namespace cap::test {

inline MuType ty(const std::string& text) {
  auto t = parseType(text);
  if (!t) throw std::runtime_error("bad type '" + text + "': " + t.error().format());
  return *t;
}

inline Term tm(const std::string& text) {
  auto t = parseTerm(text);
  if (!t) throw std::runtime_error("bad term '" + text + "': " + t.error().format());
  return *t;
}

inline Program prog(const std::string& text) {
  auto p = parseProgram(text);
  if (!p) throw std::runtime_error("bad program: " + p.error().format());
  return *p;
}

// F_A from the update example, with A spelled out.
inline std::string fOf(const std::string& a) { return "(rec f. Vl@" + a + " + f@f + (Cons + Node + Nil))"; }

inline const std::string kCorpusDir = CAP_CORPUS_DIR;

}  // namespace cap::test
