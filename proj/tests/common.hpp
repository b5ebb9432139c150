#pragma once
#include <map>
#include <string>

#include "liefox/uea.hpp"

inline liefox::ContextPtr test_ctx(const std::string& stem) {
  static std::map<std::string, liefox::ContextPtr> cache;
  auto it = cache.find(stem);
  if (it != cache.end()) return it->second;
  auto p = liefox::load_presentation_file(std::string(LIEFOX_TEST_DATA) + "/" + stem + ".json");
  auto ctx = liefox::Context::make(std::move(p));
  cache[stem] = ctx;
  return ctx;
}
