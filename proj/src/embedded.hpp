#pragma once

namespace ag::embedded {

// Generated from rules/*.dl at build time; see cmake/embed_rules.cmake.
const char* extended_rules();
const char* legacy_rules();

} // namespace ag::embedded
