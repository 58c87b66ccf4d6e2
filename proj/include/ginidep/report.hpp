#pragma once

#include <string>

#include "ginidep/inference.hpp"
#include "ginidep/simgen.hpp"

namespace ginidep {

// Pretty-printed JSON documents, newline terminated.
std::string to_json(const TestReport& report);
std::string to_json(const PowerReport& report);

}  // namespace ginidep
