#pragma once

#include <string>

#include "join2pn/syntax.hpp"

namespace join2pn::detail {

std::string print_term(const Process& p, bool with_ids);
std::string print_definition_term(const Definition& d, bool with_ids);

}  // namespace join2pn::detail
