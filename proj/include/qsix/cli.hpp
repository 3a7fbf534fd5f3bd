// Command-line front end. run_cli is the whole program minus main(), so
// tests can drive it in-process.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qsix/complex.hpp"

namespace qsix {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int check_failed = 1;
inline constexpr int domain = 2;          // DomainError, PoleError, Unsatisfiable
inline constexpr int nonconvergence = 3;  // NonConvergence, BudgetExceeded
inline constexpr int usage = 64;
inline constexpr int io = 74;
}  // namespace exit_code

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "re,im" or a bare real; scientific notation accepted. Throws
// std::invalid_argument on anything else.
Complex parse_complex(const std::string& s);

// Shortest round-trip decimal form.
std::string format_real(Real v);
std::string format_complex(Complex z);  // "re,im"

}  // namespace qsix
