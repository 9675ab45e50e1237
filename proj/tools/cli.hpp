#pragma once

#include "hyperheight/height_engine.hpp"

#include "json.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hyperheight::cli {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitBudget = 4;

// Coefficients constant term first, e.g. "25,-13,11,-15,0,0,0,1".
HyperellipticCurve parse_curve(const std::string& text);
// "x,y", "(x,y)+(x,y)+..." or Mumford "[a0,a1,...];[b0,...]".
MumfordDivisor parse_divisor(const std::string& text, const HyperellipticCurve& C);
// "i", "2", "0.5-1.25i", "3i"; evaluated at the current MPFR precision.
Complex parse_complex(const std::string& text);

// One YAML document per prime, see data/reduction/README.md. When C is given
// every prime must be 2 or divide its discriminant.
std::map<Integer, ReductionData> load_reduction_file(const std::string& path,
                                                     const HyperellipticCurve* C = nullptr);
std::map<Integer, ReductionData> parse_reduction_yaml(const std::string& text,
                                                      const HyperellipticCurve* C = nullptr);

nlohmann::json to_json(const HeightBreakdown& b);
nlohmann::json to_json(const std::vector<PlaceReport>& places);

// Full command line without the program name. Writes the report to out and
// a one-line message to err on failure; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperheight::cli
