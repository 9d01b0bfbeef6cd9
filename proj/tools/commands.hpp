#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>

#include "markovforge/numerics.hpp"

namespace markovforge::cli {

// Exit codes.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kInvalidBeta = 2;
constexpr int kPrecisionExhausted = 3;
constexpr int kNoDeletableLoop = 4;
constexpr int kVerifyFailed = 5;

constexpr Bits kDefaultPrecision = 256;
constexpr std::size_t kDefaultOracleDepth = 12;
constexpr std::size_t kDefaultExportMaxN = 16;

/// MARKOVFORGE_PRECISION if set and valid, else the default.
Bits default_precision();

/// beta = e^{h p}; "ln2" and "ln3" give the exact integers 2^p and 3^p.
BetaValue beta_from_entropy(const std::string& entropy, std::size_t period);

struct BuildArgs {
    std::optional<std::string> beta;
    std::optional<std::string> entropy;
    std::size_t period = 1;
    std::size_t max_n = 64;
    Bits precision = kDefaultPrecision;
    std::string out;
};

struct TransientArgs {
    std::string file;
    std::string n0 = "auto";
    std::string out;
};

struct ClassifyArgs {
    std::string file;
    Bits precision = kDefaultPrecision;
    bool bits = false;
};

struct EntropyArgs {
    std::string file;
    std::size_t max_n = 64;
    std::string csv;
};

struct LiftArgs {
    std::string file;
    std::size_t period = 1;
    std::string out;
};

struct ExportArgs {
    std::string file;
    std::string format = "dot";
    std::size_t max_n = kDefaultExportMaxN;
    std::string out;
};

struct VerifyArgs {
    std::string file;
    std::size_t oracle_depth = kDefaultOracleDepth;
};

// Each command writes results to `out`, diagnostics to `err`, and returns
// its exit code. An empty output path means `out`.
int cmd_build(const BuildArgs& args, std::ostream& out, std::ostream& err);
int cmd_transient_variant(const TransientArgs& args, std::ostream& out, std::ostream& err);
int cmd_classify(const ClassifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_entropy(const EntropyArgs& args, std::ostream& out, std::ostream& err);
int cmd_lift(const LiftArgs& args, std::ostream& out, std::ostream& err);
int cmd_export(const ExportArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

}  // namespace markovforge::cli
