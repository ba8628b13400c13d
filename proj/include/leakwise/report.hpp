#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "leakwise/distributions.hpp"
#include "leakwise/two_execution.hpp"

namespace leakwise::cli {

/// Malformed command-line or config input; position is a character offset
/// into the offending argument when one is known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::optional<std::size_t> position = std::nullopt)
        : std::runtime_error(what), position_(position) {}
    std::optional<std::size_t> position() const noexcept { return position_; }

private:
    std::optional<std::size_t> position_;
};

/// Exit statuses of run() / main_entry().
enum ExitCode : int { kOk = 0, kParseFailure = 2, kDomainFailure = 3, kValidationFailure = 4 };

/// `family:key=value,key=value` split into its parts. Keys keep their order.
struct SpecTerm {
    struct Param {
        std::string key;
        std::string value;
        std::size_t position;  // offset of the value within the original text
    };
    std::string family;
    std::vector<Param> params;

    const Param* find(std::string_view key) const;
};

SpecTerm parse_spec_term(std::string_view text);

/// poisson:lambda=L | uniform:N=K | normal:[mu=M,]sigma2=V | lognormal:mu=M,sigma2=V
DistributionSpec parse_distribution(std::string_view text);

/// Inclusive integer range `a..b`, or a single integer.
struct IntRange {
    std::int64_t first = 1;
    std::int64_t last = 1;
};
IntRange parse_range(std::string_view text);

enum class Command { single, two_exec, solve, validate };
enum class Format { csv, json };

struct RunConfig {
    Command command = Command::single;
    std::vector<DistributionSpec> dists;
    std::vector<std::int64_t> targets{1};
    IntRange spectators{1, 32};

    // two-exec
    double sigma2 = 4.0;
    std::optional<std::int64_t> per_exec;
    std::int64_t s0 = 0, s1 = 0, s2 = 0;
    std::vector<Participation> participations{Participation::once, Participation::twice};

    double budget = 0.05;
    std::string scenario;  // validate
    std::uint64_t samples = 1'000'000;

    Format format = Format::csv;
    std::string output_path;
    std::uint64_t seed = 42;
    double threshold = kDefaultTruncationThreshold;
};

/// Builds a RunConfig from a JSON object using the same keys as the flags.
RunConfig config_from_json(std::string_view json_text);

using Cell = std::variant<std::string, std::int64_t, double>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// RFC 4180 style: header line, fields quoted when they hold a comma or quote.
void write_csv(const Table& table, std::ostream& os);
/// One object per row, keys in column order.
void write_json(const Table& table, std::ostream& os);
std::vector<std::vector<std::string>> read_csv(std::istream& is);

Table single_table(const RunConfig& cfg);
Table two_exec_table(const RunConfig& cfg);

struct ValidationOutcome {
    Table table;
    bool passed = false;
};
ValidationOutcome validate(const RunConfig& cfg);

/// Executes the configured command, writing the report to cfg.output_path
/// or `out`, and a one-line JSON error record to `err` on failure.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace leakwise::cli
