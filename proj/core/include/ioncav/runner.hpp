#pragma once

// Scenario runner behind the command-line tool: tau sweeps, table writers,
// the figure recipes, headline numbers and the invariant suite.

#include "ioncav/dynamics.hpp"
#include "ioncav/entanglement.hpp"

#include <array>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ioncav {

inline constexpr const char* kVersion = "0.1.0";

enum class Output { Probabilities, NegativitiesA, NegativitiesD, NegativityAB, Amplitudes, OracleCheck };

[[nodiscard]] std::string to_string(Output o);
/// "probabilities", "negativities_A", "negativities_D", "negativity_AB",
/// "amplitudes", "oracle_check". Throws ValidationError otherwise.
[[nodiscard]] Output parse_output(const std::string& text);

/// Raised when a computed row breaks an invariant (probabilities not summing
/// to one, analytic and brute-force amplitudes disagreeing).
class InvariantBreach : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Probability columns must sum to one within this.
inline constexpr double kProbabilitySumTolerance = 1e-10;
/// Analytic and propagated amplitudes must agree per component within this.
inline constexpr double kOracleTolerance = 1e-8;

struct SweepRequest {
    SimulationConfig config;
    double tau_min = 0.0;
    double tau_max = 3.0 * std::numbers::pi;
    int steps = 600;
    std::set<Output> outputs{Output::Probabilities};

    /// Validates the grid and the config; returns the config warnings.
    std::vector<std::string> validate() const;
    /// tau_min + i (tau_max - tau_min) / (steps - 1).
    [[nodiscard]] double tau(int i) const noexcept;
};

struct SweepRow {
    double tau = 0.0;
    std::optional<std::array<double, 4>> probabilities;
    std::optional<SubsystemNegativity> a;
    std::optional<SubsystemNegativity> d;
    std::optional<double> ng_ab;
    std::optional<std::array<Complex, 4>> amplitudes;
    /// Largest per-component |analytic - propagated| and the chain residual.
    std::optional<std::pair<double, double>> oracle;
};

struct SweepResult {
    SweepRequest request;
    std::vector<SweepRow> rows;
};

/// One row per grid point, computed on up to `threads` workers (0 picks the
/// hardware concurrency) and returned in tau order. Throws InvariantBreach.
[[nodiscard]] SweepResult run_sweep(const SweepRequest& request, unsigned threads = 0);

/// Fixed negativity/probability header, then amplitude (re_a0,im_a0,...) and
/// oracle (oracle_dev,oracle_residual) columns when those outputs are requested.
[[nodiscard]] std::vector<std::string> csv_header(const std::set<Output>& outputs);
void write_csv(std::ostream& out, const SweepResult& result);
/// {"metadata": {...}, "columns": [...], "rows": [{...}, ...]}; absent values are null.
void write_json(std::ostream& out, const SweepResult& result);

struct FigureRecipe {
    int id = 0;
    std::string caption;
    /// One request per plotted initial state.
    std::vector<SweepRequest> datasets;
};

[[nodiscard]] const std::vector<FigureRecipe>& figure_recipes();
/// Throws ValidationError for ids outside 1..7.
[[nodiscard]] const FigureRecipe& figure_recipe(int id);

struct HeadlineReport {
    double t_min_seconds = 0.0;
    std::array<double, 4> table_pi_8{};
    std::array<double, 4> table_pi_4{};
    double w_negativity = 0.0;
    std::vector<std::pair<int, double>> w2_peaks;
};

[[nodiscard]] HeadlineReport headline_numbers();
void print_headline(std::ostream& out, const HeadlineReport& report);

struct VerifyGrid {
    double tau_min = 0.0;
    double tau_max = 3.0 * std::numbers::pi;
    int steps = 200;
};

struct CheckResult {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    [[nodiscard]] bool passed() const noexcept { return max_deviation <= tolerance; }
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    [[nodiscard]] bool passed() const noexcept;
};

/// Analytic-vs-oracle amplitudes, normalisation, conserved quantities, sector
/// decoupling, transpose and negativity decompositions, closed forms and qubit
/// symmetry on the grid; plus the zeros of a2 for chain (1, 1) and the absence of
/// three- and four-way terms when a Fock label of the chain is zero.
[[nodiscard]] VerifyReport verify(const SimulationConfig& config, const VerifyGrid& grid = {});
void print_verify(std::ostream& out, const VerifyReport& report);

} // namespace ioncav
