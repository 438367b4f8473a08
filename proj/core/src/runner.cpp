#include "ioncav/runner.hpp"

#include "ioncav/basis.hpp"
#include "ioncav/oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <iomanip>
#include <memory>
#include <mutex>
#include <thread>

namespace ioncav {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<std::pair<Output, const char*>, 6> kOutputNames{{
    {Output::Probabilities, "probabilities"},
    {Output::NegativitiesA, "negativities_A"},
    {Output::NegativitiesD, "negativities_D"},
    {Output::NegativityAB, "negativity_AB"},
    {Output::Amplitudes, "amplitudes"},
    {Output::OracleCheck, "oracle_check"},
}};

const std::vector<std::string> kFixedColumns{
    "tau",  "P0",   "P1",   "P2",   "P3",   "NG_A",  "E2_A",     "E3_A",     "E4_A",    "E0_A",
    "NG_D", "E2_D", "E3_D", "E4_D", "E0_D", "NG_AB", "E3_A_ABC", "E3_A_ABD", "E3_A_ACD"};

bool wants(const std::set<Output>& outputs, Output o) { return outputs.count(o) != 0; }

double max_component_gap(const std::array<Complex, 4>& x, const std::array<Complex, 4>& y) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        worst = std::max(worst, std::abs(x[i] - y[i]));
    }
    return worst;
}

SweepRow compute_row(const SweepRequest& req, const ChainOracle* oracle, double tau) {
    SweepRow row;
    row.tau = tau;
    const AmplitudeSet amps = amplitudes(req.config, tau);
    const auto& out = req.outputs;

    if (wants(out, Output::Probabilities)) {
        const auto p = probabilities(amps);
        const double sum = p[0] + p[1] + p[2] + p[3];
        if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
            throw InvariantBreach("probabilities sum to " + std::to_string(sum) + " at tau " + std::to_string(tau));
        }
        row.probabilities = p;
    }
    if (wants(out, Output::Amplitudes)) {
        row.amplitudes = amps.a;
    }

    const bool any_negativity = wants(out, Output::NegativitiesA) || wants(out, Output::NegativitiesD) ||
                                wants(out, Output::NegativityAB);
    if (any_negativity) {
        const DensityMatrix rho = density_from_pure(composite_state(amps));
        if (wants(out, Output::NegativitiesA)) {
            row.a = subsystem_negativities(rho, party::A, true);
        }
        if (wants(out, Output::NegativitiesD)) {
            row.d = subsystem_negativities(rho, party::D, false);
        }
        if (wants(out, Output::NegativityAB)) {
            row.ng_ab = group_negativity(rho, {party::A, party::B});
        }
    }

    if (oracle != nullptr) {
        // The propagated state carries no global phase.
        SimulationConfig bare = req.config;
        bare.include_global_phase = false;
        const AmplitudeSet analytic = amplitudes(bare, tau);
        const ChainProjection projected = oracle->chain(tau);
        const double gap = max_component_gap(analytic.a, projected.amplitudes.a);
        if (gap > kOracleTolerance || !projected.consistent()) {
            throw InvariantBreach("analytic and propagated amplitudes differ by " + std::to_string(gap) +
                                  " at tau " + std::to_string(tau));
        }
        row.oracle = std::make_pair(gap, projected.residual);
    }
    return row;
}

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (x == 0.0) {
        x = 0.0;  // no "-0"
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return {buf.data(), res.ptr};
}

// Row values in header order; nullopt marks a measure that was not computed.
std::vector<std::optional<double>> row_values(const SweepRow& row, const std::set<Output>& outputs) {
    std::vector<std::optional<double>> v;
    v.emplace_back(row.tau);
    for (std::size_t i = 0; i < 4; ++i) {
        v.push_back(row.probabilities ? std::optional<double>((*row.probabilities)[i]) : std::nullopt);
    }
    auto push_negativities = [&](const std::optional<SubsystemNegativity>& s) {
        if (s) {
            v.emplace_back(s->global);
            v.emplace_back(s->e(2));
            v.emplace_back(s->e(3));
            v.emplace_back(s->e(4));
            v.emplace_back(s->residual);
        } else {
            v.insert(v.end(), 5, std::nullopt);
        }
    };
    push_negativities(row.a);
    push_negativities(row.d);
    v.push_back(row.ng_ab);
    for (const Triple t : {Triple{0, 1, 2}, Triple{0, 1, 3}, Triple{0, 2, 3}}) {
        v.push_back(row.a ? row.a->constrained_value(t) : std::nullopt);
    }
    if (wants(outputs, Output::Amplitudes)) {
        for (std::size_t i = 0; i < 4; ++i) {
            v.push_back(row.amplitudes ? std::optional<double>((*row.amplitudes)[i].real()) : std::nullopt);
            v.push_back(row.amplitudes ? std::optional<double>((*row.amplitudes)[i].imag()) : std::nullopt);
        }
    }
    if (wants(outputs, Output::OracleCheck)) {
        v.push_back(row.oracle ? std::optional<double>(row.oracle->first) : std::nullopt);
        v.push_back(row.oracle ? std::optional<double>(row.oracle->second) : std::nullopt);
    }
    return v;
}

} // namespace

std::string to_string(Output o) {
    for (const auto& [value, name] : kOutputNames) {
        if (value == o) {
            return name;
        }
    }
    return "unknown";
}

Output parse_output(const std::string& text) {
    for (const auto& [value, name] : kOutputNames) {
        if (text == name) {
            return value;
        }
    }
    throw ValidationError("unknown output '" + text + "'");
}

std::vector<std::string> SweepRequest::validate() const {
    if (!std::isfinite(tau_min) || !std::isfinite(tau_max) || !(tau_min < tau_max)) {
        throw ValidationError("sweep: tau_min must be below tau_max");
    }
    if (steps < 2) {
        throw ValidationError("sweep: steps must be at least 2");
    }
    if (outputs.empty()) {
        throw ValidationError("sweep: no outputs requested");
    }
    return config.validate();
}

double SweepRequest::tau(int i) const noexcept {
    if (i == steps - 1) {
        return tau_max;
    }
    return tau_min + (tau_max - tau_min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

SweepResult run_sweep(const SweepRequest& request, unsigned threads) {
    request.validate();
    std::unique_ptr<ChainOracle> oracle;
    if (wants(request.outputs, Output::OracleCheck)) {
        oracle = std::make_unique<ChainOracle>(request.config);
    }

    SweepResult result{request, std::vector<SweepRow>(static_cast<std::size_t>(request.steps))};
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(request.steps));

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (int i = next++; i < request.steps; i = next++) {
            try {
                result.rows[static_cast<std::size_t>(i)] = compute_row(request, oracle.get(), request.tau(i));
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = request.steps;
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return result;
}

std::vector<std::string> csv_header(const std::set<Output>& outputs) {
    std::vector<std::string> header = kFixedColumns;
    if (wants(outputs, Output::Amplitudes)) {
        for (int i = 0; i < 4; ++i) {
            header.push_back("re_a" + std::to_string(i));
            header.push_back("im_a" + std::to_string(i));
        }
    }
    if (wants(outputs, Output::OracleCheck)) {
        header.emplace_back("oracle_dev");
        header.emplace_back("oracle_residual");
    }
    return header;
}

void write_csv(std::ostream& out, const SweepResult& result) {
    const auto header = csv_header(result.request.outputs);
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << '\n';
    for (const auto& row : result.rows) {
        const auto values = row_values(row, result.request.outputs);
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) {
                out << ',';
            }
            if (values[i]) {
                out << format_number(*values[i]);
            }
        }
        out << '\n';
    }
}

void write_json(std::ostream& out, const SweepResult& result) {
    using nlohmann::json;
    const auto& req = result.request;
    const auto& cfg = req.config;

    json outputs = json::array();
    for (auto o : req.outputs) {
        outputs.push_back(to_string(o));
    }
    json doc;
    doc["metadata"] = {
        {"version", kVersion},
        {"config",
         {{"preparation", to_string(cfg.preparation)},
          {"phonons", cfg.phonons0},
          {"photons", cfg.photons0},
          {"chain_m", cfg.chain().m},
          {"chain_n", cfg.chain().n},
          {"g", cfg.g},
          {"eta", cfg.eta},
          {"include_global_phase", cfg.include_global_phase},
          {"nu", cfg.nu},
          {"omega_c", cfg.omega_c},
          {"omega0", cfg.omega0}}},
        {"grid", {{"tau_min", req.tau_min}, {"tau_max", req.tau_max}, {"steps", req.steps}}},
        {"outputs", outputs},
        {"tolerances",
         {{"norm", kNormTolerance},
          {"probability_sum", kProbabilitySumTolerance},
          {"oracle", kOracleTolerance},
          {"negative_eigenvalue", kNegativeEigenvalueThreshold},
          {"degenerate_beta", kDegenerateBeta}}},
    };
    const auto header = csv_header(req.outputs);
    doc["columns"] = header;
    json rows = json::array();
    for (const auto& row : result.rows) {
        const auto values = row_values(row, req.outputs);
        json r = json::object();
        for (std::size_t i = 0; i < values.size(); ++i) {
            r[header[i]] = values[i] ? json(*values[i]) : json(nullptr);
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

namespace {

SweepRequest recipe_request(Preparation prep, int phonons, int photons, std::set<Output> outputs) {
    SweepRequest r;
    r.config.preparation = prep;
    r.config.phonons0 = phonons;
    r.config.photons0 = photons;
    r.outputs = std::move(outputs);
    return r;
}

std::vector<FigureRecipe> build_recipes() {
    constexpr auto ground = Preparation::AllGround;
    constexpr auto excited = Preparation::AllExcited;
    // |0000> on the logical layout is |000; 3, 3>, the bottom of chain (2, 2);
    // |1113> is |111; 0, 0>, the top of the same chain.
    return {
        {1, "P0..P3 for |000; 3, 3>", {recipe_request(ground, 3, 3, {Output::Probabilities})}},
        {2, "P0..P3 for |111; 0, 0>", {recipe_request(excited, 0, 0, {Output::Probabilities})}},
        {3, "N_G^A and E_K^A for |0000>", {recipe_request(ground, 3, 3, {Output::NegativitiesA})}},
        {4, "N_G^D and E_K^D for |0000>", {recipe_request(ground, 3, 3, {Output::NegativitiesD})}},
        {5, "N_G^A and E_K^A for |1113>", {recipe_request(excited, 0, 0, {Output::NegativitiesA})}},
        {6, "N_G^D and E_K^D for |1113>", {recipe_request(excited, 0, 0, {Output::NegativitiesD})}},
        {7,
         "N_G^AB for |0000> and |1113>",
         {recipe_request(ground, 3, 3, {Output::NegativityAB}),
          recipe_request(excited, 0, 0, {Output::NegativityAB})}},
    };
}

} // namespace

const std::vector<FigureRecipe>& figure_recipes() {
    static const std::vector<FigureRecipe> recipes = build_recipes();
    return recipes;
}

const FigureRecipe& figure_recipe(int id) {
    if (id < 1 || id > 7) {
        throw ValidationError("figure id must be in 1..7");
    }
    return figure_recipes()[static_cast<std::size_t>(id - 1)];
}

// ---------------------------------------------------------------------------

HeadlineReport headline_numbers() {
    HeadlineReport r;
    r.t_min_seconds = w1_generation_time(1, 8.95e6, 0.01);
    r.table_pi_8 = probabilities(amplitudes_ground(1, 1, kPi / 8.0));
    r.table_pi_4 = probabilities(amplitudes_ground(1, 1, kPi / 4.0));

    const SubsystemLayout qubits({2, 2, 2});
    const DensityMatrix w = DensityMatrix::from_pure(dicke_state(1), qubits);
    r.w_negativity = negativity(partial_transpose(w, TransposeSpec::global(party::A)), 2);

    for (int n = 1; n <= 10; ++n) {
        r.w2_peaks.emplace_back(n, w2_peak_probability(n));
    }
    return r;
}

void print_headline(std::ostream& out, const HeadlineReport& r) {
    const auto old_flags = out.flags();
    const auto old_precision = out.precision();
    auto table = [&](const std::array<double, 4>& p) {
        out << "(" << p[0] << ", " << p[1] << ", " << p[2] << ", " << p[3] << ")";
    };
    out << std::setprecision(6);
    out << "W1 generation time (g = 8.95e6 s^-1, eta = 0.01, one photon): " << r.t_min_seconds * 1e6
        << " us\n";
    out << "P0..P3 for |000; 2, 2> at tau = pi/8: ";
    table(r.table_pi_8);
    out << "\nP0..P3 for |000; 2, 2> at tau = pi/4: ";
    table(r.table_pi_4);
    out << "\nsingle-qubit negativity of |W>: " << std::setprecision(10) << r.w_negativity
        << " (2 sqrt(2) / 3)\n";
    out << "peak W2 population 24n(n+1)/(5n+3)^2:\n" << std::setprecision(6);
    for (const auto& [n, p] : r.w2_peaks) {
        out << "  n = " << std::setw(2) << n << "  " << p << '\n';
    }
    out << "  limit 24/25 = " << 24.0 / 25.0 << '\n';
    out.flags(old_flags);
    out.precision(old_precision);
}

// ---------------------------------------------------------------------------

namespace {

class Tracker {
public:
    Tracker(std::string name, double tolerance) : check_{std::move(name), 0.0, tolerance} {}
    void see(double deviation) {
        check_.max_deviation = std::isnan(deviation) ? INFINITY : std::max(check_.max_deviation, deviation);
    }
    [[nodiscard]] const CheckResult& result() const noexcept { return check_; }

private:
    CheckResult check_;
};

double pt_sum_defect(const DensityMatrix& rho, std::size_t p) {
    const auto n = static_cast<int>(rho.layout().parties());
    Eigen::MatrixXcd defect = partial_transpose(rho, TransposeSpec::global(p)) + (n - 2) * rho.matrix();
    for (int k = 2; k <= n; ++k) {
        defect -= partial_transpose(rho, TransposeSpec::kway(p, k));
    }
    return defect.cwiseAbs().maxCoeff();
}

} // namespace

bool VerifyReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

VerifyReport verify(const SimulationConfig& config, const VerifyGrid& grid) {
    SweepRequest shape;
    shape.config = config;
    shape.tau_min = grid.tau_min;
    shape.tau_max = grid.tau_max;
    shape.steps = grid.steps;
    (void)shape.validate();

    SimulationConfig bare = config;
    bare.include_global_phase = false;
    const ChainOracle oracle(bare);
    const auto labels = config.chain();

    Tracker oracle_gap("analytic vs propagated amplitudes", kOracleTolerance);
    Tracker chain_leak("population outside the chain", kChainResidualTolerance);
    Tracker norm("amplitude normalisation", 1e-12);
    Tracker conserved("conserved excitation numbers", 1e-9);
    Tracker transpose_sum("global transpose = sum of K-way pieces - (N-2) rho", 1e-12);
    Tracker decomposition("N_G = E2 + E3 + E4 - E0 (A and D)", 1e-9);
    Tracker closed_form("closed-form negativities", 1e-9);
    Tracker symmetry("qubit symmetry N_G^A = N_G^B = N_G^C", 1e-10);
    const bool low_chain = config.preparation == Preparation::AllGround && (labels.m == 0 || labels.n == 0);
    Tracker bipartite("E3 = E4 = 0 for a zero Fock label", 1e-10);

    const FullState start = oracle.initial();
    const auto conserved0 = conserved_quantities(start);

    for (int i = 0; i < grid.steps; ++i) {
        const double tau = shape.tau(i);
        const AmplitudeSet amps = amplitudes(bare, tau);
        const FullState evolved = oracle.state(tau);
        const ChainProjection projected =
            extract_chain_amplitudes(evolved, labels.m, labels.n, config.preparation);
        oracle_gap.see(max_component_gap(amps.a, projected.amplitudes.a));
        chain_leak.see(projected.residual);
        norm.see(std::abs(amplitudes(config, tau).norm_squared() - 1.0));
        const auto c = conserved_quantities(evolved);
        conserved.see(std::max(std::abs(c.first - conserved0.first), std::abs(c.second - conserved0.second)));

        const DensityMatrix rho = density_from_pure(composite_state(amplitudes(config, tau)));
        transpose_sum.see(std::max(pt_sum_defect(rho, party::A), pt_sum_defect(rho, party::D)));

        const NegativityReport report = entanglement_report(amplitudes(config, tau));
        decomposition.see(std::abs(report.a.global - report.a.reconstructed()));
        decomposition.see(std::abs(report.d.global - report.d.reconstructed()));
        closed_form.see(report.max_discrepancy());

        const double ng_b = group_negativity(rho, {party::B});
        const double ng_c = group_negativity(rho, {party::C});
        symmetry.see(std::max(std::abs(report.a.global - ng_b), std::abs(report.a.global - ng_c)));

        if (low_chain) {
            for (const auto* s : {&report.a, &report.d}) {
                bipartite.see(std::max(std::abs(s->e(3)), std::abs(s->e(4))));
            }
        }
    }

    VerifyReport out;
    for (const auto* t : {&oracle_gap, &chain_leak, &norm, &conserved, &transpose_sum, &decomposition,
                          &closed_form, &symmetry}) {
        out.checks.push_back(t->result());
    }
    out.checks.push_back({"sigma = 3 and sigma = 1 sectors decouple",
                          sigma_sector_coupling(oracle.propagator().hamiltonian(), oracle.propagator().truncation()),
                          1e-12});
    if (low_chain) {
        out.checks.push_back(bipartite.result());
    }
    if (config.preparation == Preparation::AllGround && labels.m == 1 && labels.n == 1) {
        // a2 is proportional to cos(4 tau) - 1: zeros at even multiples of pi/4.
        Tracker zeros("a2 vanishes where cos(4 tau) = 1", 1e-12);
        for (int k = 0; k * kPi / 2.0 <= grid.tau_max + 1e-12; ++k) {
            const double tau = k * kPi / 2.0;
            if (tau >= grid.tau_min - 1e-12) {
                zeros.see(std::abs(amplitudes_ground(1, 1, tau).a[2]));
            }
        }
        out.checks.push_back(zeros.result());
    }
    return out;
}

void print_verify(std::ostream& out, const VerifyReport& report) {
    const auto old_flags = out.flags();
    out << std::scientific << std::setprecision(3);
    for (const auto& c : report.checks) {
        out << (c.passed() ? "ok     " : "BREACH ") << c.name << ": max deviation " << c.max_deviation
            << " (tolerance " << c.tolerance << ")\n";
    }
    out << (report.passed() ? "all checks passed" : "invariant breach") << '\n';
    out.flags(old_flags);
}

} // namespace ioncav
