#include "asqkd/analysis.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace asqkd {

Rational Rational::reduced(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    const std::uint64_t g = std::gcd(num, den);
    return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

std::string Rational::to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

Rational qubit_efficiency(std::size_t n, std::size_t m) {
    if (n < 1 || m < 1) throw std::invalid_argument("qubit_efficiency needs n, m >= 1");
    // Alice's 2n+2m photons plus Bob's n+m resends.
    return Rational::reduced(n, (2 * n + 2 * m) + (n + m));
}

double wilson_halfwidth(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) return 0.0;
    const double nt = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nt;
    const double z2 = z * z;
    return z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / (1.0 + z2 / nt);
}

BatchStats run_batch(const SessionConfig& config, const BatchOptions& options, const AttackModel& attack,
                     std::size_t trials, std::vector<TrialRecord>* records) {
    validate_config(config);
    validate_attack(attack);
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");

    const Rng root(config.seed);
    PreSharedKeys fixed;
    if (options.key_policy == KeyPolicy::Fixed) {
        if (options.fixed_keys) {
            fixed = *options.fixed_keys;
        } else {
            Rng key_rng = root.split(~std::uint64_t{0});
            fixed = PreSharedKeys::random(config, key_rng);
        }
        validate_keys(config, fixed);
    }

    std::size_t detected = 0;
    std::size_t hash_failures = 0;
    std::size_t agreements = 0;
    BatchStats stats;
    stats.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = root.split(t);
        const PreSharedKeys keys = options.key_policy == KeyPolicy::Fixed ? fixed : PreSharedKeys::random(config, rng);
        const BitString sk = BitString::random(config.n, rng);
        const RunOutcome o = run_session(config, keys, sk, attack, rng).outcome;
        const bool key_match = o.sk_prime == o.sk;
        if (!o.keys_recycled) ++detected;
        if (!o.bob_check_pass) ++hash_failures;
        if (key_match) ++agreements;
        stats.decoy_checks += o.decoy_checks;
        stats.decoy_failures += o.decoy_failures;
        if (records) records->push_back({t, o.alice_check_pass, o.bob_check_pass, key_match, o.keys_recycled});
    }

    const double nt = static_cast<double>(trials);
    stats.detection_rate = static_cast<double>(detected) / nt;
    stats.bob_hash_fail_rate = static_cast<double>(hash_failures) / nt;
    stats.key_agreement_rate = static_cast<double>(agreements) / nt;
    stats.recycled_rate = static_cast<double>(trials - detected) / nt;
    stats.wilson_halfwidth = wilson_halfwidth(detected, trials);
    stats.per_decoy_detection_rate =
        stats.decoy_checks == 0 ? 0.0
                                : static_cast<double>(stats.decoy_failures) / static_cast<double>(stats.decoy_checks);
    return stats;
}

std::string AffineBits::to_string() const {
    const auto term = [](std::uint64_t c, const char* var) {
        return (c == 1 ? std::string() : std::to_string(c)) + var;
    };
    return term(n_coeff, "n") + " + " + term(m_coeff, "m");
}

std::vector<ComparisonRow> comparison_table(std::size_t n, std::size_t m) {
    const std::string capabilities = "Measure Generate Reflect";
    std::vector<ComparisonRow> rows{
        {"Yu et al. measure-resend ASQKD", capabilities, "Bell state", Rational{1, 10}, AffineBits{3, 3}, 0,
         "Public discussion", "No"},
        {"Li et al. measure-resend ASQKD", capabilities, "Bell state, single photons", Rational{1, 9},
         AffineBits{2, 2}, 0, "1-bit authenticated message", "Public hash"},
        {"Single-photon measure-resend ASQKD", capabilities, "Single photons", Rational{1, 6}, AffineBits{1, 2}, 0,
         "1-bit authenticated message (2 times)", "Secret hash"},
    };
    for (auto& row : rows) row.pre_shared_bits = row.pre_shared_bits_formula.evaluate(n, m);
    return rows;
}

}  // namespace asqkd
