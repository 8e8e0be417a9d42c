#ifndef FIBCLOSE_PROOF_HPP
#define FIBCLOSE_PROOF_HPP

#include <optional>
#include <string>

#include <gmpxx.h>
#include <json.hpp>

#include <fibclose/linforms.hpp>
#include <fibclose/realint.hpp>

namespace fibclose
{

using Json = nlohmann::ordered_json;

struct ProofConfig {
    long n_max = 550;
    Precision precision;
    std::size_t expected_count = 214;
    long expected_max_n = 42;
    long expected_max_a = 28;
    std::optional<std::string> table_path;
    mpz_class M1{"90000000000000000000000000000"}; // a-bound fed to the first reduction
    std::optional<mpz_class> M2;                    // defaults to the a-bound after stage 1
    BoundRoute route = BoundRoute::Rounded;
    long special_target = 112;
    unsigned threads = 0;
};

inline constexpr const char *certificate_format = "fibclose-certificate/1";

// {value, lo, hi} as decimal strings; lo/hi are outward-rounded.
[[nodiscard]] Json interval_json(const Interval &x);

// Runs every stage and assembles the certificate. Never throws for
// mathematical or resource failures; those become FAIL stages.
[[nodiscard]] Json run_full_proof(const ProofConfig &cfg);

[[nodiscard]] bool certificate_passed(const Json &cert);

} // namespace fibclose

#endif
