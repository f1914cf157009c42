#ifndef KVNCPI_CONFIG_HPP
#define KVNCPI_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kvn/phase_space.hpp"

namespace kvn {

/// Parse/validation failure with file:line / field context.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Key/value configuration with [section] nesting. Repeated keys accumulate
/// (used by the Hamiltonian term list). '#' starts a comment.
class RunConfig {
  public:
    static RunConfig load(const std::string& path);
    static RunConfig parse(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           std::optional<std::string> fallback = std::nullopt) const;
    double get_double(const std::string& section, const std::string& key,
                      std::optional<double> fallback = std::nullopt) const;
    long get_long(const std::string& section, const std::string& key,
                  std::optional<long> fallback = std::nullopt) const;
    std::vector<std::string> get_all(const std::string& section, const std::string& key) const;

    /// Positive-value gate; throws ConfigError naming the field otherwise.
    double require_positive(const std::string& section, const std::string& key,
                            double fallback) const;

    /// [hamiltonian]: either preset = harmonic|free|quartic (with optional
    /// mass/omega/lambda) or explicit `term = e1 e2 ... : coeff` lines over
    /// 2*dof exponents.
    PolynomialHamiltonian hamiltonian() const;

    std::uint64_t seed() const;
    void override_seed(std::uint64_t s) { seed_override_ = s; }

    /// Hash of the canonicalized content (stamped into outputs).
    std::uint64_t hash() const;

  private:
    // section -> key -> values in file order
    std::map<std::string, std::map<std::string, std::vector<std::string>>> data_;
    std::string origin_;
    std::string canonical_;
    std::optional<std::uint64_t> seed_override_;
};

}  // namespace kvn

#endif
