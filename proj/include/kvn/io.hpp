#ifndef KVNCPI_IO_HPP
#define KVNCPI_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "kvn/phase_grid.hpp"

namespace kvn {

/// Metadata stamped into every output file for reproducibility.
struct RunStamp {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;

    std::string comment_line() const;  // "# config_hash=.... seed=...."
};

/// Binary grid format (shared by phase-space dumps and kernel dumps):
///   magic "KVNGRID1" (8 bytes)
///   u32 n0, u32 n1
///   f64 a0_min, a0_max, a1_min, a1_max
///   n0*n1 row-major (f64 re, f64 im) pairs
/// All fields little-endian.
void write_grid_binary(const std::string& path, const KvNWave& wave);
KvNWave read_grid_binary(const std::string& path);

/// CSV dump: columns q,p,re_psi,im_psi,abs2 after the stamp comment line.
void write_wave_csv(const std::string& path, const KvNWave& wave, const RunStamp& stamp);

/// Generic small CSV writer: one stamp comment, a header line, then rows of
/// %.17g-formatted numbers (deterministic for identical inputs).
void write_csv(const std::string& path, const RunStamp& stamp, const std::string& header,
               const std::vector<std::vector<double>>& rows);

/// FNV-1a hash of a byte string (config hashing).
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace kvn

#endif
