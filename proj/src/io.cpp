#include "kvn/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace kvn {

namespace {

constexpr char kMagic[8] = {'K', 'V', 'N', 'G', 'R', 'I', 'D', '1'};

void put_u32(std::ofstream& f, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    f.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::ifstream& f) {
    unsigned char b[4];
    f.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

void put_f64(std::ofstream& f, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
    f.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::ifstream& f) {
    unsigned char b[8];
    f.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

}  // namespace

std::string RunStamp::comment_line() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "# config_hash=%016llx seed=%llu",
                  static_cast<unsigned long long>(config_hash),
                  static_cast<unsigned long long>(seed));
    return buf;
}

void write_grid_binary(const std::string& path, const KvNWave& wave) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_grid_binary: cannot open " + path);
    f.write(kMagic, 8);
    put_u32(f, static_cast<std::uint32_t>(wave.grid.nq));
    put_u32(f, static_cast<std::uint32_t>(wave.grid.np));
    put_f64(f, wave.grid.qmin);
    put_f64(f, wave.grid.qmax);
    put_f64(f, wave.grid.pmin);
    put_f64(f, wave.grid.pmax);
    for (const auto& v : wave.values) {
        put_f64(f, v.real());
        put_f64(f, v.imag());
    }
    if (!f) throw std::runtime_error("write_grid_binary: write failed on " + path);
}

KvNWave read_grid_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_grid_binary: cannot open " + path);
    char magic[8];
    f.read(magic, 8);
    if (!f || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("read_grid_binary: bad magic in " + path);
    KvNWave w;
    w.grid.nq = static_cast<int>(get_u32(f));
    w.grid.np = static_cast<int>(get_u32(f));
    w.grid.qmin = get_f64(f);
    w.grid.qmax = get_f64(f);
    w.grid.pmin = get_f64(f);
    w.grid.pmax = get_f64(f);
    w.grid.validate();
    w.values.resize(w.grid.size());
    for (auto& v : w.values) {
        const double re = get_f64(f);
        const double im = get_f64(f);
        v = {re, im};
    }
    if (!f) throw std::runtime_error("read_grid_binary: truncated file " + path);
    return w;
}

void write_wave_csv(const std::string& path, const KvNWave& wave, const RunStamp& stamp) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_wave_csv: cannot open " + path);
    f << stamp.comment_line() << '\n' << "q,p,re_psi,im_psi,abs2\n";
    char buf[192];
    for (int i = 0; i < wave.grid.nq; ++i)
        for (int j = 0; j < wave.grid.np; ++j) {
            const auto v = wave.values[wave.grid.index(i, j)];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", wave.grid.q(i),
                          wave.grid.p(j), v.real(), v.imag(), std::norm(v));
            f << buf;
        }
}

void write_csv(const std::string& path, const RunStamp& stamp, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_csv: cannot open " + path);
    f << stamp.comment_line() << '\n' << header << '\n';
    char buf[48];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            f << buf;
            if (i + 1 < row.size()) f << ',';
        }
        f << '\n';
    }
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace kvn
