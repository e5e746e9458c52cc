#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "wavelab/errors.hpp"
#include "wavelab/grid.hpp"

namespace wavelab {

/// WVF1 binary snapshot: magic "WVF1", u64 N, u64 component count, f64 L,
/// then little-endian f64 samples, row-major, components concatenated.
inline void write_wvf1(const std::string& path, const std::vector<const RealField*>& fields) {
    if (fields.empty()) throw ConfigError("wvf1: no components");
    const Grid3& g = fields[0]->grid;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("wvf1: cannot open " + path);
    out.write("WVF1", 4);
    std::uint64_t n = g.n(), c = fields.size();
    double L = g.side_length();
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&c), 8);
    out.write(reinterpret_cast<const char*>(&L), 8);
    for (const RealField* f : fields) {
        if (f->grid != g) throw ConfigError("wvf1: mixed grids");
        out.write(reinterpret_cast<const char*>(f->values.data()),
                  f->values.size() * sizeof(double));
    }
    if (!out) throw ConfigError("wvf1: write failed for " + path);
}

inline std::vector<RealField> read_wvf1(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("wvf1: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "WVF1", 4) != 0)
        throw ConfigError("wvf1: bad magic in " + path);
    std::uint64_t n = 0, c = 0;
    double L = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&c), 8);
    in.read(reinterpret_cast<char*>(&L), 8);
    Grid3 g(L, static_cast<int>(n));
    std::vector<RealField> out;
    for (std::uint64_t i = 0; i < c; ++i) {
        RealField f(g);
        in.read(reinterpret_cast<char*>(f.values.data()), f.values.size() * sizeof(double));
        if (!in) throw ConfigError("wvf1: truncated file " + path);
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace wavelab
