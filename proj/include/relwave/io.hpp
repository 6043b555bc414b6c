#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "relwave/lorentz_action.hpp"
#include "relwave/reduction.hpp"
#include "relwave/wavepacket.hpp"

// Column formats for plotting and debugging, JSON-lines measurement records,
// and a content digest for run manifests. All numeric text uses shortest
// round-trip formatting so identical data produces identical bytes.

namespace relwave {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// columns: index,kx[,ky,kz],re,im
inline void write_csv(std::ostream& os, const MomentumAmplitude& amp) {
    os << (amp.grid.dim == 1 ? "index,kx,re,im\n" : "index,kx,ky,kz,re,im\n");
    for (std::size_t i = 0; i < amp.size(); ++i) {
        const Vec3& k = amp.grid.points[i];
        os << i << ',' << format_double(k.x);
        if (amp.grid.dim == 3) os << ',' << format_double(k.y) << ',' << format_double(k.z);
        os << ',' << format_double(amp.values[i].real()) << ',' << format_double(amp.values[i].imag())
           << '\n';
    }
}

/// columns: index,x[,y,z],re,im (the shared field time goes in the report)
inline void write_csv(std::ostream& os, const PositionField& field) {
    os << (field.grid.dim == 1 ? "index,x,re,im\n" : "index,x,y,z,re,im\n");
    for (std::size_t i = 0; i < field.size(); ++i) {
        const Vec3& x = field.grid.points[i];
        os << i << ',' << format_double(x.x);
        if (field.grid.dim == 3) os << ',' << format_double(x.y) << ',' << format_double(x.z);
        os << ',' << format_double(field.values[i].real()) << ','
           << format_double(field.values[i].imag()) << '\n';
    }
}

/// columns: t,x,y,z,re,im
inline void write_csv(std::ostream& os, const SpacetimeSampleSet& set) {
    os << "t,x,y,z,re,im\n";
    for (std::size_t i = 0; i < set.size(); ++i) {
        const FourVector& e = set.events[i];
        os << format_double(e.t) << ',' << format_double(e.x) << ',' << format_double(e.y) << ','
           << format_double(e.z) << ',' << format_double(set.values[i].real()) << ','
           << format_double(set.values[i].imag()) << '\n';
    }
}

inline nlohmann::json to_json(const FourVector& v) {
    return nlohmann::json{{"t", v.t}, {"x", v.x}, {"y", v.y}, {"z", v.z}};
}

inline nlohmann::json to_json(const MeasurementRecord& rec) {
    return nlohmann::json{{"outcome", rec.outcome_label},   {"event", to_json(rec.event)},
                          {"pre_norm", rec.pre_norm},       {"seed", rec.rng_seed},
                          {"probabilities", rec.probabilities}, {"policy", rec.policy}};
}

/// one record per line
inline void append_record(std::ostream& os, const MeasurementRecord& rec) {
    os << to_json(rec).dump() << '\n';
}

/// FNV-1a 64-bit content digest, hex encoded.
inline std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace relwave
