#include "spdc/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spdc {

uint64_t fnv1a64(const void* data, size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = 1469598103934665603ull;
    for (size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& text) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(text.data(), text.size())));
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw ConfigError("cannot write file: " + tmp);
        f << content;
    }
    std::filesystem::rename(tmp, path);
}

namespace {
std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
} // namespace

std::string make_csv(const std::vector<std::string>& metadata,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
    std::ostringstream o;
    for (const auto& m : metadata) o << "# " << m << "\n";
    for (size_t c = 0; c < columns.size(); ++c)
        o << columns[c] << (c + 1 < columns.size() ? "," : "");
    o << "\n";
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c)
            o << fmt(row[c]) << (c + 1 < row.size() ? "," : "");
        o << "\n";
    }
    return o.str();
}

std::string make_pgm16(const std::vector<double>& map, const GridAxis& ax,
                       const GridAxis& ay, const std::string& axis_comment) {
    double vmax = 0;
    for (double v : map) vmax = std::max(vmax, v);
    std::ostringstream o;
    o << "P5\n";
    o << "# " << axis_comment << " max " << fmt(vmax) << "\n";
    o << ax.n << " " << ay.n << "\n65535\n";
    for (int row = 0; row < ay.n; ++row) {
        const int iy = ay.n - 1 - row; // top image row = max q_y
        for (int ix = 0; ix < ax.n; ++ix) {
            const double v = map[static_cast<size_t>(ix) * ay.n + iy];
            const unsigned s = vmax > 0
                ? static_cast<unsigned>(std::lround(65535.0 * v / vmax)) : 0u;
            o.put(static_cast<char>((s >> 8) & 0xff));
            o.put(static_cast<char>(s & 0xff));
        }
    }
    return o.str();
}

std::vector<std::string> metadata_block(const std::string& resolved_config,
                                        const std::string& determinism) {
    std::vector<std::string> out;
    out.push_back(std::string("spdc_sim ") + kVersion);
    out.push_back("determinism: " + determinism);
    out.push_back("config:");
    std::istringstream in(resolved_config);
    std::string line;
    while (std::getline(in, line)) out.push_back("  " + line);
    return out;
}

std::string make_manifest_json(const std::string& resolved_config,
                               double elapsed_seconds,
                               const std::vector<ManifestEntry>& outputs) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["elapsed_seconds"] = elapsed_seconds;
    j["config"] = resolved_config;
    j["config_fnv1a64"] = fnv1a64_hex(resolved_config);
    j["outputs"] = nlohmann::json::array();
    for (const auto& e : outputs)
        j["outputs"].push_back({{"file", e.file}, {"fnv1a64", e.fnv1a64}});
    return j.dump(2) + "\n";
}

} // namespace spdc
