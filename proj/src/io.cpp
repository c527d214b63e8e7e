#include "floatwave/io.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "floatwave/errors.hpp"

namespace floatwave {

using json = nlohmann::json;

const char* version() {
#ifdef FLOATWAVE_VERSION
    return FLOATWAVE_VERSION;
#else
    return "dev";
#endif
}

namespace {

Polygon parse_polygon(const json& j, const char* what) {
    if (!j.is_array() || j.size() < 3)
        throw Error(ErrorCode::BadConfig,
                    std::string(what) + " must be an array of at least 3 [x,y] pairs");
    Polygon p;
    for (const auto& q : j) {
        if (!q.is_array() || q.size() != 2 || !q[0].is_number() || !q[1].is_number())
            throw Error(ErrorCode::BadConfig,
                        std::string(what) + " entries must be [x,y] number pairs");
        p.push_back({q[0].get<double>(), q[1].get<double>()});
    }
    return p;
}

} // namespace

BodyFile parse_body_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // byte offset is all the parser reports; translate to line/column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << "body JSON parse error at line " << line << ", column " << col << ": "
           << e.what();
        throw Error(ErrorCode::BadConfig, os.str());
    }

    if (!j.is_object()) throw Error(ErrorCode::BadConfig, "body JSON must be an object");

    BodyFile bf;
    if (!j.contains("contour"))
        throw Error(ErrorCode::BadConfig, "body JSON is missing \"contour\"");
    bf.body.outer_contour = parse_polygon(j["contour"], "contour");

    if (j.contains("density_regions")) {
        const auto& regs = j["density_regions"];
        if (!regs.is_array())
            throw Error(ErrorCode::BadConfig, "density_regions must be an array");
        for (const auto& r : regs) {
            if (!r.is_object() || !r.contains("polygon") || !r.contains("rho") ||
                !r["rho"].is_number())
                throw Error(ErrorCode::BadConfig,
                            "each density region needs \"polygon\" and numeric \"rho\"");
            DensityRegion d;
            d.polygon = parse_polygon(r["polygon"], "density region polygon");
            d.rho = r["rho"].get<double>();
            bf.body.density_regions.push_back(std::move(d));
        }
    }

    bf.water.infinite_depth = true;
    if (j.contains("depth")) {
        const auto& d = j["depth"];
        if (d.is_string() && d.get<std::string>() == "infinite") {
            bf.water.infinite_depth = true;
        } else if (d.is_object() && d.contains("finite") && d["finite"].is_number()) {
            bf.water.infinite_depth = false;
            bf.water.depth = d["finite"].get<double>();
            if (bf.water.depth <= 0)
                throw Error(ErrorCode::BadConfig, "finite depth must be positive");
        } else {
            throw Error(ErrorCode::BadConfig,
                        "depth must be \"infinite\" or {\"finite\": h}");
        }
    }
    if (j.contains("gravity")) {
        if (!j["gravity"].is_number())
            throw Error(ErrorCode::BadConfig, "gravity must be a number");
        bf.water.gravity = j["gravity"].get<double>();
        if (bf.water.gravity <= 0)
            throw Error(ErrorCode::BadConfig, "gravity must be positive");
    }
    if (j.contains("water_density")) {
        if (!j["water_density"].is_number())
            throw Error(ErrorCode::BadConfig, "water_density must be a number");
        bf.body.water_density = j["water_density"].get<double>();
    }
    return bf;
}

BodyFile read_body_file(const std::string& path) {
    return parse_body_json(read_file(path));
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string config_hash(const std::string& canonical) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

CsvWriter::CsvWriter(const std::string& cfg_hash) {
    out_ += "# floatwave ";
    out_ += version();
    out_ += "\n# config ";
    out_ += cfg_hash;
    out_ += "\n";
}

void CsvWriter::comment(const std::string& line) {
    out_ += "# " + line + "\n";
}

void CsvWriter::columns(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out_ += ",";
        out_ += names[i];
    }
    out_ += "\n";
}

void CsvWriter::cell(const std::string& v) {
    if (row_open_) out_ += ",";
    out_ += v;
    row_open_ = true;
}

void CsvWriter::cell(double v) { cell(format_number(v)); }

void CsvWriter::cell(long long v) { cell(std::to_string(v)); }

void CsvWriter::end_row() {
    out_ += "\n";
    row_open_ = false;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text, bool force) {
    if (!force && std::filesystem::exists(path))
        throw Error(ErrorCode::IoError, path + " exists (use --force to overwrite)");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

} // namespace floatwave
