#pragma once

#include <string>
#include <vector>

#include "floatwave/geometry.hpp"

namespace floatwave {

const char* version();

struct BodyFile {
    BodySection body;
    WaterConfig water;
};

// JSON schema: {"contour": [[x,y],...],
//               "density_regions": [{"polygon": [[x,y],...], "rho": r}, ...],
//               "depth": {"finite": h} | "infinite",
//               "gravity": g}
// density_regions, depth and gravity are optional (defaults: uniform rho is
// required explicitly, infinite depth, g = 9.81)
BodyFile parse_body_json(const std::string& text);
BodyFile read_body_file(const std::string& path);

// full round-trip decimal formatting
std::string format_number(double v);

// FNV-1a hash of the canonical configuration string, 16 hex digits
std::string config_hash(const std::string& canonical);

/// CSV with '#' metadata lines carrying the tool version and config hash.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& cfg_hash);
    void comment(const std::string& line);
    void columns(const std::vector<std::string>& names);
    void cell(const std::string& v);
    void cell(double v);
    void cell(long long v);
    void end_row();
    std::string str() const { return out_; }

private:
    std::string out_;
    bool row_open_ = false;
};

std::string read_file(const std::string& path);
// refuses to overwrite an existing file unless force is set
void write_file(const std::string& path, const std::string& text, bool force);

} // namespace floatwave
