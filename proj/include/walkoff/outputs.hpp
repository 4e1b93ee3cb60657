#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "walkoff/analysis.hpp"
#include "walkoff/grid.hpp"

namespace walkoff {

// Locale-independent shortest round-trip formatting of a double.
std::string format_double(double v);

// Locale-independent parse; returns false on malformed or trailing input.
bool parse_double(const std::string& text, double& out);

// Writes bytes to path via a temp file + rename so readers never observe a
// partial file.
void atomic_write(const std::string& path, const std::string& bytes);

std::string read_file(const std::string& path);

using HeaderList = std::vector<std::pair<std::string, std::string>>;

// Real matrix with '#' axis headers (same layout as the histogram format but
// with caller-chosen axis labels), comma-separated rows scanning axis_a.
std::string render_matrix_csv(const RealGrid2D& grid, const std::string& a_label,
                              const std::string& b_label, const HeaderList& extra_headers = {});

// Width-map table: '#' units line, then `z,c,A,B,width,amplitude,residual_rms,flags`.
std::string render_width_table_csv(const std::vector<WidthMapRow>& rows,
                                   const std::string& units_comment);

// Two-column coordinate,value table with '#' metadata lines.
std::string render_profile_csv(const SectionProfile& profile, const HeaderList& extra_headers = {});

// Binary P6 PPM heatmap (rows scan axis_a top to bottom), cubehelix colormap
// over the data range.
std::string render_ppm_heatmap(const RealGrid2D& grid);

// Run manifest: units line, per-file FNV-1a checksums of the bytes actually
// written (sorted by file name), then the config echo. Byte-identical across
// re-runs of the same config.
class Manifest {
public:
    void record(const std::string& name, const std::string& bytes);
    std::string render(const std::string& units, const std::string& config_echo) const;

private:
    std::vector<std::pair<std::string, std::uint64_t>> entries_;
};

// Records the bytes in the manifest under `name` and writes them to dir/name.
void emit(Manifest& manifest, const std::string& dir, const std::string& name,
          const std::string& bytes);

}  // namespace walkoff
