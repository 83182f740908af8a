#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <qd/containers.hpp>
#include <qd/metrics.hpp>

namespace qd {

/// One archive CSV row in container-independent form.
struct ArchiveRow {
    std::uint64_t cell_id = 0;
    std::vector<double> coords;  // grid: cell tuple; CVT: centroid; distance: none
    bool is_cell_best = true;    // deep-grid only; true elsewhere
    double fitness = 0.0;
    Descriptor descriptor;
    Genotype genotype;
};

struct ArchiveCsv {
    std::vector<std::string> header;
    std::vector<ArchiveRow> rows;
    std::size_t coord_dim = 0;
    std::size_t descriptor_dim = 0;
    std::size_t genotype_dim = 0;
    bool has_cell_best = false;
};

/// Write the archive as CSV, one row per elite (deep grid: one row per
/// stored individual plus an is_cell_best column). Numbers use 17
/// significant digits so re-import reproduces the values bit-exactly.
void export_archive_csv(const Container& container, const std::string& path);

/// Parse an archive CSV produced by export_archive_csv. Throws with the
/// offending column name on schema mismatches.
ArchiveCsv read_archive_csv(const std::string& path);

/// Write the metrics log (one row per cadence record, ordered by iteration).
void export_metrics_csv(const std::vector<MetricsRecord>& log, const std::string& path);

/// Render a 2-D grid archive as a text PPM (P3): one cellpx x cellpx block
/// per cell, fitness mapped linearly onto a grayscale ramp between the
/// archive's min and max elite fitness, empty cells in the sentinel color.
void render_heatmap(const GridContainer& container, const std::string& path, int cellpx = 8);

/// Re-render a heatmap from exported rows alone; byte-identical to
/// render_heatmap for the same archive content.
void render_heatmap_from_rows(const std::vector<ArchiveRow>& rows, const std::vector<int>& bins,
                              const std::string& path, int cellpx = 8);

}  // namespace qd
