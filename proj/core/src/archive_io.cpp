#include <qd/archive_io.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qd {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

void write_row_tail(std::ofstream& out, const Individual& ind) {
    out << ',' << num(ind.fitness);
    for (double v : ind.descriptor) out << ',' << num(v);
    for (double v : ind.genotype) out << ',' << num(v);
    out << '\n';
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

}  // namespace

void export_archive_csv(const Container& container, const std::string& path) {
    auto out = open_out(path);

    if (const auto* grid = dynamic_cast<const GridContainer*>(&container)) {
        const auto& spec = grid->spec();
        out << "cell_id";
        for (std::size_t j = 0; j < spec.dim(); ++j) out << ",cell_" << j;
        out << ",fitness";
        for (std::size_t j = 0; j < spec.dim(); ++j) out << ",desc_" << j;
        std::size_t genotype_dim = 0;
        if (!grid->cells().empty()) genotype_dim = grid->cells().begin()->second.genotype.size();
        for (std::size_t j = 0; j < genotype_dim; ++j) out << ",genotype_" << j;
        out << '\n';
        for (const auto& [linear, ind] : grid->cells()) {
            out << linear;
            for (int c : grid_delinearize(linear, spec)) out << ',' << c;
            write_row_tail(out, ind);
        }
    } else if (const auto* cvt = dynamic_cast<const CvtContainer*>(&container)) {
        const std::size_t d = cvt->centroids().dim();
        out << "cell_id";
        for (std::size_t j = 0; j < d; ++j) out << ",centroid_" << j;
        out << ",fitness";
        for (std::size_t j = 0; j < d; ++j) out << ",desc_" << j;
        std::size_t genotype_dim = 0;
        if (!cvt->cells().empty()) genotype_dim = cvt->cells().begin()->second.genotype.size();
        for (std::size_t j = 0; j < genotype_dim; ++j) out << ",genotype_" << j;
        out << '\n';
        for (const auto& [id, ind] : cvt->cells()) {
            out << id;
            for (double c : cvt->centroids().centroids[static_cast<std::size_t>(id)])
                out << ',' << num(c);
            write_row_tail(out, ind);
        }
    } else if (const auto* dist = dynamic_cast<const DistanceArchive*>(&container)) {
        out << "cell_id,fitness";
        const std::size_t dd = dist->descriptor_bounds().size();
        for (std::size_t j = 0; j < dd; ++j) out << ",desc_" << j;
        std::size_t genotype_dim = 0;
        if (!dist->entries().empty()) genotype_dim = dist->entries().front().genotype.size();
        for (std::size_t j = 0; j < genotype_dim; ++j) out << ",genotype_" << j;
        out << '\n';
        for (std::size_t i = 0; i < dist->entries().size(); ++i) {
            out << i;
            write_row_tail(out, dist->entries()[i]);
        }
    } else if (const auto* deep = dynamic_cast<const DeepGridContainer*>(&container)) {
        const auto& spec = deep->spec();
        out << "cell_id";
        for (std::size_t j = 0; j < spec.dim(); ++j) out << ",cell_" << j;
        out << ",is_cell_best,fitness";
        for (std::size_t j = 0; j < spec.dim(); ++j) out << ",desc_" << j;
        std::size_t genotype_dim = 0;
        if (!deep->cells().empty()) genotype_dim = deep->cells().begin()->second.front().genotype.size();
        for (std::size_t j = 0; j < genotype_dim; ++j) out << ",genotype_" << j;
        out << '\n';
        for (const auto& [linear, cell] : deep->cells()) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < cell.size(); ++i)
                if (cell[i].fitness > cell[best].fitness) best = i;
            for (std::size_t i = 0; i < cell.size(); ++i) {
                out << linear;
                for (int c : grid_delinearize(linear, spec)) out << ',' << c;
                out << ',' << (i == best ? 1 : 0) << ',' << num(cell[i].fitness);
                for (double v : cell[i].descriptor) out << ',' << num(v);
                for (double v : cell[i].genotype) out << ',' << num(v);
                out << '\n';
            }
        }
    } else {
        throw std::invalid_argument("export_archive_csv: unknown container type");
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

ArchiveCsv read_archive_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    ArchiveCsv csv;
    csv.header = split_csv_line(line);
    if (csv.header.empty() || csv.header.front() != "cell_id")
        throw std::runtime_error(path + ": first column must be cell_id");

    std::size_t pos = 1;
    auto starts_with = [&](const std::string& prefix) {
        return pos < csv.header.size() && csv.header[pos].rfind(prefix, 0) == 0;
    };
    while (starts_with("cell_") || starts_with("centroid_")) {
        ++csv.coord_dim;
        ++pos;
    }
    if (starts_with("is_cell_best")) {
        csv.has_cell_best = true;
        ++pos;
    }
    if (!(pos < csv.header.size() && csv.header[pos] == "fitness"))
        throw std::runtime_error(path + ": expected column 'fitness', found '" +
                                 (pos < csv.header.size() ? csv.header[pos] : "<end>") + "'");
    ++pos;
    while (starts_with("desc_")) {
        ++csv.descriptor_dim;
        ++pos;
    }
    while (starts_with("genotype_")) {
        ++csv.genotype_dim;
        ++pos;
    }
    if (pos != csv.header.size())
        throw std::runtime_error(path + ": unexpected column '" + csv.header[pos] + "'");

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != csv.header.size())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(csv.header.size()) + " fields (column '" +
                                     csv.header[std::min(fields.size(), csv.header.size() - 1)] +
                                     "'), found " + std::to_string(fields.size()));
        ArchiveRow row;
        std::size_t f = 0;
        row.cell_id = std::stoull(fields[f++]);
        for (std::size_t j = 0; j < csv.coord_dim; ++j) row.coords.push_back(std::stod(fields[f++]));
        if (csv.has_cell_best) row.is_cell_best = fields[f++] != "0";
        row.fitness = std::stod(fields[f++]);
        for (std::size_t j = 0; j < csv.descriptor_dim; ++j)
            row.descriptor.push_back(std::stod(fields[f++]));
        for (std::size_t j = 0; j < csv.genotype_dim; ++j)
            row.genotype.push_back(std::stod(fields[f++]));
        csv.rows.push_back(std::move(row));
    }
    return csv;
}

void export_metrics_csv(const std::vector<MetricsRecord>& log, const std::string& path) {
    auto out = open_out(path);
    out << "iteration,evaluations,coverage,entries,qd_score,qd_score_offset,max_fitness,mean_fitness,knn_density\n";
    for (const auto& r : log) {
        out << r.iteration << ',' << r.evaluations << ',';
        if (r.coverage) out << num(*r.coverage);
        out << ',' << r.entries << ',' << num(r.qd_score) << ',' << num(r.qd_score_offset) << ','
            << num(r.max_fitness) << ',' << num(r.mean_fitness) << ',';
        if (r.knn_density) out << num(*r.knn_density);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

namespace {

constexpr int kSentinel[3] = {0, 0, 160};

void render_cells(const std::map<std::pair<int, int>, double>& cells, int nx, int ny,
                  const std::string& path, int cellpx) {
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -std::numeric_limits<double>::infinity();
    for (const auto& [cell, f] : cells) {
        fmin = std::min(fmin, f);
        fmax = std::max(fmax, f);
    }

    auto out = open_out(path);
    out << "P3\n" << nx * cellpx << ' ' << ny * cellpx << "\n255\n";
    for (int py = 0; py < ny * cellpx; ++py) {
        const int cy = ny - 1 - py / cellpx;  // top pixel row = highest bin of dim 1
        for (int px = 0; px < nx * cellpx; ++px) {
            const int cx = px / cellpx;
            const auto it = cells.find({cx, cy});
            if (px) out << ' ';
            if (it == cells.end()) {
                out << kSentinel[0] << ' ' << kSentinel[1] << ' ' << kSentinel[2];
            } else {
                const int g = fmax > fmin
                                  ? static_cast<int>(std::lround(255.0 * (it->second - fmin) / (fmax - fmin)))
                                  : 255;
                out << g << ' ' << g << ' ' << g;
            }
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

void render_heatmap(const GridContainer& container, const std::string& path, int cellpx) {
    const auto& spec = container.spec();
    if (spec.dim() != 2)
        throw std::invalid_argument("render_heatmap: needs a 2-D grid container");
    std::map<std::pair<int, int>, double> cells;
    for (const auto& [linear, ind] : container.cells()) {
        const auto cell = grid_delinearize(linear, spec);
        cells[{cell[0], cell[1]}] = ind.fitness;
    }
    render_cells(cells, spec.bins[0], spec.bins[1], path, cellpx);
}

void render_heatmap_from_rows(const std::vector<ArchiveRow>& rows, const std::vector<int>& bins,
                              const std::string& path, int cellpx) {
    if (bins.size() != 2) throw std::invalid_argument("render_heatmap_from_rows: need 2 bin counts");
    std::map<std::pair<int, int>, double> cells;
    for (const ArchiveRow& row : rows) {
        if (!row.is_cell_best) continue;
        if (row.coords.size() != 2)
            throw std::invalid_argument("render_heatmap_from_rows: rows lack 2-D cell coordinates");
        const int cx = static_cast<int>(row.coords[0]);
        const int cy = static_cast<int>(row.coords[1]);
        if (cx < 0 || cx >= bins[0] || cy < 0 || cy >= bins[1])
            throw std::invalid_argument("render_heatmap_from_rows: cell coordinate outside the grid");
        cells[{cx, cy}] = row.fitness;
    }
    render_cells(cells, bins[0], bins[1], path, cellpx);
}

}  // namespace qd
