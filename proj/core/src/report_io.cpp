#include "degenheat/report_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "degenheat/errors.hpp"

namespace degenheat {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    if (s.empty()) throw config_error("empty numeric field");
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + s.size())
        throw config_error("malformed numeric field: '" + s + "'");
    return v;
}

namespace {

void write_text(const fs::path& file, const std::string& body) {
    const fs::path dir = file.parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("cannot open " + file.string() + " for writing");
    out.write(body.data(), std::streamsize(body.size()));
    if (!out) throw config_error("failed while writing " + file.string());
}

std::string read_text(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw config_error("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

// Rows of a CSV body after an exact header match; a trailing newline is
// required, blank lines are not.
std::vector<std::vector<std::string>> parse_rows(const fs::path& file,
                                                 const std::string& header,
                                                 std::size_t columns) {
    const std::string body = read_text(file);
    if (body.rfind(header + "\n", 0) != 0)
        throw config_error(file.string() + ": expected header '" + header + "'");
    std::vector<std::vector<std::string>> rows;
    std::size_t pos = header.size() + 1;
    while (pos < body.size()) {
        const std::size_t nl = body.find('\n', pos);
        if (nl == std::string::npos)
            throw config_error(file.string() + ": missing final newline");
        auto fields = split_fields(body.substr(pos, nl - pos));
        if (fields.size() != columns)
            throw config_error(file.string() + ": expected " +
                               std::to_string(columns) + " fields per row");
        rows.push_back(std::move(fields));
        pos = nl + 1;
    }
    return rows;
}

bool parse_flag(const fs::path& file, const std::string& s) {
    if (s == "1") return true;
    if (s == "0") return false;
    throw config_error(file.string() + ": flag field must be 0 or 1");
}

}  // namespace

void write_trajectory_csv(const fs::path& file, const Grid& g,
                          const Trajectory& tr) {
    if (tr.layers.empty())
        throw config_error("write_trajectory_csv: no layers");
    for (const Field& layer : tr.layers)
        if (layer.size() != g.size())
            throw config_error(
                "write_trajectory_csv: layer length does not match the grid");
    std::string body = g.dim == 1 ? "t,x,u\n" : "t,x,y,u\n";
    for (std::size_t k = 0; k < tr.layers.size(); ++k) {
        const std::string t = format_double(tr.time.time(int(k)));
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto c = g.coords(i);
            body += t;
            body += ',';
            body += format_double(c[0]);
            body += ',';
            if (g.dim == 2) {
                body += format_double(c[1]);
                body += ',';
            }
            body += format_double(tr.layers[k][i]);
            body += '\n';
        }
    }
    write_text(file, body);
}

void write_energy_csv(const fs::path& file, const EnergyReport& r) {
    std::string body = "name,lhs,rhs,ratio,satisfied\n";
    for (const EnergyRecord& rec : r.records) {
        body += rec.name;
        body += ',';
        body += format_double(rec.lhs);
        body += ',';
        body += format_double(rec.rhs);
        body += ',';
        body += format_double(rec.ratio);
        body += ',';
        body += rec.satisfied ? '1' : '0';
        body += '\n';
    }
    write_text(file, body);
}

void write_sweep_csv(const fs::path& file, const SweepReport& r) {
    std::string body = "lambda,err_l2h1,err_supl2,pen_mass\n";
    for (const SweepRecord& rec : r.records) {
        body += format_double(rec.lambda);
        body += ',';
        body += format_double(rec.err_l2h1);
        body += ',';
        body += format_double(rec.err_supl2);
        body += ',';
        body += format_double(rec.pen_mass);
        body += '\n';
    }
    write_text(file, body);
}

void write_decay_csv(const fs::path& file, const DecayReport& r) {
    std::string body = "lambda,I_eps,W,scaled,slope_fit,residual\n";
    const std::string slope = format_double(r.slope);
    const std::string residual = format_double(r.residual);
    for (const DecayRecord& rec : r.records) {
        body += format_double(rec.lambda);
        body += ',';
        body += format_double(rec.I_eps);
        body += ',';
        body += format_double(rec.W);
        body += ',';
        body += format_double(rec.scaled);
        body += ',';
        body += slope;
        body += ',';
        body += residual;
        body += '\n';
    }
    write_text(file, body);
}

void write_stationary_csv(const fs::path& file, const Grid& g,
                          const Field& penalized, const Field& limit) {
    if (penalized.size() != g.size() || limit.size() != g.size())
        throw config_error(
            "write_stationary_csv: field length does not match the grid");
    std::string body =
        g.dim == 1 ? "x,u_penalized,u_limit\n" : "x,y,u_penalized,u_limit\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto c = g.coords(i);
        body += format_double(c[0]);
        body += ',';
        if (g.dim == 2) {
            body += format_double(c[1]);
            body += ',';
        }
        body += format_double(penalized[i]);
        body += ',';
        body += format_double(limit[i]);
        body += '\n';
    }
    write_text(file, body);
}

TrajectoryCsv parse_trajectory_csv(const fs::path& file) {
    const std::string head = read_text(file).substr(0, 8);
    const bool planar = head.rfind("t,x,y,u", 0) == 0;
    const auto rows = parse_rows(file, planar ? "t,x,y,u" : "t,x,u",
                                 planar ? 4 : 3);
    TrajectoryCsv out;
    for (const auto& row : rows) {
        out.t.push_back(parse_double(row[0]));
        out.x.push_back(parse_double(row[1]));
        if (planar) out.y.push_back(parse_double(row[2]));
        out.u.push_back(parse_double(row.back()));
    }
    return out;
}

EnergyReport parse_energy_csv(const fs::path& file) {
    const auto rows = parse_rows(file, "name,lhs,rhs,ratio,satisfied", 5);
    EnergyReport rep;
    for (const auto& row : rows) {
        EnergyRecord rec;
        rec.name = row[0];
        rec.lhs = parse_double(row[1]);
        rec.rhs = parse_double(row[2]);
        rec.ratio = parse_double(row[3]);
        rec.satisfied = parse_flag(file, row[4]);
        rep.records.push_back(std::move(rec));
    }
    return rep;
}

SweepReport parse_sweep_csv(const fs::path& file) {
    const auto rows = parse_rows(file, "lambda,err_l2h1,err_supl2,pen_mass", 4);
    SweepReport rep;
    for (const auto& row : rows) {
        SweepRecord rec;
        rec.lambda = parse_double(row[0]);
        rec.err_l2h1 = parse_double(row[1]);
        rec.err_supl2 = parse_double(row[2]);
        rec.pen_mass = parse_double(row[3]);
        rep.records.push_back(rec);
    }
    int soft = 0;
    bool hard = false;
    for (std::size_t j = 1; j < rep.records.size(); ++j) {
        const double prev = rep.records[j - 1].err_l2h1;
        const double cur = rep.records[j].err_l2h1;
        if (cur <= prev) continue;
        if (cur <= 1.01 * prev)
            ++soft;
        else
            hard = true;
    }
    rep.err_monotone = !hard && soft <= 1;
    return rep;
}

DecayReport parse_decay_csv(const fs::path& file) {
    const auto rows =
        parse_rows(file, "lambda,I_eps,W,scaled,slope_fit,residual", 6);
    DecayReport rep;
    for (const auto& row : rows) {
        DecayRecord rec;
        rec.lambda = parse_double(row[0]);
        rec.I_eps = parse_double(row[1]);
        rec.W = parse_double(row[2]);
        rec.scaled = parse_double(row[3]);
        rep.records.push_back(rec);
        rep.slope = parse_double(row[4]);
        rep.residual = parse_double(row[5]);
    }
    rep.intercept = 0.0;  // not part of the file format
    if (!rep.records.empty()) {
        double w_max = -std::numeric_limits<double>::infinity();
        for (const DecayRecord& rec : rep.records)
            w_max = std::max(w_max, rec.W);
        rep.weighted_growth = w_max / rep.records.front().W;
        rep.weighted_bounded = rep.weighted_growth <= 50.0;
    }
    return rep;
}

StationaryCsv parse_stationary_csv(const fs::path& file) {
    const std::string head = read_text(file).substr(0, 4);
    const bool planar = head.rfind("x,y,", 0) == 0;
    const auto rows =
        parse_rows(file, planar ? "x,y,u_penalized,u_limit" : "x,u_penalized,u_limit",
                   planar ? 4 : 3);
    StationaryCsv out;
    for (const auto& row : rows) {
        out.x.push_back(parse_double(row[0]));
        if (planar) out.y.push_back(parse_double(row[1]));
        out.u_penalized.push_back(parse_double(row[row.size() - 2]));
        out.u_limit.push_back(parse_double(row.back()));
    }
    return out;
}

}  // namespace degenheat
