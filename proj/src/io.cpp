#include "squeeze/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace squeeze::io {

namespace {

std::string opt(const std::optional<double> &v) {
    return v ? format_double(*v) : std::string{};
}

std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string &s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    SQUEEZE_REQUIRE(ec == std::errc{} && ptr == s.data() + s.size(),
                    "malformed number in CSV: '" + s + "'");
    return v;
}

std::optional<double> parse_opt(const std::string &s) {
    if (s.empty()) {
        return std::nullopt;
    }
    return parse_double(s);
}

nlohmann::json opt_json(const std::optional<double> &v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, ptr};
}

void write_file_atomic(const std::filesystem::path &path, const std::string &content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw Error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sweep_csv_header() {
    return "n_atoms,contrast,q_tilde,epsilon,xi2,xi2_corrected,gain_db,"
           "omega_over_chi,converged,parameters\n";
}

std::string sweep_csv_row(const SweepRow &row) {
    std::string params;
    for (std::size_t i = 0; i < row.parameters.size(); ++i) {
        if (i > 0) {
            params += ' ';
        }
        params += format_double(row.parameters[i]);
    }
    std::string line = std::to_string(row.n_atoms);
    for (const std::string &f :
         {opt(row.contrast), opt(row.q_tilde), opt(row.epsilon),
          format_double(row.xi2), format_double(row.xi2_corrected),
          format_double(row.gain_db), opt(row.omega_over_chi),
          std::string(row.converged ? "1" : "0"), params}) {
        line += ',';
        line += f;
    }
    line += '\n';
    return line;
}

std::string sweep_csv(const SweepTable &table) {
    std::string out = sweep_csv_header();
    for (const auto &row : table.rows) {
        out += sweep_csv_row(row);
    }
    return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    SQUEEZE_REQUIRE(std::getline(in, line), "empty sweep CSV");
    SQUEEZE_REQUIRE(line + "\n" == sweep_csv_header() ||
                        line + "\r\n" == sweep_csv_header(),
                    "unexpected sweep CSV header");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto f = split(line, ',');
        SQUEEZE_REQUIRE(f.size() == 10, "sweep CSV row has wrong field count");
        SweepRow row;
        row.n_atoms = static_cast<int>(parse_double(f[0]));
        row.contrast = parse_opt(f[1]);
        row.q_tilde = parse_opt(f[2]);
        row.epsilon = parse_opt(f[3]);
        row.xi2 = parse_double(f[4]);
        row.xi2_corrected = parse_double(f[5]);
        row.gain_db = parse_double(f[6]);
        row.omega_over_chi = parse_opt(f[7]);
        SQUEEZE_REQUIRE(f[8] == "0" || f[8] == "1", "bad converged flag in CSV");
        row.converged = f[8] == "1";
        if (!f[9].empty()) {
            for (const auto &p : split(f[9], ' ')) {
                row.parameters.push_back(parse_double(p));
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string husimi_csv(const HusimiGrid &grid) {
    std::string out = "theta,phi,weight,value\n";
    out.reserve(out.size() + grid.values.size() * 80);
    for (int i = 0; i < grid.n_theta; ++i) {
        const std::string th = format_double(grid.theta[static_cast<std::size_t>(i)]);
        const std::string w = format_double(grid.weight(i));
        for (int j = 0; j < grid.n_phi; ++j) {
            out += th;
            out += ',';
            out += format_double(grid.phi[static_cast<std::size_t>(j)]);
            out += ',';
            out += w;
            out += ',';
            out += format_double(grid.value(i, j));
            out += '\n';
        }
    }
    return out;
}

nlohmann::json to_json(const SweepRow &row) {
    return {{"n_atoms", row.n_atoms},
            {"contrast", opt_json(row.contrast)},
            {"q_tilde", opt_json(row.q_tilde)},
            {"epsilon", opt_json(row.epsilon)},
            {"xi2", row.xi2},
            {"xi2_corrected", row.xi2_corrected},
            {"gain_db", row.gain_db},
            {"omega_over_chi", opt_json(row.omega_over_chi)},
            {"converged", row.converged},
            {"parameters", row.parameters}};
}

nlohmann::json to_json(const SweepTable &table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &r : table.rows) {
        rows.push_back(to_json(r));
    }
    return {{"kind", table.kind},
            {"gamma", table.gamma},
            {"n_pulses", table.n_pulses},
            {"seed", table.seed},
            {"rows", std::move(rows)}};
}

nlohmann::json to_json(const PowerLawFit &fit) {
    return {{"a", fit.a}, {"b", fit.b}, {"r_squared", fit.r_squared}};
}

nlohmann::json to_json(const PulseSequence &sequence) {
    return {{"n_pulses", sequence.n_pulses()},
            {"shears", sequence.shears()},
            {"angles", sequence.angles()},
            {"total_shear", sequence.total_shear()}};
}

} // namespace squeeze::io
