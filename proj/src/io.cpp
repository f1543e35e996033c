#include "ccd/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace ccd {
namespace {

double parse_double(const std::string& token, const std::string& path, std::size_t line) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw IoError(path + ": line " + std::to_string(line) + ": bad number '" + token + "'");
    return value;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string format_sig(double value, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

GridFunction read_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open grid file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    {
        const std::vector<std::string> header = split_csv(line);
        if (header.size() != 2 || header[0] != "x" || header[1] != "u")
            throw IoError(path + ": expected header 'x,u'");
    }

    std::vector<double> xs, us;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv(line);
        if (cells.size() != 2)
            throw IoError(path + ": line " + std::to_string(lineno) + ": expected 2 columns");
        xs.push_back(parse_double(cells[0], path, lineno));
        us.push_back(parse_double(cells[1], path, lineno));
    }
    if (xs.size() < 5) throw IoError(path + ": need at least 5 rows");

    const double h = xs[1] - xs[0];
    if (!(h > 0.0)) throw IoError(path + ": x must be strictly increasing");
    const double span = xs.back() - xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double step = xs[i] - xs[i - 1];
        if (!(step > 0.0)) throw IoError(path + ": x must be strictly increasing");
        if (std::abs(step - h) > 1e-9 * std::max(std::abs(span), std::abs(h)))
            throw IoError(path + ": non-uniform spacing at row " + std::to_string(i + 1));
    }

    GridFunction g;
    g.x0 = xs[0];
    g.h = h;
    g.values = std::move(us);
    return g;
}

void write_derivatives_csv(std::ostream& out, const GridFunction& g, const DerivativePair& d) {
    out << "x,u,du,d2u\n";
    for (std::size_t i = 0; i < g.size(); ++i)
        out << format_sig(g.x(i), 15) << ',' << format_sig(g.values[i], 15) << ','
            << format_sig(d.first[i], 15) << ',' << format_sig(d.second[i], 15) << '\n';
}

void write_dispersion_csv(std::ostream& out, const std::vector<DispersionRow>& rows) {
    out << "w,re_wp,im_wp,re_wpp2,im_wpp2,exact_wp,exact_wpp2\n";
    for (const DispersionRow& r : rows)
        out << format_sig(r.w, 15) << ',' << format_sig(r.re_wp, 15) << ','
            << format_sig(r.im_wp, 15) << ',' << format_sig(r.re_wpp2, 15) << ','
            << format_sig(r.im_wpp2, 15) << ',' << format_sig(r.exact_wp, 15) << ','
            << format_sig(r.exact_wpp2, 15) << '\n';
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
    out << "n,h,err_first,err_second\n";
    for (const ConvergenceRow& r : rows)
        out << r.n << ',' << format_sig(r.h, 15) << ',' << format_sig(r.err_first, 15) << ','
            << format_sig(r.err_second, 15) << '\n';
}

std::string weights_json(const WeightsFile& wf) {
    const PrefactoredWeights& w = wf.weights;
    std::ostringstream out;
    auto num = [](double v) { return format_sig(v, 17); };
    out << "{\n"
        << "  \"schema\": \"prefactored-weights/1\",\n"
        << "  \"target\": \"" << wf.target << "\",\n"
        << "  \"direction\": \""
        << (w.direction == Direction::forward ? "forward" : "backward") << "\",\n"
        << "  \"betaI\": " << num(w.betaI) << ",\n"
        << "  \"thetaI\": " << num(w.thetaI) << ",\n"
        << "  \"aI\": " << num(w.aI) << ",\n"
        << "  \"bI\": " << num(w.bI) << ",\n"
        << "  \"cI\": " << num(w.cI) << ",\n"
        << "  \"betaII\": " << num(w.betaII) << ",\n"
        << "  \"thetaII\": " << num(w.thetaII) << ",\n"
        << "  \"aII\": " << num(w.aII) << ",\n"
        << "  \"bII\": " << num(w.bII) << ",\n"
        << "  \"cII\": " << num(w.cII) << ",\n"
        << "  \"residual_norm\": " << num(wf.residual_norm) << ",\n"
        << "  \"system\": \"" << wf.system << "\"\n"
        << "}\n";
    return out.str();
}

void write_weights_json(const std::string& path, const WeightsFile& wf) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write weights file '" + path + "'");
    out << weights_json(wf);
}

WeightsFile read_weights_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open weights file '" + path + "'");

    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": invalid JSON: " + e.what());
    }

    try {
        if (j.at("schema").get<std::string>() != "prefactored-weights/1")
            throw IoError(path + ": unsupported schema");
        WeightsFile wf;
        wf.target = j.at("target").get<std::string>();
        wf.system = j.at("system").get<std::string>();
        wf.residual_norm = j.at("residual_norm").get<double>();
        const std::string dir = j.at("direction").get<std::string>();
        if (dir != "forward" && dir != "backward")
            throw IoError(path + ": bad direction '" + dir + "'");
        wf.weights.direction = dir == "forward" ? Direction::forward : Direction::backward;
        wf.weights.betaI = j.at("betaI").get<double>();
        wf.weights.thetaI = j.at("thetaI").get<double>();
        wf.weights.aI = j.at("aI").get<double>();
        wf.weights.bI = j.at("bI").get<double>();
        wf.weights.cI = j.at("cI").get<double>();
        wf.weights.betaII = j.at("betaII").get<double>();
        wf.weights.thetaII = j.at("thetaII").get<double>();
        wf.weights.aII = j.at("aII").get<double>();
        wf.weights.bII = j.at("bII").get<double>();
        wf.weights.cII = j.at("cII").get<double>();
        return wf;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": missing or malformed field: " + e.what());
    }
}

}  // namespace ccd
