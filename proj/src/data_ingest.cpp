#include "gavs/data_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gavs {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\"");
    auto e = s.find_last_not_of(" \t\r\"");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, delim)) out.push_back(strip(tok));
    if (!line.empty() && line.back() == delim) out.push_back("");
    return out;
}

}  // namespace

double wine_response(double quality) {
    if (quality < 0 || quality > 10 || quality != std::floor(quality))
        throw std::invalid_argument("wine quality score must be an integer 0..10");
    return quality >= 7.0 ? 1.0 : 0.0;
}

double ctg_response(const std::string& label, bool suspect_is_abnormal) {
    const std::string l = lower(strip(label));
    if (l == "normal" || l == "1" || l == "1.0") return 0.0;
    if (l == "suspect" || l == "2" || l == "2.0")
        return suspect_is_abnormal ? 1.0 : 0.0;
    if (l == "pathologic" || l == "pathological" || l == "3" || l == "3.0")
        return 1.0;
    throw std::invalid_argument("unknown fetal-state class '" + label + "'");
}

Dataset load_delimited(const IngestSpec& spec) {
    std::ifstream in(spec.path);
    if (!in) throw std::runtime_error("cannot open file: " + spec.path);

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(spec.path + ": empty file (header required)");
    const auto header = split(line, spec.delimiter);

    std::string response_col = spec.response_column;
    if (response_col.empty()) {
        if (spec.transform == Transform::wine_white) response_col = "quality";
        if (spec.transform == Transform::ctg_binary) response_col = "NSP";
    }
    if (response_col.empty())
        throw std::runtime_error("no response column specified");

    std::vector<std::string> drops = spec.drop_columns;
    if (spec.transform == Transform::ctg_binary)
        for (const char* c : {"Mean", "Median", "Max"}) drops.push_back(c);

    int response_idx = -1;
    std::vector<int> keep;  // predictor column indices
    std::vector<std::string> names;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (lower(header[i]) == lower(response_col)) {
            response_idx = static_cast<int>(i);
            continue;
        }
        bool dropped = false;
        for (const auto& d : drops)
            if (lower(header[i]) == lower(d)) dropped = true;
        if (!dropped) {
            keep.push_back(static_cast<int>(i));
            names.push_back(header[i]);
        }
    }
    if (response_idx < 0)
        throw std::runtime_error(spec.path + ": response column '" +
                                 response_col + "' not found");
    for (const auto& d : drops) {
        bool found = false;
        for (const auto& h : header)
            if (lower(h) == lower(d)) found = true;
        if (!found)
            throw std::runtime_error(spec.path + ": drop column '" + d +
                                     "' not found");
    }

    std::vector<std::vector<double>> rows;
    std::vector<double> ys;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (strip(line).empty()) continue;
        const auto fields = split(line, spec.delimiter);
        if (fields.size() != header.size())
            throw std::runtime_error(spec.path + ":" + std::to_string(lineno) +
                                     ": expected " +
                                     std::to_string(header.size()) +
                                     " fields, got " +
                                     std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(keep.size());
        for (int idx : keep) {
            try {
                std::size_t pos = 0;
                const double v = std::stod(fields[idx], &pos);
                if (pos != fields[idx].size()) throw std::invalid_argument("");
                row.push_back(v);
            } catch (const std::exception&) {
                throw std::runtime_error(
                    spec.path + ":" + std::to_string(lineno) +
                    ": cannot parse value '" + fields[idx] + "' in column '" +
                    header[idx] + "'");
            }
        }
        double y = 0.0;
        const std::string& raw = fields[response_idx];
        try {
            switch (spec.transform) {
                case Transform::none:
                    y = std::stod(raw);
                    if (y != 0.0 && y != 1.0)
                        throw std::invalid_argument("response must be 0/1");
                    break;
                case Transform::wine_white:
                    y = wine_response(std::stod(raw));
                    break;
                case Transform::ctg_binary:
                    y = ctg_response(raw, spec.suspect_is_abnormal);
                    break;
            }
        } catch (const std::exception& e) {
            throw std::runtime_error(spec.path + ":" + std::to_string(lineno) +
                                     ": bad response '" + raw + "': " +
                                     e.what());
        }
        rows.push_back(std::move(row));
        ys.push_back(y);
    }
    if (rows.empty()) throw std::runtime_error(spec.path + ": no data rows");

    Dataset ds;
    ds.mains.resize(rows.size(), keep.size());
    ds.response.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < keep.size(); ++c)
            ds.mains(r, c) = rows[r][c];
        ds.response[r] = ys[r];
    }
    ds.column_names = names;
    const double ymean = ds.response.mean();
    if (ymean <= 0.0 || ymean >= 1.0)
        throw std::runtime_error(spec.path +
                                 ": response is constant after transform");
    if (spec.standardize) ds.standardize();
    return ds;
}

void save_dataset(const Dataset& dataset, const std::string& path,
                  char delimiter) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out.precision(17);
    for (int c = 0; c < dataset.n_main(); ++c) {
        const std::string name = c < static_cast<int>(dataset.column_names.size())
                                     ? dataset.column_names[c]
                                     : "x" + std::to_string(c + 1);
        out << name << delimiter;
    }
    out << "y\n";
    for (int r = 0; r < dataset.n_rows(); ++r) {
        for (int c = 0; c < dataset.n_main(); ++c)
            out << dataset.mains(r, c) << delimiter;
        out << dataset.response[r] << "\n";
    }
}

void save_truth(const std::vector<TermId>& terms, const PredictorSpace& space,
                const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    for (TermId t : terms) out << term_name(t, space) << "\n";
}

std::vector<TermId> load_truth(const std::string& path,
                               const PredictorSpace& space) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<TermId> out;
    std::string line;
    auto parse_x = [&](const std::string& s) {
        if (s.size() < 2 || s[0] != 'x')
            throw std::runtime_error(path + ": bad term '" + s + "'");
        return std::stoi(s.substr(1));
    };
    while (std::getline(in, line)) {
        line = strip(line);
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            out.push_back(
                encode_term(TermDescriptor::main(parse_x(line)), space));
        } else {
            const int i = parse_x(line.substr(0, colon));
            const int j = parse_x(line.substr(colon + 1));
            out.push_back(encode_term(
                TermDescriptor::interaction(std::min(i, j), std::max(i, j)),
                space));
        }
    }
    return out;
}

}  // namespace gavs
