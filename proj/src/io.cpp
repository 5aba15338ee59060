#include "dirac/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dirac::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

Potential potential_from_json(const json& jp, const BoundaryParams& bp) {
    const std::string type = jp.at("type").get<std::string>();
    if (type == "fourier") {
        std::map<int, Complex> coeffs;
        for (const auto& item : jp.at("coeffs")) {
            const int k = item.at("k").get<int>();
            coeffs[k] = Complex(item.at("re").get<double>(), item.at("im").get<double>());
        }
        if (coeffs.empty()) throw MalformedInput("zero potential");
        Potential p = Potential::from_coefficients(coeffs, bp);
        // optional constant vector part (c, c) on top of the band
        if (jp.contains("shift")) p = p.shifted(jp.at("shift").get<double>());
        return p;
    }
    if (type == "grid") {
        const std::size_t n = jp.at("n").get<std::size_t>();
        auto read_component = [&](const char* key) {
            std::vector<Complex> out;
            for (const auto& pair : jp.at(key)) {
                if (!pair.is_array() || pair.size() != 2)
                    throw MalformedInput("grid samples must be [re, im] pairs");
                out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
            }
            if (out.size() != n + 1)
                throw MalformedInput("grid component must hold n+1 samples");
            return out;
        };
        return Potential::from_grid(read_component("v1"), read_component("v2"), bp);
    }
    throw MalformedInput("unknown potential type: " + type);
}

json potential_to_json(const Potential& p) {
    json jp;
    if (p.coefficient_form()) {
        jp["type"] = "fourier";
        json arr = json::array();
        for (const auto& [k, v] : p.band()) {
            arr.push_back({{"k", k}, {"re", v.real()}, {"im", v.imag()}});
        }
        jp["coeffs"] = std::move(arr);
        if (p.constant_shift() != 0.0) jp["shift"] = p.constant_shift();
    } else {
        jp["type"] = "grid";
        const auto [v1, v2] = p.render_grid(p.grid_intervals());
        jp["n"] = p.grid_intervals();
        json a1 = json::array(), a2 = json::array();
        for (const auto& z : v1) a1.push_back({z.real(), z.imag()});
        for (const auto& z : v2) a2.push_back({z.real(), z.imag()});
        jp["v1"] = std::move(a1);
        jp["v2"] = std::move(a2);
    }
    return jp;
}

}  // namespace

OperatorSpec read_spec_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        const double mu = j.at("mu").get<double>();
        const BoundaryParams bp(j.at("alpha").get<double>(), j.at("beta").get<double>());
        return OperatorSpec::make(mu, potential_from_json(j.at("potential"), bp));
    } catch (const json::exception& e) {
        throw MalformedInput(std::string("invalid operator json: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw MalformedInput(std::string("invalid operator: ") + e.what());
    }
}

OperatorSpec read_spec_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_spec_json(ss.str());
}

std::string write_spec_json(const OperatorSpec& spec) {
    json j;
    j["mu"] = spec.mu();
    j["alpha"] = spec.boundary().alpha();
    j["beta"] = spec.boundary().beta();
    j["potential"] = potential_to_json(spec.potential());
    return j.dump(2) + "\n";
}

std::string write_spectrum_csv(const Spectrum& s, const BoundaryParams& bp, double mu) {
    std::ostringstream out;
    out << "# alpha=" << format_double(bp.alpha()) << " beta=" << format_double(bp.beta())
        << " mu=" << format_double(mu) << "\n";
    out << "k_hint,lambda,multiplicity,class\n";
    for (const auto& e : s.entries) {
        out << e.k_hint << ',' << format_double(e.lambda) << ',' << e.multiplicity << ','
            << to_string(e.cls) << "\n";
    }
    return out.str();
}

SpectrumFile read_spectrum_csv(const std::string& text) {
    SpectrumFile out;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string tok;
            while (meta >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq);
                const double value = std::strtod(tok.c_str() + eq + 1, nullptr);
                if (key == "alpha") out.alpha = value;
                if (key == "beta") out.beta = value;
                if (key == "mu") out.mu = value;
            }
            continue;
        }
        if (!header_seen) {
            if (line.rfind("k_hint", 0) != 0)
                throw MalformedInput("spectrum csv must start with the k_hint header");
            header_seen = true;
            continue;
        }
        SpectrumEntry e;
        std::istringstream row(line);
        std::string field;
        try {
            std::getline(row, field, ',');
            e.k_hint = std::stoi(field);
            std::getline(row, field, ',');
            e.lambda = std::stod(field);
            std::getline(row, field, ',');
            e.multiplicity = std::stoi(field);
            std::getline(row, field, ',');
            const auto cls = spectrum_class_from(field);
            if (!cls) throw MalformedInput("unknown class tag: " + field);
            e.cls = *cls;
        } catch (const std::exception&) {
            throw MalformedInput("bad spectrum row at line " + std::to_string(lineno));
        }
        out.spectrum.entries.push_back(e);
    }
    if (!header_seen) throw MalformedInput("spectrum csv has no header");
    return out;
}

SpectrumFile read_spectrum_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_spectrum_csv(ss.str());
}

std::string write_recovered_json(const RecoveredOperator& rec) {
    json j;
    j["mu"] = rec.mu;
    json arr = json::array();
    for (const auto& [k, v] : rec.coefficients) arr.push_back({{"k", k}, {"v", v}});
    j["coeffs"] = std::move(arr);
    j["phase_ambiguous"] = rec.phase_ambiguous;
    json res = json::object();
    for (const auto& [key, v] : rec.residuals) res[key] = v;
    j["residuals"] = std::move(res);
    j["warnings"] = rec.warnings;
    return j.dump(2) + "\n";
}

}  // namespace dirac::io
