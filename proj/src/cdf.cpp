#include "cdf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "detector.hpp"

namespace gisi {

double CdfModel::quantile(double p) const {
    if (sorted_samples.empty()) throw std::logic_error("CdfModel::quantile: empty model");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("CdfModel::quantile: p must be in (0,1)");
    const std::size_t n = sorted_samples.size();
    const double h = p * (static_cast<double>(n) + 1.0) - 1.0;  // order-statistic coordinate
    if (h <= 0.0) return sorted_samples.front();
    if (h >= static_cast<double>(n - 1)) return sorted_samples.back();
    const std::size_t k = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(k);
    return sorted_samples[k] + frac * (sorted_samples[k + 1] - sorted_samples[k]);
}

CdfModel build_cdf_model(const CodeSpec& code, const ChannelModel& model,
                         const BurstDictionary& dict, std::uint64_t trials,
                         std::uint64_t seed, const std::string& code_id) {
    if (trials < 1000) throw std::invalid_argument("build_cdf_model: needs at least 1000 trials");
    if (dict.n != code.n || dict.l != model.order())
        throw std::invalid_argument("build_cdf_model: dictionary mismatch");

    CdfModel cdf;
    cdf.trials = trials;
    cdf.seed = seed;
    cdf.code_id = code_id;
    cdf.taps = model.taps;
    cdf.sigma2 = model.noise_var;
    cdf.g = dict.g;
    cdf.sorted_samples.reserve(trials * dict.size());

    RelWorkspace ws;
    BitBlock msg(static_cast<std::size_t>(code.k));
    for (std::uint64_t t = 0; t < trials; ++t) {
        GaussianStream stream(mix_seed(seed, 0xCDFu, t));
        std::uint64_t word = 0;
        for (int i = 0; i < code.k; ++i) {
            if (i % 64 == 0) word = stream.next_u64();
            msg[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((word >> (i % 64)) & 1);
        }
        const BitBlock cw = encode(code, msg);
        const RealBlock y = transmit(cw, model, stream);
        const DetectionResult det = viterbi_hard(y, model);
        ws.bind(det.hard_sequence, y, model);
        for (const Burst& b : dict.bursts) cdf.sorted_samples.push_back(ws.rel(b.indices));
    }
    std::sort(cdf.sorted_samples.begin(), cdf.sorted_samples.end());
    return cdf;
}

TwoLineFit fit_two_line(const CdfModel& cdf) {
    if (cdf.sorted_samples.empty()) throw std::invalid_argument("fit_two_line: empty model");
    if (cdf.sorted_samples.front() == cdf.sorted_samples.back())
        throw std::invalid_argument("fit_two_line: degenerate (constant) sample set");

    const int grid = static_cast<int>(std::min<std::size_t>(999, cdf.sorted_samples.size()));
    std::vector<double> ps(static_cast<std::size_t>(grid)), qs(static_cast<std::size_t>(grid));
    for (int j = 0; j < grid; ++j) {
        ps[static_cast<std::size_t>(j)] = static_cast<double>(j + 1) / (grid + 1);
        qs[static_cast<std::size_t>(j)] = cdf.quantile(ps[static_cast<std::size_t>(j)]);
    }

    TwoLineFit best;
    best.residual = std::numeric_limits<double>::infinity();
    // continuous two-piece model: f(p) = c + m1*min(p-b,0) + m2*max(p-b,0)
    for (int bi = 2; bi < grid - 2; ++bi) {
        const double b = ps[static_cast<std::size_t>(bi)];
        double ata[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        double atb[3] = {0, 0, 0};
        for (int j = 0; j < grid; ++j) {
            const double d = ps[static_cast<std::size_t>(j)] - b;
            const std::array<double, 3> row{1.0, std::min(d, 0.0), std::max(d, 0.0)};
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) ata[r][c] += row[static_cast<std::size_t>(r)] * row[static_cast<std::size_t>(c)];
                atb[r] += row[static_cast<std::size_t>(r)] * qs[static_cast<std::size_t>(j)];
            }
        }
        // 3x3 Gaussian elimination with partial pivoting
        double m[3][4];
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] = ata[r][c];
            m[r][3] = atb[r];
        }
        bool singular = false;
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
            if (std::abs(m[piv][col]) < 1e-14) { singular = true; break; }
            std::swap(m[col], m[piv]);
            for (int r = 0; r < 3; ++r) {
                if (r == col) continue;
                const double f = m[r][col] / m[col][col];
                for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
            }
        }
        if (singular) continue;
        const double c0 = m[0][3] / m[0][0], m1 = m[1][3] / m[1][1], m2 = m[2][3] / m[2][2];
        double rss = 0.0;
        for (int j = 0; j < grid; ++j) {
            const double d = ps[static_cast<std::size_t>(j)] - b;
            const double f = c0 + (d <= 0.0 ? m1 : m2) * d;
            const double e = f - qs[static_cast<std::size_t>(j)];
            rss += e * e;
        }
        if (rss < best.residual) {
            best.breakpoint = b;
            best.value_at_break = c0;
            best.slope_lo = m1;
            best.slope_hi = m2;
            best.residual = rss;
        }
    }
    if (!std::isfinite(best.residual)) throw std::runtime_error("fit_two_line: fit failed");
    return best;
}

void save_cdf_model(const CdfModel& cdf, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open cdf cache for writing: " + path);
    out << "grand-isi-cdf-v1\n";
    out << "code_id=" << cdf.code_id << "\n";
    out << "taps=";
    for (std::size_t i = 0; i < cdf.taps.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", cdf.taps[i]);
        out << (i ? "," : "") << buf;
    }
    out << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", cdf.sigma2);
    out << "sigma2=" << buf << "\n";
    out << "g=" << cdf.g << "\n";
    out << "trials=" << cdf.trials << "\n";
    out << "seed=" << cdf.seed << "\n";
    out << "count=" << cdf.sorted_samples.size() << "\n";
    out.write(reinterpret_cast<const char*>(cdf.sorted_samples.data()),
              static_cast<std::streamsize>(cdf.sorted_samples.size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write to cdf cache: " + path);
}

CdfModel load_cdf_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open cdf cache: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "grand-isi-cdf-v1")
        throw std::runtime_error("not a cdf cache file: " + path);
    CdfModel cdf;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("malformed cdf header: " + line);
        const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "code_id") cdf.code_id = val;
        else if (key == "taps") {
            std::stringstream ss(val);
            std::string tok;
            while (std::getline(ss, tok, ',')) cdf.taps.push_back(std::stod(tok));
        } else if (key == "sigma2") cdf.sigma2 = std::stod(val);
        else if (key == "g") cdf.g = std::stoi(val);
        else if (key == "trials") cdf.trials = std::stoull(val);
        else if (key == "seed") cdf.seed = std::stoull(val);
        else if (key == "count") { count = std::stoull(val); break; }
        else throw std::runtime_error("unknown cdf header key: " + key);
    }
    cdf.sorted_samples.resize(count);
    in.read(reinterpret_cast<char*>(cdf.sorted_samples.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double))
        throw std::runtime_error("truncated cdf cache: " + path);
    return cdf;
}

}  // namespace gisi
