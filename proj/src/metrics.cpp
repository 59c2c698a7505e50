#include "trifuse/metrics.hpp"

#include "trifuse/clahe.hpp"  // level_bin
#include "trifuse/image_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace trifuse {

namespace {

constexpr int kBins = 256;

std::vector<std::uint64_t> level_histogram(const Image& img) {
    std::vector<std::uint64_t> hist(kBins, 0);
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j)
            ++hist[std::size_t(level_bin(img.px(i, j), img.range, kBins))];
    return hist;
}

}  // namespace

double entropy(const Image& img) {
    const auto hist = level_histogram(img);
    const double n = double(img.pixels());
    double en = 0.0;
    for (auto h : hist) {
        if (h == 0) continue;
        const double p = double(h) / n;
        en -= p * std::log2(p);
    }
    return en;
}

double mutual_information(const Image& a, const Image& b) {
    require(a.same_size(b), "mutual_information: dimensions differ");
    std::vector<std::uint64_t> joint(std::size_t(kBins) * kBins, 0);
    std::vector<std::uint64_t> ma(kBins, 0), mb(kBins, 0);
    for (int i = 0; i < a.height(); ++i)
        for (int j = 0; j < a.width(); ++j) {
            const int x = level_bin(a.px(i, j), a.range, kBins);
            const int y = level_bin(b.px(i, j), b.range, kBins);
            ++joint[std::size_t(x) * kBins + y];
            ++ma[std::size_t(x)];
            ++mb[std::size_t(y)];
        }
    const double n = double(a.pixels());
    double mi = 0.0;
    for (int x = 0; x < kBins; ++x) {
        if (ma[std::size_t(x)] == 0) continue;
        for (int y = 0; y < kBins; ++y) {
            const std::uint64_t j = joint[std::size_t(x) * kBins + y];
            if (j == 0) continue;
            const double pxy = double(j) / n;
            const double px = double(ma[std::size_t(x)]) / n;
            const double py = double(mb[std::size_t(y)]) / n;
            mi += pxy * std::log2(pxy / (px * py));
        }
    }
    return mi;
}

double fusion_mutual_information(const Image& a, const Image& b, const Image& fused) {
    return mutual_information(a, fused) + mutual_information(b, fused);
}

double std_dev(const Image& img) {
    const double n = double(img.pixels());
    const double mean = img.px.sum() / n;
    double acc = 0.0;
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j) {
            const double d = img.px(i, j) - mean;
            acc += d * d;
        }
    return std::sqrt(acc / n);
}

double spatial_frequency(const Image& img) {
    const int m = img.height(), n = img.width();
    require(m >= 2 && n >= 2, "spatial_frequency: image must be at least 2x2");
    double row_acc = 0.0, col_acc = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j + 1 < n; ++j) {
            const double d = img.px(i, j + 1) - img.px(i, j);
            row_acc += d * d;
        }
    for (int i = 0; i + 1 < m; ++i)
        for (int j = 0; j < n; ++j) {
            const double d = img.px(i + 1, j) - img.px(i, j);
            col_acc += d * d;
        }
    const double sf_row = std::sqrt(row_acc / (double(m) * (n - 1)));
    const double sf_col = std::sqrt(col_acc / (double(m - 1) * n));
    return std::sqrt(sf_row * sf_row + sf_col * sf_col);
}

double ssim(const Image& a, const Image& b) {
    require(a.same_size(b), "ssim: dimensions differ");
    require(std::min(a.width(), a.height()) >= 11, "ssim: image smaller than 11x11 window");
    const double L = a.range.span();
    const double c1 = (0.01 * L) * (0.01 * L);
    const double c2 = (0.03 * L) * (0.03 * L);

    const double sigma = 1.5;
    const int radius = 5;
    const Plane mu1 = gaussian_filter(a.px, sigma, radius);
    const Plane mu2 = gaussian_filter(b.px, sigma, radius);
    const Plane s11 = gaussian_filter(a.px.square(), sigma, radius) - mu1.square();
    const Plane s22 = gaussian_filter(b.px.square(), sigma, radius) - mu2.square();
    const Plane s12 = gaussian_filter(a.px * b.px, sigma, radius) - mu1 * mu2;

    const Plane num = (2.0 * mu1 * mu2 + c1) * (2.0 * s12 + c2);
    const Plane den = (mu1.square() + mu2.square() + c1) * (s11 + s22 + c2);
    return (num / den).mean();
}

namespace {

struct EdgeField {
    Plane strength;
    Plane angle;  // folded into (-pi/2, pi/2]
};

EdgeField edge_field(const Image& img) {
    const SobelResult g = sobel_gradient(img.px);
    EdgeField f;
    f.strength = g.magnitude;
    f.angle.resize(img.height(), img.width());
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j) {
            const double gx = g.gx(i, j), gy = g.gy(i, j);
            double a = (gx == 0.0 && gy == 0.0) ? M_PI / 2 : std::atan2(gy, gx);
            if (a > M_PI / 2) a -= M_PI;
            if (a <= -M_PI / 2) a += M_PI;
            f.angle(i, j) = a;
        }
    return f;
}

// Sigmoid preservation factor, scaled so a perfectly preserved edge (x = 1)
// scores exactly gamma.
double preservation(double x, double gamma, double kappa, double shift) {
    const double top = 1.0 + std::exp(kappa * (1.0 - shift));
    return gamma * top / (1.0 + std::exp(kappa * (x - shift)));
}

constexpr double kGammaG = 0.9994, kKappaG = -15.0, kShiftG = 0.5;
constexpr double kGammaA = 0.9879, kKappaA = -22.0, kShiftA = 0.8;

// Per-pixel edge preservation of `src` edges in `fused`.
Plane preservation_map(const EdgeField& src, const EdgeField& fused) {
    const int h = int(src.strength.rows()), w = int(src.strength.cols());
    Plane q(h, w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            const double gs = src.strength(i, j), gf = fused.strength(i, j);
            double G = 0.0;
            if (gs > gf)
                G = gf / gs;
            else if (gf > gs)
                G = gs / gf;
            else
                G = gs > 0.0 ? 1.0 : 0.0;
            const double delta = std::abs(src.angle(i, j) - fused.angle(i, j));
            const double A = std::abs(delta - M_PI / 2) / (M_PI / 2);
            q(i, j) = preservation(G, kGammaG, kKappaG, kShiftG) *
                      preservation(A, kGammaA, kKappaA, kShiftA);
        }
    return q;
}

// Classic two-input weighted score; for one source the second slot is empty.
QabfResult qabf_pair(const EdgeField& a, const EdgeField* b, const EdgeField& fused) {
    const Plane qa = preservation_map(a, fused);
    double num = (qa * a.strength).sum();
    double den = a.strength.sum();
    if (b) {
        const Plane qb = preservation_map(*b, fused);
        num += (qb * b->strength).sum();
        den += b->strength.sum();
    }
    if (den <= 0.0) return {0.0, false};
    return {num / den, true};
}

}  // namespace

QabfResult qabf(const std::vector<Image>& sources, const Image& fused) {
    require(!sources.empty(), "qabf: need at least one source");
    for (const auto& s : sources)
        require(s.same_size(fused), "qabf: dimensions differ");

    std::vector<EdgeField> fields;
    fields.reserve(sources.size());
    for (const auto& s : sources) fields.push_back(edge_field(s));
    const EdgeField ff = edge_field(fused);

    if (sources.size() == 1) return qabf_pair(fields[0], nullptr, ff);
    if (sources.size() == 2) return qabf_pair(fields[0], &fields[1], ff);

    // More inputs: average the pairwise two-input scores.
    double acc = 0.0;
    int count = 0;
    bool defined = true;
    for (std::size_t i = 0; i < fields.size(); ++i)
        for (std::size_t j = i + 1; j < fields.size(); ++j) {
            const QabfResult r = qabf_pair(fields[i], &fields[j], ff);
            defined = defined && r.defined;
            acc += r.score;
            ++count;
        }
    return {acc / double(count), defined};
}

namespace {

Plane decimate2(const Plane& p) {
    const int h = int((p.rows() + 1) / 2), w = int((p.cols() + 1) / 2);
    Plane out(h, w);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) out(i, j) = p(2 * i, 2 * j);
    return out;
}

}  // namespace

double vif(const Image& ref, const Image& dist) {
    require(ref.same_size(dist), "vif: dimensions differ");
    require(std::min(ref.width(), ref.height()) >= 16, "vif: image must be at least 16x16");
    constexpr double kNoiseVar = 2.0;
    constexpr double kEps = 1e-10;

    Plane r = ref.px, d = dist.px;
    double num = 0.0, den = 0.0;
    for (int scale = 1; scale <= 4; ++scale) {
        const int taps = (1 << (4 - scale + 1)) + 1;  // 17, 9, 5, 3
        const int radius = (taps - 1) / 2;
        const double sigma = double(taps) / 5.0;
        if (scale > 1) {
            r = decimate2(gaussian_filter(r, sigma, radius));
            d = decimate2(gaussian_filter(d, sigma, radius));
        }
        const Plane mu1 = gaussian_filter(r, sigma, radius);
        const Plane mu2 = gaussian_filter(d, sigma, radius);
        const Plane s11 = gaussian_filter(r.square(), sigma, radius) - mu1.square();
        const Plane s22 = gaussian_filter(d.square(), sigma, radius) - mu2.square();
        const Plane s12 = gaussian_filter(r * d, sigma, radius) - mu1 * mu2;
        for (int i = 0; i < s11.rows(); ++i)
            for (int j = 0; j < s11.cols(); ++j) {
                double v1 = s11(i, j), v2 = s22(i, j), cov = s12(i, j);
                double g = cov / (v1 + kEps);
                double sv = v2 - g * cov;
                if (v1 < kEps) {
                    g = 0.0;
                    sv = v2;
                    v1 = 0.0;
                }
                if (v2 < kEps) {
                    g = 0.0;
                    sv = 0.0;
                }
                if (g < 0.0) {
                    sv = v2;
                    g = 0.0;
                }
                if (sv < kEps) sv = kEps;
                num += std::log2(1.0 + g * g * v1 / (sv + kNoiseVar));
                den += std::log2(1.0 + v1 / kNoiseVar);
            }
    }
    if (den == 0.0) return 1.0;  // reference carries no information
    return num / den;
}

namespace {

std::vector<std::pair<std::string, Image>> sample_sources(const Sample& s) {
    std::vector<std::pair<std::string, Image>> out;
    out.emplace_back("rgb", to_luminance(s.rgb));
    out.emplace_back("thermal", s.thermal);
    if (s.syn_swir) out.emplace_back("synswir", *s.syn_swir);
    if (s.real_swir) out.emplace_back("realswir", *s.real_swir);
    return out;
}

}  // namespace

MetricReport score_sources(const std::vector<std::pair<std::string, Image>>& sources,
                           const Image& fused, const MetricOptions& opt) {
    require(!sources.empty(), "score_sources: no sources available");
    const Image f8 = to_common8(fused, opt.quantize);

    MetricReport r;
    r.en = entropy(f8);
    r.sd = std_dev(f8);
    r.sf = spatial_frequency(f8);

    for (const auto& [name, src] : sources) {
        const Image s8 = to_common8(src, opt.quantize);
        SourceScores sc;
        sc.mi = mutual_information(s8, f8);
        sc.ssim = ssim(s8, f8);
        const QabfResult q = qabf({s8}, f8);
        sc.qabf = q.score;
        if (!q.defined) r.warnings.push_back("qabf undefined for source " + name);
        sc.vif = vif(s8, f8);
        r.per_source.emplace_back(name, sc);
    }
    const double n = double(r.per_source.size());
    for (const auto& [name, sc] : r.per_source) {
        r.mi += sc.mi / n;
        r.ssim += sc.ssim / n;
        r.qabf += sc.qabf / n;
        r.vif += sc.vif / n;
    }
    return r;
}

MetricReport score_fused(const Sample& sample, const Image& fused, const MetricOptions& opt) {
    MetricReport r = score_sources(sample_sources(sample), fused, opt);
    r.image_id = sample.id;
    return r;
}

std::string metric_csv_header() {
    return "id,method,en,sd,sf,mi,vif,qabf,ssim,ms_per_frame";
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string metric_csv_row(const MetricReport& r) {
    std::string row = r.image_id + "," + r.method;
    for (double v : {r.en, r.sd, r.sf, r.mi, r.vif, r.qabf, r.ssim}) row += "," + fmt(v);
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", r.wall_time_ms);
    row += ",";
    row += ms;
    return row;
}

std::string per_source_csv_header() { return "id,method,source,mi,vif,qabf,ssim"; }

std::vector<std::string> per_source_csv_rows(const MetricReport& r) {
    std::vector<std::string> rows;
    for (const auto& [name, sc] : r.per_source)
        rows.push_back(r.image_id + "," + r.method + "," + name + "," + fmt(sc.mi) + "," +
                       fmt(sc.vif) + "," + fmt(sc.qabf) + "," + fmt(sc.ssim));
    return rows;
}

}  // namespace trifuse
