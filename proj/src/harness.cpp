#include "trifuse/harness.hpp"

#include "trifuse/cascade.hpp"
#include "trifuse/guided.hpp"
#include "trifuse/image_io.hpp"
#include "trifuse/image_ops.hpp"
#include "trifuse/net.hpp"
#include "trifuse/pyramid.hpp"
#include "trifuse/synthetic.hpp"
#include "trifuse/weights_io.hpp"

#include <json.hpp>
#include <sys/resource.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace trifuse {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void config_error(const std::string& what) {
    throw std::invalid_argument("config: " + what);
}

void apply_key(RunConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value) {
    auto as_int = [&](const std::string& v) { return std::stoi(v); };
    auto as_bool = [&](const std::string& v) {
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        config_error("bad boolean '" + v + "'");
    };
    if (section == "dataset") {
        if (key == "dir") cfg.dataset_dir = value;
        else if (key == "resize") {
            const auto x = value.find('x');
            if (x == std::string::npos) config_error("resize expects WxH");
            cfg.resize_w = as_int(value.substr(0, x));
            cfg.resize_h = as_int(value.substr(x + 1));
        } else if (key == "band") {
            if (value == "lwir") cfg.band = ThermalBand::LWIR;
            else if (value == "mwir") cfg.band = ThermalBand::MWIR;
            else config_error("band must be lwir or mwir");
        } else config_error("unknown key dataset." + key);
    } else if (section == "run") {
        if (key == "methods") {
            cfg.methods.clear();
            std::stringstream ss(value);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                tok = trim(tok);
                if (!tok.empty()) cfg.methods.push_back(tok);
            }
        } else if (key == "out") cfg.output_dir = value;
        else if (key == "jobs") cfg.jobs = as_int(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "recolor") cfg.recolor = as_bool(value);
        else if (key == "quantize_metrics") cfg.quantize_metrics = as_bool(value);
        else config_error("unknown key run." + key);
    } else if (section == "clahe") {
        if (key == "tiles") {
            const auto c = value.find(',');
            if (c == std::string::npos) config_error("tiles expects R,C");
            cfg.clahe.tile_rows = as_int(value.substr(0, c));
            cfg.clahe.tile_cols = as_int(value.substr(c + 1));
        } else if (key == "clip") cfg.clahe.clip_limit = std::stod(value);
        else if (key == "bins") cfg.clahe.bins = as_int(value);
        else config_error("unknown key clahe." + key);
    } else if (section == "lp") {
        if (key == "levels") cfg.lp_levels = as_int(value);
        else config_error("unknown key lp." + key);
    } else if (section == "net") {
        if (key == "weights_tri") cfg.weights_tri = value;
        else if (key == "weights_dual") cfg.weights_dual = value;
        else config_error("unknown key net." + key);
    } else if (section == "cascade") {
        if (key == "command") cfg.cascade_cmd = value;
        else config_error("unknown key cascade." + key);
    } else {
        config_error("unknown section [" + section + "]");
    }
}

}  // namespace

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open " + path.string());
    RunConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') config_error("bad section header at line " +
                                                 std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            config_error("expected key = value at line " + std::to_string(lineno));
        apply_key(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

bool method_registered(const std::string& method) {
    static const std::set<std::string> fixed = {"lp3", "gff3", "net-dual", "net-tri",
                                                "net-tri-realswir", "cascade"};
    if (fixed.count(method)) return true;
    return method.rfind("cascade:", 0) == 0 && method.size() > 8;
}

// ------------------------------------------------------------------ ingest

namespace {

bool is_image_file(const std::filesystem::path& p) {
    const auto ext = p.extension().string();
    return ext == ".png" || ext == ".pgm" || ext == ".ppm";
}

std::map<std::string, std::filesystem::path> stem_index(const std::filesystem::path& dir) {
    std::map<std::string, std::filesystem::path> out;
    if (!std::filesystem::is_directory(dir)) return out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && is_image_file(e.path())) out[e.path().stem().string()] = e.path();
    return out;
}

bool any_method_needs_synswir(const std::vector<std::string>& methods) {
    for (const auto& m : methods)
        if (m != "net-dual" && m != "net-tri-realswir") return true;
    return false;
}

}  // namespace

IngestResult ingest(const RunConfig& cfg) {
    IngestResult out;
    const auto rgb_dir = cfg.dataset_dir / "rgb";
    const auto thermal_dir = cfg.dataset_dir / "thermal";
    if (!std::filesystem::is_directory(rgb_dir) || !std::filesystem::is_directory(thermal_dir))
        config_error("dataset dir needs rgb/ and thermal/ subdirectories: " +
                     cfg.dataset_dir.string());

    const auto rgb_files = stem_index(rgb_dir);
    const auto thermal_files = stem_index(thermal_dir);
    const auto swir_files = stem_index(cfg.dataset_dir / "swir");

    for (const auto& [stem, path] : rgb_files)
        if (!thermal_files.count(stem))
            out.warnings.push_back("orphan rgb file without thermal mate: " + path.string());
    for (const auto& [stem, path] : thermal_files)
        if (!rgb_files.count(stem))
            out.warnings.push_back("orphan thermal file without rgb mate: " + path.string());
    if (rgb_files.empty()) out.warnings.push_back("no rgb files found under " + rgb_dir.string());

    const bool want_synswir = any_method_needs_synswir(cfg.methods);
    for (const auto& [stem, rgb_path] : rgb_files) {
        const auto it = thermal_files.find(stem);
        if (it == thermal_files.end()) continue;
        Sample s;
        s.id = stem;
        s.band = cfg.band;

        const LoadedImage rgb_raw = load_image(rgb_path);
        if (std::holds_alternative<ColorImage>(rgb_raw)) {
            s.rgb = std::get<ColorImage>(rgb_raw);
        } else {
            out.warnings.push_back(stem + ": grayscale rgb input, replicating planes");
            const Image g = std::get<Image>(rgb_raw);
            s.rgb.r = g.px;
            s.rgb.g = g.px;
            s.rgb.b = g.px;
            s.rgb.range = g.range;
        }
        const LoadedImage th_raw = load_image(it->second);
        if (std::holds_alternative<Image>(th_raw)) {
            s.thermal = std::get<Image>(th_raw);
        } else {
            out.warnings.push_back(stem + ": color thermal input, using luminance");
            s.thermal = to_luminance(std::get<ColorImage>(th_raw));
        }

        if (cfg.resize_w > 0 && cfg.resize_h > 0) {
            s.rgb = resize_bilinear(s.rgb, cfg.resize_w, cfg.resize_h);
            s.thermal = resize_bilinear(s.thermal, cfg.resize_w, cfg.resize_h);
        } else if (s.rgb.width() != s.thermal.width() || s.rgb.height() != s.thermal.height()) {
            out.warnings.push_back(stem + ": skipped, planes not registered and resize disabled");
            continue;
        }

        // Common 8-bit display range for every plane.
        ColorImage rgb8;
        rgb8.range = {0.0, 255.0};
        for (int c = 0; c < 3; ++c) {
            Image p(s.rgb.plane(c), s.rgb.range);
            rgb8.plane(c) = to_common8(p, false).px;
        }
        s.rgb = std::move(rgb8);
        s.thermal = to_common8(s.thermal, false);

        if (const auto sw = swir_files.find(stem); sw != swir_files.end()) {
            Image real = as_gray(load_image(sw->second));
            if (cfg.resize_w > 0 && cfg.resize_h > 0)
                real = resize_bilinear(real, cfg.resize_w, cfg.resize_h);
            s.real_swir = to_common8(real, false);
        }
        if (want_synswir) s.syn_swir = synthesize_swir(s.thermal, cfg.clahe);
        out.samples.push_back(std::move(s));
    }
    return out;  // std::map iteration already gives deterministic stem order
}

// ---------------------------------------------------------------- fusing

namespace {

struct MethodContext {
    const RunConfig* cfg = nullptr;
    std::map<std::string, ModelParams> nets;  // keyed by method name
};

std::vector<std::pair<std::string, Image>> sources_for_method(const std::string& method,
                                                              const Sample& s) {
    std::vector<std::pair<std::string, Image>> src;
    src.emplace_back("rgb", to_luminance(s.rgb));
    src.emplace_back("thermal", s.thermal);
    if (method == "net-dual") return src;
    if (method == "net-tri-realswir") {
        require(s.real_swir.has_value(), "net-tri-realswir needs a real swir plane");
        src.emplace_back("realswir", *s.real_swir);
    } else {
        require(s.syn_swir.has_value(), "method needs the derived band");
        src.emplace_back("synswir", *s.syn_swir);
    }
    return src;
}

Image fuse_with_method(const std::string& method, const Sample& s, const MethodContext& ctx) {
    const Image lum = to_luminance(s.rgb);
    auto third = [&]() -> const Image& {
        require(s.syn_swir.has_value(), "method needs the derived band");
        return *s.syn_swir;
    };
    if (method == "lp3")
        return lp_fuse({lum, s.thermal, third()}, ctx.cfg->lp_levels);
    if (method == "gff3")
        return gff_fuse({lum, s.thermal, third()});
    if (method == "cascade" || method.rfind("cascade:", 0) == 0) {
        std::string cmd = method == "cascade" ? ctx.cfg->cascade_cmd : method.substr(8);
        require(!cmd.empty(), "cascade method needs a command template");
        const BimodalOp op = external_command_op(cmd, ctx.cfg->output_dir / "tmp");
        return cascade_order_avg(op, lum, s.thermal, third());
    }
    if (method == "net-dual" || method == "net-tri")
        return forward(s, ctx.nets.at(method)).fused;
    if (method == "net-tri-realswir") {
        require(s.real_swir.has_value(), "net-tri-realswir needs a real swir plane");
        Sample swapped = s;
        swapped.syn_swir = s.real_swir;  // third branch reads this plane
        return forward(swapped, ctx.nets.at(method)).fused;
    }
    throw std::invalid_argument("unknown method " + method);
}

void write_json_warnings(const std::filesystem::path& path,
                         const std::vector<std::string>& warnings) {
    std::ofstream out(path);
    for (const auto& w : warnings) {
        nlohmann::json j;
        const auto colon = w.find(": ");
        if (colon != std::string::npos && colon < 64) {
            j["id"] = w.substr(0, colon);
            j["event"] = w.substr(colon + 2);
        } else {
            j["event"] = w;
        }
        out << j.dump() << "\n";
    }
}

}  // namespace

RunReport run_fuse(const RunConfig& cfg) {
    require(!cfg.methods.empty(), "config: no methods requested");
    for (const auto& m : cfg.methods)
        if (!method_registered(m)) config_error("unknown method " + m);

    MethodContext ctx;
    ctx.cfg = &cfg;
    for (const auto& m : cfg.methods) {
        if (m == "net-dual") {
            if (cfg.weights_dual.empty()) config_error("net-dual needs net.weights_dual");
            ctx.nets[m] = load_params(cfg.weights_dual);
            require(ctx.nets[m].config.branches() == 2, "net-dual weights must have 2 branches");
        } else if (m == "net-tri" || m == "net-tri-realswir") {
            if (cfg.weights_tri.empty()) config_error(m + " needs net.weights_tri");
            ctx.nets[m] = load_params(cfg.weights_tri);
            require(ctx.nets[m].config.branches() == 3, m + " weights must have 3 branches");
        }
    }

    IngestResult data = ingest(cfg);
    RunReport report;
    report.warnings = data.warnings;

    std::filesystem::create_directories(cfg.output_dir);
    for (const auto& m : cfg.methods)
        std::filesystem::create_directories(cfg.output_dir / "fused" / m);

    struct Item {
        std::vector<MetricReport> reports;
        std::vector<std::string> warnings;
        int failures = 0;
    };
    std::vector<Item> items(data.samples.size());
    std::atomic<std::size_t> next{0};
    const int jobs = std::max(1, cfg.jobs);
    const MetricOptions mopt{cfg.quantize_metrics};

    auto worker = [&]() {
        for (std::size_t i; (i = next.fetch_add(1)) < data.samples.size();) {
            const Sample& s = data.samples[i];
            Item& item = items[i];
            for (const auto& m : cfg.methods) {
                try {
                    const auto t0 = std::chrono::steady_clock::now();
                    Image fused = fuse_with_method(m, s, ctx);
                    const auto t1 = std::chrono::steady_clock::now();
                    const double overshoot = clamp_to_range(fused);
                    if (overshoot > 0.5)
                        item.warnings.push_back(s.id + ": " + m + " overshoot " +
                                                std::to_string(overshoot) + " levels pre-clamp");
                    MetricReport r = score_sources(sources_for_method(m, s), fused, mopt);
                    r.image_id = s.id;
                    r.method = m;
                    r.wall_time_ms =
                        std::chrono::duration<double, std::milli>(t1 - t0).count();
                    for (const auto& w : r.warnings) item.warnings.push_back(s.id + ": " + w);

                    const auto out_path = cfg.output_dir / "fused" / m / (s.id + ".png");
                    if (cfg.recolor)
                        save_image(reattach_chroma(s.rgb, fused), out_path);
                    else
                        save_image(fused, out_path);
                    item.reports.push_back(std::move(r));
                } catch (const std::exception& e) {
                    item.warnings.push_back(s.id + ": " + m + " failed: " + e.what());
                    ++item.failures;
                }
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::ofstream csv(cfg.output_dir / "metrics.csv");
    std::ofstream ps_csv(cfg.output_dir / "per_source.csv");
    csv << metric_csv_header() << "\n";
    ps_csv << per_source_csv_header() << "\n";
    for (auto& item : items) {
        report.item_failures += item.failures;
        for (auto& w : item.warnings) report.warnings.push_back(std::move(w));
        for (auto& r : item.reports) {
            csv << metric_csv_row(r) << "\n";
            for (const auto& row : per_source_csv_rows(r)) ps_csv << row << "\n";
            report.reports.push_back(std::move(r));
        }
    }
    write_json_warnings(cfg.output_dir / "warnings.jsonl", report.warnings);
    return report;
}

RunReport score_fused_dir(const RunConfig& cfg, const std::filesystem::path& fused_dir,
                          const std::string& method) {
    IngestResult data = ingest(cfg);
    RunReport report;
    report.warnings = data.warnings;
    std::filesystem::create_directories(cfg.output_dir);
    const MetricOptions mopt{cfg.quantize_metrics};

    std::ofstream csv(cfg.output_dir / "metrics.csv");
    std::ofstream ps_csv(cfg.output_dir / "per_source.csv");
    csv << metric_csv_header() << "\n";
    ps_csv << per_source_csv_header() << "\n";
    for (const Sample& s : data.samples) {
        std::filesystem::path p = fused_dir / (s.id + ".png");
        if (!std::filesystem::exists(p)) p = fused_dir / (s.id + ".pgm");
        if (!std::filesystem::exists(p)) {
            report.warnings.push_back(s.id + ": no fused image under " + fused_dir.string());
            ++report.item_failures;
            continue;
        }
        try {
            Image fused = as_gray(load_image(p));
            MetricReport r = score_fused(s, fused, mopt);
            r.method = method;
            csv << metric_csv_row(r) << "\n";
            for (const auto& row : per_source_csv_rows(r)) ps_csv << row << "\n";
            for (const auto& w : r.warnings) report.warnings.push_back(s.id + ": " + w);
            report.reports.push_back(std::move(r));
        } catch (const std::exception& e) {
            report.warnings.push_back(s.id + ": scoring failed: " + e.what());
            ++report.item_failures;
        }
    }
    write_json_warnings(cfg.output_dir / "warnings.jsonl", report.warnings);
    return report;
}

// ----------------------------------------------------------------- radar

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

}  // namespace

RadarTable radar_from_csvs(
    const std::vector<std::pair<std::string, std::filesystem::path>>& dataset_csvs) {
    require(!dataset_csvs.empty(), "radar: no input csvs");
    const std::vector<std::string> metric_names = {"en", "sd", "sf", "mi", "vif", "qabf", "ssim"};

    // dataset -> method -> per-metric accumulation.
    struct Acc {
        Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(7);
        long n = 0;
    };
    std::vector<std::map<std::string, Acc>> per_dataset;
    std::vector<std::string> method_order;

    for (const auto& [name, path] : dataset_csvs) {
        std::ifstream in(path);
        if (!in) config_error("radar: cannot open " + path.string());
        std::string line;
        if (!std::getline(in, line)) config_error("radar: empty csv " + path.string());
        const auto header = split_csv_line(trim(line));
        std::map<std::string, int> col;
        for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = int(i);
        for (const auto& mn : metric_names)
            if (!col.count(mn)) config_error("radar: column '" + mn + "' missing in " +
                                             path.string());
        if (!col.count("method")) config_error("radar: column 'method' missing");

        std::map<std::string, Acc> methods;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty()) continue;
            const auto f = split_csv_line(line);
            Acc& a = methods[f[std::size_t(col["method"])]];
            for (int k = 0; k < 7; ++k)
                a.sum[k] += std::stod(f[std::size_t(col[metric_names[std::size_t(k)]])]);
            ++a.n;
        }
        for (const auto& [m, acc] : methods)
            if (std::find(method_order.begin(), method_order.end(), m) == method_order.end())
                method_order.push_back(m);
        per_dataset.push_back(std::move(methods));
    }

    RadarTable table;
    table.methods = method_order;
    table.metrics = metric_names;
    table.normalized = method_order.size() >= 2;
    table.values = Eigen::MatrixXd::Zero(long(method_order.size()), 7);
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(long(method_order.size()), 7);

    for (const auto& dataset : per_dataset) {
        for (int k = 0; k < 7; ++k) {
            // Per-method mean score on this dataset.
            std::vector<std::pair<std::size_t, double>> scores;
            for (std::size_t mi = 0; mi < method_order.size(); ++mi) {
                const auto it = dataset.find(method_order[mi]);
                if (it == dataset.end() || it->second.n == 0) continue;
                scores.emplace_back(mi, it->second.sum[k] / double(it->second.n));
            }
            if (scores.empty()) continue;
            double lo = scores[0].second, hi = scores[0].second;
            for (const auto& [mi, v] : scores) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            for (const auto& [mi, v] : scores) {
                double norm;
                if (!table.normalized)
                    norm = v;  // single method: raw value, flagged
                else if (hi > lo)
                    norm = (v - lo) / (hi - lo);
                else
                    norm = 0.5;  // tie convention
                table.values(long(mi), k) += norm;
                counts(long(mi), k) += 1.0;
            }
        }
    }
    for (long i = 0; i < table.values.rows(); ++i)
        for (long k = 0; k < 7; ++k)
            if (counts(i, k) > 0) table.values(i, k) /= counts(i, k);
    return table;
}

void write_radar(const RadarTable& table, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "radar.csv");
        out << "method";
        for (const auto& m : table.metrics) out << "," << m;
        out << (table.normalized ? "" : ",raw_unnormalized") << "\n";
        for (std::size_t i = 0; i < table.methods.size(); ++i) {
            out << table.methods[i];
            for (int k = 0; k < int(table.metrics.size()); ++k) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.6f", table.values(long(i), k));
                out << "," << buf;
            }
            out << (table.normalized ? "" : ",1") << "\n";
        }
    }
    {
        std::ofstream out(dir / "radar_polar.csv");
        out << "method,metric,angle_rad,value\n";
        const double step = 2.0 * M_PI / double(table.metrics.size());
        for (std::size_t i = 0; i < table.methods.size(); ++i)
            for (std::size_t k = 0; k < table.metrics.size(); ++k) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.6f,%.6f", double(k) * step,
                              table.values(long(i), long(k)));
                out << table.methods[i] << "," << table.metrics[k] << "," << buf << "\n";
            }
    }
}

// ----------------------------------------------------------------- bench

std::vector<BenchRow> bench_methods(const RunConfig& cfg, int width, int height, int reps) {
    require(reps >= 3, "bench: reps must be >= 3");
    MethodContext ctx;
    ctx.cfg = &cfg;

    // Net methods run from saved weights when given, otherwise from a seeded
    // default-initialized model (throughput does not depend on the values).
    for (const auto& m : cfg.methods) {
        if (m == "net-dual")
            ctx.nets[m] = cfg.weights_dual.empty()
                              ? init_params(ModelConfig{16, 32, {3, 1}}, cfg.seed)
                              : load_params(cfg.weights_dual);
        else if (m == "net-tri" || m == "net-tri-realswir")
            ctx.nets[m] = cfg.weights_tri.empty()
                              ? init_params(ModelConfig{16, 32, {3, 1, 1}}, cfg.seed)
                              : load_params(cfg.weights_tri);
    }

    Sample s = synthetic_scene(width, height, cfg.seed + 1);
    s.id = "bench";
    attach_syn_swir(s, cfg.clahe);
    s.real_swir = s.syn_swir;  // stand-in plane so net-tri-realswir can run

    std::vector<BenchRow> rows;
    for (const auto& m : cfg.methods) {
        BenchRow row;
        row.method = m;
        std::vector<double> ms(static_cast<std::size_t>(reps));
        for (int r = 0; r < reps; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            (void)fuse_with_method(m, s, ctx);
            const auto t1 = std::chrono::steady_clock::now();
            ms[std::size_t(r)] = std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
        std::sort(ms.begin(), ms.end());
        auto pct = [&](double q) {
            return ms[std::size_t(std::llround(q * double(ms.size() - 1)))];
        };
        row.ms_median = pct(0.5);
        row.ms_p10 = pct(0.1);
        row.ms_p90 = pct(0.9);
        row.fps = 1000.0 / row.ms_median;
        if (ctx.nets.count(m)) row.params = param_count(ctx.nets.at(m));
        rusage usage{};
        getrusage(RUSAGE_SELF, &usage);
        row.peak_rss_kb = usage.ru_maxrss;
        rows.push_back(row);
    }
    return rows;
}

std::string bench_csv_header() {
    return "method,ms_median,ms_p10,ms_p90,fps,params,peak_rss_mb";
}

std::string bench_csv_row(const BenchRow& row) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%.3f,%.3f,%.3f,%.3f,%ld,%.1f", row.method.c_str(),
                  row.ms_median, row.ms_p10, row.ms_p90, row.fps, row.params,
                  double(row.peak_rss_kb) / 1024.0);
    return buf;
}

}  // namespace trifuse
