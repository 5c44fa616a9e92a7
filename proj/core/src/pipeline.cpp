#include "mitfas/pipeline.hpp"

#include "mitfas/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <regex>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace mitfas {

// ---------------------------------------------------------------------------
// Inputs

std::vector<fs::path> list_frame_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw InputError("frames directory not found: " + dir.string());
    static const std::regex pattern(R"(^(.*?)(\d+)\.(pgm|ppm|png)$)", std::regex::icase);
    std::map<long long, fs::path> by_index;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        std::smatch m;
        if (!std::regex_match(name, m, pattern)) continue;
        const long long index = std::stoll(m[2].str());
        if (!by_index.emplace(index, entry.path()).second) {
            throw InputError("duplicate frame number " + std::to_string(index) + " in " + dir.string());
        }
    }
    if (by_index.empty()) throw InputError("no frame files found in " + dir.string());
    std::vector<fs::path> files;
    long long expected = by_index.begin()->first;
    for (const auto& [index, path] : by_index) {
        if (index != expected) throw InputError("frame sequence gap: missing frame " + std::to_string(expected));
        files.push_back(path);
        ++expected;
    }
    return files;
}

std::vector<Frame> load_frames(const fs::path& dir) {
    const auto files = list_frame_files(dir);
    std::vector<Frame> frames;
    frames.reserve(files.size());
    for (const auto& f : files) {
        frames.push_back(read_image(f));
        const Frame& a = frames.front();
        const Frame& b = frames.back();
        if (a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels()) {
            throw InputError("frame format mismatch: " + f.filename().string() + " is " + std::to_string(b.width()) +
                             "x" + std::to_string(b.height()) + "x" + std::to_string(b.channels()) + ", expected " +
                             std::to_string(a.width()) + "x" + std::to_string(a.height()) + "x" +
                             std::to_string(a.channels()));
        }
    }
    return frames;
}

namespace {

BBoxSource parse_source(const std::string& s, std::size_t frame, const std::string& where) {
    if (s.empty()) return frame == 0 ? BBoxSource::Seed : BBoxSource::Detector;
    if (s == "seed") return BBoxSource::Seed;
    if (s == "detector") return BBoxSource::Detector;
    throw InputError(where + ": unknown box source '" + s + "'");
}

BBoxAnnotation make_annotation(long long frame, long long x, long long y, long long w, long long h,
                               const std::string& source, const std::string& where) {
    if (frame < 0) throw InputError(where + ": negative frame index");
    if (w <= 0 || h <= 0) throw InputError(where + ": box width and height must be positive");
    const auto fits = [](long long v) {
        return v >= std::numeric_limits<int>::min() && v <= std::numeric_limits<int>::max();
    };
    if (!fits(x) || !fits(y) || !fits(w) || !fits(h)) throw InputError(where + ": coordinate out of range");
    const auto idx = static_cast<std::size_t>(frame);
    return BBoxAnnotation{idx, BBox{static_cast<int>(x), static_cast<int>(y), static_cast<int>(w), static_cast<int>(h)},
                          parse_source(source, idx, where)};
}

std::vector<BBoxAnnotation> parse_bbox_json(const std::string& text, const fs::path& path) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    if (!doc.is_array()) throw InputError(path.string() + ": expected a JSON array of boxes");
    std::vector<BBoxAnnotation> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string where = path.string() + " record " + std::to_string(i);
        const auto& r = doc[i];
        try {
            out.push_back(make_annotation(r.at("frame").get<long long>(), r.at("x").get<long long>(),
                                          r.at("y").get<long long>(), r.at("w").get<long long>(),
                                          r.at("h").get<long long>(), r.value("source", std::string{}), where));
        } catch (const json::exception& e) {
            throw InputError(where + ": " + e.what());
        }
    }
    return out;
}

std::vector<BBoxAnnotation> parse_bbox_lines(const std::string& text, const fs::path& path) {
    std::vector<BBoxAnnotation> out;
    std::istringstream in(text);
    std::string line;
    for (int line_no = 1; std::getline(in, line); ++line_no) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::vector<std::string> tok{std::istream_iterator<std::string>(fields), {}};
        if (tok.empty()) continue;
        const std::string where = path.string() + " line " + std::to_string(line_no);
        if (tok.size() != 5 && tok.size() != 6) throw InputError(where + ": expected frame,x,y,w,h[,source]");
        long long v[5];
        for (int k = 0; k < 5; ++k) {
            std::size_t used = 0;
            try {
                v[k] = std::stoll(tok[k], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok[k].size()) throw InputError(where + ": '" + tok[k] + "' is not an integer");
        }
        out.push_back(make_annotation(v[0], v[1], v[2], v[3], v[4], tok.size() == 6 ? tok[5] : "", where));
    }
    return out;
}

}  // namespace

std::vector<BBoxAnnotation> load_bboxes(const fs::path& path, const std::optional<FrameGeometry>& geometry) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open box file " + path.string());
    const std::string text{std::istreambuf_iterator<char>(in), {}};
    const auto first = text.find_first_not_of(" \t\r\n");
    auto annotations = first != std::string::npos && text[first] == '[' ? parse_bbox_json(text, path)
                                                                         : parse_bbox_lines(text, path);
    if (std::none_of(annotations.begin(), annotations.end(), [](const auto& a) { return a.frame_index == 0; })) {
        throw ConfigError(path.string() + ": no box for frame 0 (the seed)");
    }
    if (geometry) validate_annotations(annotations, *geometry);
    return annotations;
}

void validate_annotations(const std::vector<BBoxAnnotation>& annotations, const FrameGeometry& geometry) {
    for (const auto& a : annotations) {
        if (a.frame_index >= geometry.count) {
            throw InputError("box for frame " + std::to_string(a.frame_index) + " is beyond the " +
                             std::to_string(geometry.count) + "-frame sequence");
        }
        validate_bbox(a.bbox, geometry.width, geometry.height);
    }
}

const BBoxAnnotation& seed_annotation(const std::vector<BBoxAnnotation>& annotations) {
    const BBoxAnnotation* found = nullptr;
    for (const auto& a : annotations) {
        if (a.frame_index != 0) continue;
        if (a.source == BBoxSource::Seed) return a;
        if (!found) found = &a;
    }
    if (!found) throw ConfigError("no box for frame 0 (the seed)");
    return *found;
}

Detector annotation_detector(std::vector<BBoxAnnotation> annotations) {
    std::map<std::size_t, BBox> boxes;
    for (const auto& a : annotations) {
        if (a.source == BBoxSource::Detector) boxes.emplace(a.frame_index, a.bbox);
    }
    if (boxes.empty()) return {};
    return [boxes = std::move(boxes)](const Frame&, std::size_t t) -> std::optional<BBox> {
        const auto it = boxes.find(t);
        if (it == boxes.end()) return std::nullopt;
        return it->second;
    };
}

// ---------------------------------------------------------------------------
// Configuration

void validate(const PipelineConfig& config) {
    validate(config.search);
    validate(config.sampling);
    if (config.search.bins != config.sampling.bins) throw ConfigError("alignment and sampling bins differ");
}

json config_to_json(const PipelineConfig& c) {
    json j;
    j["bins"] = c.search.bins;
    j["stride"] = c.search.stride;
    j["scales"] = c.search.scale_set;
    j["thetas"] = c.search.theta_set;
    j["expansion"] = c.search.search_expansion;
    j["relocalize-every"] = c.search.relocalize_every;
    j["relocalize-mi-floor"] = c.search.relocalize_mi_floor;
    j["measure"] = std::string(measure_name(c.search.measure));
    j["alpha"] = c.sampling.alpha;
    j["beta"] = c.sampling.beta;
    j["n-frames"] = c.sampling.n_frames;
    j["seed"] = c.sampling.seed;
    j["stride-max"] = c.sampling.stride_max ? json(*c.sampling.stride_max) : json(nullptr);
    j["sample-raw"] = c.sample_raw;
    j["patch-format"] = c.patch_format == PatchFormat::Png ? "png" : "pgm";
    return j;
}

namespace {

std::vector<double> number_list(const json& v, const std::string& key) {
    if (v.is_array()) return v.get<std::vector<double>>();
    if (v.is_number()) return {v.get<double>()};
    if (v.is_string()) {
        std::vector<double> out;
        std::stringstream ss(v.get<std::string>());
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ConfigError("config key '" + key + "': '" + item + "' is not a number");
            }
        }
        return out;
    }
    throw ConfigError("config key '" + key + "' must be a list of numbers");
}

}  // namespace

PipelineConfig config_from_json(const json& j, PipelineConfig c) {
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "bins") {
                c.search.bins = c.sampling.bins = v.get<int>();
            } else if (key == "stride") {
                c.search.stride = v.get<int>();
            } else if (key == "scales") {
                c.search.scale_set = number_list(v, key);
            } else if (key == "thetas") {
                c.search.theta_set = number_list(v, key);
            } else if (key == "expansion") {
                c.search.search_expansion = v.get<double>();
            } else if (key == "relocalize-every") {
                c.search.relocalize_every = v.get<int>();
            } else if (key == "relocalize-mi-floor") {
                c.search.relocalize_mi_floor = v.get<double>();
            } else if (key == "measure") {
                const auto m = parse_measure(v.get<std::string>());
                if (!m) throw ConfigError("unknown measure '" + v.get<std::string>() + "'");
                c.search.measure = *m;
            } else if (key == "alpha") {
                c.sampling.alpha = v.get<double>();
            } else if (key == "beta") {
                c.sampling.beta = v.get<double>();
            } else if (key == "n-frames") {
                c.sampling.n_frames = v.get<int>();
            } else if (key == "seed") {
                c.sampling.seed = v.get<std::uint64_t>();
            } else if (key == "stride-max") {
                c.sampling.stride_max = v.is_null() ? std::nullopt : std::optional<int>(v.get<int>());
            } else if (key == "sample-raw") {
                c.sample_raw = v.get<bool>();
            } else if (key == "patch-format") {
                const auto f = v.get<std::string>();
                if (f != "pgm" && f != "png") throw ConfigError("patch-format must be pgm or png");
                c.patch_format = f == "png" ? PatchFormat::Png : PatchFormat::Pgm;
            } else if (key == "threads") {
                c.search.threads = v.get<int>();
            } else {
                throw ConfigError("unknown configuration key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid configuration value: ") + e.what());
    }
    return c;
}

PipelineConfig load_config_file(const fs::path& path, PipelineConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j, std::move(base));
}

// ---------------------------------------------------------------------------
// Manifest

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t state) {
    for (std::uint8_t b : bytes) {
        state ^= b;
        state *= 0x100000001b3ULL;
    }
    return state;
}

InputFingerprint fingerprint(const std::vector<Frame>& frames) {
    InputFingerprint fp;
    fp.frame_count = frames.size();
    if (!frames.empty()) {
        fp.width = frames.front().width();
        fp.height = frames.front().height();
        fp.channels = frames.front().channels();
    }
    std::uint64_t all = 0xcbf29ce484222325ULL;
    for (const auto& f : frames) {
        fp.frame_hashes.push_back(fnv1a64(f.values()));
        all = fnv1a64(f.values(), all);
    }
    fp.content_hash = all;
    return fp;
}

bool same_behavior(const RunManifest& a, const RunManifest& b) {
    return a.tool_version == b.tool_version && a.config == b.config && a.input == b.input && a.seed == b.seed &&
           a.trace == b.trace && a.sample == b.sample && a.aligned_files == b.aligned_files &&
           a.sampled_files == b.sampled_files;
}

namespace {

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t parse_hex64(const json& v) {
    const std::string s = v.get<std::string>();
    std::size_t used = 0;
    const auto value = std::stoull(s, &used, 16);
    if (used != s.size()) throw InputError("malformed hash '" + s + "'");
    return value;
}

// JSON has no infinities; PSNR of identical patches needs one.
json real(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double real_from(const json& v) {
    if (v.is_number()) return v.get<double>();
    const std::string s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw InputError("malformed number '" + s + "'");
}

json params_json(const TransformParams& p) {
    return json{{"theta", p.theta}, {"dx", p.dx}, {"dy", p.dy}, {"scale", p.scale}};
}

TransformParams params_from(const json& j) {
    return TransformParams{j.at("theta").get<double>(), j.at("dx").get<double>(), j.at("dy").get<double>(),
                           j.at("scale").get<double>()};
}

json rect_json(const Rect& r) { return json{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }

Rect rect_from(const json& j) {
    return Rect{j.at("x").get<double>(), j.at("y").get<double>(), j.at("w").get<double>(), j.at("h").get<double>()};
}

json bbox_json(const BBox& b) { return json{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}}; }

BBox bbox_from(const json& j) {
    return BBox{j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(), j.at("h").get<int>()};
}

void note_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where,
                  std::vector<std::string>* warnings) {
    if (!warnings || !obj.is_object()) return;
    for (const auto& [key, _] : obj.items()) {
        if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) == known.end()) {
            warnings->push_back("ignoring unknown manifest field '" + where + key + "'");
        }
    }
}

}  // namespace

json manifest_to_json(const RunManifest& m) {
    json j;
    j["schema_version"] = kManifestSchemaVersion;
    j["tool_version"] = m.tool_version;
    j["config"] = config_to_json(m.config);

    json hashes = json::array();
    for (auto h : m.input.frame_hashes) hashes.push_back(hex64(h));
    j["input"] = {{"frame_count", m.input.frame_count}, {"width", m.input.width},        {"height", m.input.height},
                  {"channels", m.input.channels},       {"frame_hashes", hashes},        {"content_hash", hex64(m.input.content_hash)}};
    j["seed_bbox"] = bbox_json(m.seed);

    json trace = json::array();
    for (const auto& r : m.trace) {
        trace.push_back({{"frame", r.frame_index},
                         {"params", params_json(r.params)},
                         {"score", real(r.score)},
                         {"search_area", rect_json(r.search_area)},
                         {"relocalized", r.relocalized}});
    }
    j["trace"] = trace;

    json steps = json::array();
    for (const auto& s : m.sample.steps) {
        steps.push_back({{"index", s.index},
                         {"score", real(s.score)},
                         {"pool", {s.pool.first, s.pool.last}},
                         {"stride", s.stride}});
    }
    j["sample"] = {{"seed", m.sample.seed}, {"indices", m.sample.indices()}, {"steps", steps}};
    j["outputs"] = {{"aligned", m.aligned_files}, {"sampled", m.sampled_files}};
    j["timings_ms"] = {{"load", m.timings.load_ms},
                       {"align", m.timings.align_ms},
                       {"sample", m.timings.sample_ms},
                       {"write", m.timings.write_ms}};
    return j;
}

RunManifest manifest_from_json(const json& j, std::vector<std::string>* warnings) {
    if (!j.is_object()) throw InputError("manifest must be a JSON object");
    if (!j.contains("schema_version")) throw InputError("manifest has no schema_version");
    const int version = j.at("schema_version").get<int>();
    if (version != kManifestSchemaVersion) {
        throw InputError("manifest schema version " + std::to_string(version) + " is not supported (expected " +
                         std::to_string(kManifestSchemaVersion) + ")");
    }
    note_unknown(j, {"schema_version", "tool_version", "config", "input", "seed_bbox", "trace", "sample", "outputs",
                     "timings_ms"},
                 "", warnings);

    RunManifest m;
    try {
        m.tool_version = j.at("tool_version").get<std::string>();
        m.config = config_from_json(j.at("config"));

        const auto& in = j.at("input");
        note_unknown(in, {"frame_count", "width", "height", "channels", "frame_hashes", "content_hash"}, "input.",
                     warnings);
        m.input.frame_count = in.at("frame_count").get<std::size_t>();
        m.input.width = in.at("width").get<int>();
        m.input.height = in.at("height").get<int>();
        m.input.channels = in.at("channels").get<int>();
        for (const auto& h : in.at("frame_hashes")) m.input.frame_hashes.push_back(parse_hex64(h));
        m.input.content_hash = parse_hex64(in.at("content_hash"));
        m.seed = bbox_from(j.at("seed_bbox"));

        for (const auto& r : j.at("trace")) {
            m.trace.push_back(AlignmentRecord{r.at("frame").get<std::size_t>(), params_from(r.at("params")),
                                              real_from(r.at("score")), rect_from(r.at("search_area")),
                                              r.at("relocalized").get<bool>()});
        }
        const auto& s = j.at("sample");
        m.sample.seed = s.at("seed").get<std::uint64_t>();
        for (const auto& st : s.at("steps")) {
            const auto pool = st.at("pool").get<std::vector<std::size_t>>();
            if (pool.size() != 2) throw InputError("sample pool must have two bounds");
            m.sample.steps.push_back(SampleStep{st.at("index").get<std::size_t>(), real_from(st.at("score")),
                                                IndexRange{pool[0], pool[1]}, st.at("stride").get<int>()});
        }
        const auto& out = j.at("outputs");
        m.aligned_files = out.at("aligned").get<std::vector<std::string>>();
        m.sampled_files = out.at("sampled").get<std::vector<std::string>>();
        if (j.contains("timings_ms")) {
            const auto& t = j.at("timings_ms");
            m.timings = StageTimings{t.value("load", 0.0), t.value("align", 0.0), t.value("sample", 0.0),
                                     t.value("write", 0.0)};
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed manifest: ") + e.what());
    } catch (const ConfigError& e) {
        throw InputError(std::string("malformed manifest config: ") + e.what());
    }
    if (m.trace.size() != m.input.frame_count) throw InputError("manifest trace length differs from frame count");
    return m;
}

void write_manifest(const RunManifest& manifest, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw RuntimeError("cannot write manifest " + path.string());
    out << manifest_to_json(manifest).dump(2) << '\n';
    if (!out) throw RuntimeError("write failed for manifest " + path.string());
}

RunManifest read_manifest(const fs::path& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open manifest " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("cannot parse manifest " + path.string() + ": " + e.what());
    }
    return manifest_from_json(j, warnings);
}

// ---------------------------------------------------------------------------
// Orchestration

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Removes what a failed run created, leaving pre-existing files alone.
class OutputGuard {
public:
    explicit OutputGuard(fs::path out_dir) : out_dir_(std::move(out_dir)) {}
    OutputGuard(const OutputGuard&) = delete;
    OutputGuard& operator=(const OutputGuard&) = delete;

    ~OutputGuard() {
        if (committed_) return;
        std::error_code ec;
        for (auto it = created_.rbegin(); it != created_.rend(); ++it) fs::remove_all(*it, ec);
    }

    void make_dir(const fs::path& dir) {
        std::vector<fs::path> missing;
        for (fs::path p = dir; !p.empty() && !fs::exists(p); p = p.parent_path()) {
            missing.push_back(p);
            if (p == p.parent_path()) break;
        }
        fs::create_directories(dir);
        for (auto it = missing.rbegin(); it != missing.rend(); ++it) created_.push_back(*it);
    }

    void track(const fs::path& file) { created_.push_back(file); }
    void commit() { committed_ = true; }

private:
    fs::path out_dir_;
    std::vector<fs::path> created_;
    bool committed_ = false;
};

std::string frame_name(std::size_t index, PatchFormat format) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06zu", index);
    return std::string(buf) + patch_extension(format);
}

}  // namespace

RunManifest run_pipeline(const fs::path& frames_dir, const fs::path& bbox_file, const fs::path& out_dir,
                         const PipelineConfig& config) {
    validate(config);
    const auto t_load = Clock::now();
    const auto files = list_frame_files(frames_dir);
    if (static_cast<std::size_t>(config.sampling.n_frames) > files.size()) {
        throw ConfigError("n_frames (" + std::to_string(config.sampling.n_frames) + ") exceeds the frame count (" +
                          std::to_string(files.size()) + ")");
    }

    RunManifest manifest;
    manifest.config = config;
    const std::vector<Frame> frames = load_frames(frames_dir);
    manifest.input = fingerprint(frames);
    const FrameGeometry geometry{frames.front().width(), frames.front().height(), frames.size()};
    const auto annotations = load_bboxes(bbox_file, geometry);
    manifest.seed = seed_annotation(annotations).bbox;
    manifest.timings.load_ms = ms_since(t_load);

    const auto t_align = Clock::now();
    std::vector<Frame> gray;
    gray.reserve(frames.size());
    for (const auto& f : frames) gray.push_back(to_grayscale(f));
    const AlignmentResult aligned =
        align_sequence(gray, manifest.seed, config.search, annotation_detector(annotations));
    manifest.trace = aligned.trace;
    manifest.timings.align_ms = ms_since(t_align);

    const auto t_sample = Clock::now();
    std::vector<PixelPatch> raw;
    if (config.sample_raw) {
        for (const auto& g : gray) {
            raw.emplace_back(g.width(), g.height(), std::vector<std::uint8_t>(g.values().begin(), g.values().end()));
        }
    }
    manifest.sample = sample_sequence(config.sample_raw ? raw : aligned.patches, config.sampling);
    manifest.timings.sample_ms = ms_since(t_sample);

    const auto t_write = Clock::now();
    OutputGuard guard(out_dir);
    const fs::path manifest_path = out_dir / "manifest.json";
    std::error_code ec;
    fs::remove(manifest_path, ec);  // a stale manifest must not outlive a failed run
    try {
        guard.make_dir(out_dir / "aligned");
        guard.make_dir(out_dir / "sampled");
        for (std::size_t t = 0; t < aligned.patches.size(); ++t) {
            const std::string rel = "aligned/" + frame_name(t, config.patch_format);
            guard.track(out_dir / rel);
            write_patch(out_dir / rel, aligned.patches[t], config.patch_format);
            manifest.aligned_files.push_back(rel);
        }
        const auto& steps = manifest.sample.steps;
        for (std::size_t k = 0; k < steps.size(); ++k) {
            char prefix[16];
            std::snprintf(prefix, sizeof prefix, "%02zu_", k);
            const std::string rel = "sampled/" + std::string(prefix) + frame_name(steps[k].index, config.patch_format);
            guard.track(out_dir / rel);
            const PixelPatch& patch = config.sample_raw ? raw[steps[k].index] : aligned.patches[steps[k].index];
            write_patch(out_dir / rel, patch, config.patch_format);
            manifest.sampled_files.push_back(rel);
        }
        manifest.timings.write_ms = ms_since(t_write);
        guard.track(manifest_path);
        write_manifest(manifest, manifest_path);
    } catch (const fs::filesystem_error& e) {
        throw RuntimeError(std::string("cannot write outputs: ") + e.what());
    }
    guard.commit();
    return manifest;
}

}  // namespace mitfas
